//! Outage probability `P[SNR < γ_th]` by closed form, analytic
//! approximation, deterministic quadrature and Monte Carlo.

mod bsr;
mod monte_carlo;
mod quadrature;
mod vulo;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use bsr::{bsr_case3_total, bsr_outage_closed, bsr_pdf_y, BsrPdfParams};
pub use monte_carlo::{monte_carlo_counts, outage_monte_carlo, outage_monte_carlo_schemes, McCounts};
pub use quadrature::{outage_quadrature, QuadratureSpec};
pub use vulo::{
    sigma_y3_squared, sigma_y3_squared_series, vulo_c_coefficients, vulo_cos_incidence_polar,
    vulo_outage_chain, vulo_outage_closed, vulo_pdf_x11, vulo_snr_decomposed, AnalysisRules, CTable,
    ProductLaw, VuloDecomposition, VuloTermParams, X11Law,
};

/// How an outage figure was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    AnalyticApprox,
    Chain,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::ClosedForm,
        Method::AnalyticApprox,
        Method::Chain,
        Method::Quadrature,
        Method::MonteCarlo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::AnalyticApprox => "analytic_approx",
            Method::Chain => "chain",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown evaluator `{s}`")))
    }
}

/// Outage estimate with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageResult {
    pub p_out: f64,
    pub method: Method,
    /// Binomial standard error; Monte Carlo only.
    pub stderr: Option<f64>,
    /// Monte Carlo sample count, zero for deterministic evaluators.
    pub samples: u64,
    /// Grid-doubling verdict for quadrature.
    pub converged: Option<bool>,
    pub warnings: Vec<String>,
}

impl OutageResult {
    pub fn deterministic(p_out: f64, method: Method) -> Self {
        Self {
            p_out: p_out.clamp(0.0, 1.0),
            method,
            stderr: None,
            samples: 0,
            converged: None,
            warnings: Vec::new(),
        }
    }

    pub fn sampled(outages: u64, samples: u64) -> Self {
        let p = outages as f64 / samples as f64;
        Self {
            p_out: p,
            method: Method::MonteCarlo,
            stderr: Some((p * (1.0 - p) / samples as f64).sqrt()),
            samples,
            converged: None,
            warnings: Vec::new(),
        }
    }
}
