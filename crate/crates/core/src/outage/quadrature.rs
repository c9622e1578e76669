use std::f64::consts::PI;

use crate::channel::{BsrMode, Scheme, SystemParams, VuloReading};
use crate::error::{Error, Result};
use crate::mobility::{rwp_radial_pdf, PHI_MAX};
use crate::specfun::integrate_adaptive;

use super::{Method, OutageResult};

/// Settings of the deterministic outage integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Initial panels per dimension (at least 16).
    pub panels: usize,
    /// Absolute tolerance of the outer integral.
    pub tol: f64,
    /// Half-width of the standard-normal range for the polar angle.
    pub z_max: f64,
    /// Largest change under panel doubling still reported as converged.
    pub doubling_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panels: 16,
            tol: 1e-10,
            z_max: 9.0,
            doubling_tol: 1e-6,
        }
    }
}

/// `P_Δ[a − b·cos Δ < t]` for `Δ` uniform on the circle.
fn below_fraction(a: f64, b: f64, t: f64) -> f64 {
    if b <= 0.0 {
        return if a < t { 1.0 } else { 0.0 };
    }
    let q = (a - t) / b;
    if q >= 1.0 {
        0.0
    } else if q <= -1.0 {
        1.0
    } else {
        q.acos() / PI
    }
}

/// Outage probability over the azimuth at fixed `(r, φ)`.
fn azimuth_outage(scheme: Scheme, params: &SystemParams, thr: f64, r: f64, phi: f64) -> f64 {
    let h = params.ap_height;
    let n = params.n_l;
    let d = r.hypot(h);
    let (sp, cp) = phi.sin_cos();
    // every scheme's cosine has the form a − b·cos Δ
    let x_a = h * cp / d;
    let x_b = r * sp / d;
    match scheme {
        Scheme::Bsr => {
            if 1.0 < thr {
                1.0
            } else {
                0.0
            }
        }
        Scheme::NoLens => below_fraction(x_a, x_b, thr),
        Scheme::FixedLens => {
            let x_thr = (n * n * thr * thr - n * n + 1.0).max(0.0).sqrt();
            below_fraction(x_a, x_b, x_thr)
        }
        Scheme::Vulo => {
            let q = 1.0 - r * r / (n * n * d * d);
            let b = r * sp / (n * d);
            let a = match params.vulo_reading {
                VuloReading::Snell => q.sqrt() * cp,
                VuloReading::InverseRootPolar => q.powf(-0.5) * cp,
                VuloReading::InverseRootCartesian => {
                    let ez = h / d;
                    (-(ez - (n * n - 1.0 + ez * ez).powf(-0.5)) * cp + x_a) / n
                }
            };
            below_fraction(a, b, thr)
        }
    }
}

fn integrate_once(scheme: Scheme, gamma_th: f64, params: &SystemParams, spec: &QuadratureSpec, panels: usize) -> f64 {
    let b = params.budget();
    let (h, rc) = (params.ap_height, params.r_circ);
    let (mu, sigma) = (params.mu_phi, params.sigma_phi);
    let fold = |z: f64| (mu + sigma * z).abs().min(PHI_MAX);
    let inner = |r: f64| {
        let d2 = r * r + h * h;
        let thr = (gamma_th * d2.powf(b.m + 2.0) / b.gamma0).sqrt().max(b.cos_fov);
        if sigma == 0.0 {
            return azimuth_outage(scheme, params, thr, r, fold(0.0));
        }
        let g = |z: f64| (-0.5 * z * z).exp() / (2.0 * PI).sqrt() * azimuth_outage(scheme, params, thr, r, fold(z));
        integrate_adaptive(g, -spec.z_max, spec.z_max, panels, 0.1 * spec.tol).0
    };
    integrate_adaptive(|r| rwp_radial_pdf(r, rc) * inner(r), 0.0, rc, panels, spec.tol).0
}

/// Deterministic outage by nested adaptive quadrature over the radial
/// distance and the receiver polar angle; the azimuth is integrated in
/// closed form.
///
/// The result is recomputed with twice the initial panels; a change above
/// `spec.doubling_tol` marks it unconverged.
pub fn outage_quadrature(
    scheme: Scheme,
    gamma_th: f64,
    params: &SystemParams,
    spec: &QuadratureSpec,
) -> Result<OutageResult> {
    if spec.panels < 16 {
        return Err(Error::InvalidParameter(format!(
            "quadrature needs at least 16 panels, got {}",
            spec.panels
        )));
    }
    if scheme == Scheme::Bsr && params.bsr_mode == BsrMode::Physical {
        return Err(Error::InvalidParameter(
            "quadrature covers the ideally aligned BSR receiver only".into(),
        ));
    }
    if !(gamma_th > 0.0) {
        let mut r = OutageResult::deterministic(0.0, Method::Quadrature);
        r.converged = Some(true);
        return Ok(r);
    }
    let coarse = integrate_once(scheme, gamma_th, params, spec, spec.panels);
    let fine = integrate_once(scheme, gamma_th, params, spec, 2 * spec.panels);
    let change = (fine - coarse).abs();
    let mut r = OutageResult::deterministic(fine, Method::Quadrature);
    r.converged = Some(change <= spec.doubling_tol);
    if change > spec.doubling_tol {
        r.warnings.push(format!("panel doubling changed the result by {change:.3e}"));
    }
    Ok(r)
}
