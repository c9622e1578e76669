//! Analytic approximation of the VULO outage: SNR decomposition into
//! `Y₁ + Y₂ + Y₃`, Hermite-mixture laws for the angular factors, the
//! hypergeometric coefficient tables, and the two ways of combining them.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::channel::{vulo_cos_polar, SystemParams, VuloReading};
use crate::error::{Error, Result};
use crate::mobility::rwp_radial_pdf;
use crate::specfun::{
    beta, binomial, gauss_hermite, gauss_legendre, hyp2f1_half, incomplete_beta_generalized,
    integrate_adaptive, meijer_g_0110, QuadratureRule,
};

use super::bsr::BsrPdfParams;
use super::{Method, OutageResult};

/// Quadrature orders and series cutoff used by the analytic chain.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRules {
    pub hermite: QuadratureRule,
    pub legendre: QuadratureRule,
    pub series_k: usize,
}

impl AnalysisRules {
    pub fn new(hermite_n: usize, legendre_n: usize, series_k: usize) -> Self {
        Self {
            hermite: gauss_hermite(hermite_n),
            legendre: gauss_legendre(legendre_n),
            series_k,
        }
    }
}

impl Default for AnalysisRules {
    fn default() -> Self {
        Self::new(30, 50, 40)
    }
}

/// Coefficients of the VULO SNR decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct VuloTermParams {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
    /// `a_{k,3} = −γ₀ n^(−(2k+1)) (−1)^k`, `k = 0..=K`.
    pub a3: Vec<f64>,
}

impl VuloTermParams {
    pub fn new(params: &SystemParams, series_k: usize) -> Self {
        let g = params.gamma0();
        let n = params.n_l;
        let h2 = params.ap_height * params.ap_height;
        let a3 = (0..=series_k)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                -g * n.powi(-(2 * k as i32 + 1)) * sign
            })
            .collect();
        Self {
            a11: g * (1.0 - n.powi(-2)),
            a12: g * n.powi(-2),
            a21: g * h2 * n.powi(-2),
            a22: -g * h2 * n.powi(-2),
            a3,
        }
    }

    /// Radial factor of `Y₃`, truncated series:
    /// `Σ a_{k,3} C(1/2, k) r^(2k+1) (r²+h²)^(−(k+m+5/2))`.
    pub fn y3_radial(&self, r: f64, h: f64, m: f64) -> f64 {
        let d2 = r * r + h * h;
        let q = r * r / d2;
        let base = r * d2.powf(-(m + 2.5));
        let mut qk = 1.0;
        let mut sum = 0.0;
        for (k, a) in self.a3.iter().enumerate() {
            sum += a * binomial(0.5, k) * qk;
            qk *= q;
        }
        sum * base
    }
}

/// VULO incidence cosine in polar form using the reading configured in `params`.
pub fn vulo_cos_incidence_polar(r: f64, theta_rel: f64, phi_r: f64, params: &SystemParams) -> f64 {
    vulo_cos_polar(r, theta_rel, phi_r, params.ap_height, params.n_l, params.vulo_reading)
}

/// The three SNR terms at one pose and the undecomposed value they approximate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VuloDecomposition {
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
    /// `γ₀(r²+h²)^(−(m+2))·cos²φ_LR` from the refraction-consistent cosine.
    pub exact: f64,
}

impl VuloDecomposition {
    pub fn total(&self) -> f64 {
        self.y1 + self.y2 + self.y3
    }

    pub fn relative_error(&self) -> f64 {
        (self.total() - self.exact).abs() / self.exact.abs().max(f64::MIN_POSITIVE)
    }
}

pub fn vulo_snr_decomposed(
    r: f64,
    theta_rel: f64,
    phi_r: f64,
    params: &SystemParams,
    terms: &VuloTermParams,
) -> VuloDecomposition {
    let m = params.m();
    let h = params.ap_height;
    let d2 = r * r + h * h;
    let (c2, s2) = (phi_r.cos().powi(2), phi_r.sin().powi(2));
    let cd2 = theta_rel.cos().powi(2);
    let y1 = d2.powf(-(m + 2.0)) * (terms.a11 * c2 + terms.a12 * s2 * cd2);
    let y2 = d2.powf(-(m + 3.0)) * (terms.a21 * c2 + terms.a22 * s2 * cd2);
    let y3 = terms.y3_radial(r, h, m) * theta_rel.cos() * (2.0 * phi_r).sin();
    let c = vulo_cos_polar(r, theta_rel, phi_r, h, params.n_l, VuloReading::Snell);
    VuloDecomposition {
        y1,
        y2,
        y3,
        exact: params.gamma0() * d2.powf(-(m + 2.0)) * c * c,
    }
}

/// Law of `X = a·cos²φ + b·sin²φ·cos²Δ` with `Δ` uniform and `φ` Gaussian,
/// the Gaussian integrated by Gauss–Hermite.
///
/// Node `i` contributes an arcsine law between `A_i` and `A_i + B_i`
/// with weight `w_i/√π`.
#[derive(Debug, Clone, PartialEq)]
pub struct X11Law {
    /// `(w_i/√π, A_i, B_i)`.
    pub nodes: Vec<(f64, f64, f64)>,
    /// Hermite weights before normalisation.
    pub raw_weights: Vec<f64>,
}

impl X11Law {
    pub fn new(a: f64, b: f64, mu: f64, sigma: f64, hermite: &QuadratureRule) -> Self {
        let norm = PI.sqrt();
        let mut nodes = Vec::with_capacity(hermite.len());
        let mut raw = Vec::with_capacity(hermite.len());
        for (u, w) in hermite.iter() {
            let phi = std::f64::consts::SQRT_2 * sigma * u + mu;
            let (s, c) = phi.sin_cos();
            nodes.push((w / norm, a * c * c, b * s * s));
            raw.push(w);
        }
        Self { nodes, raw_weights: raw }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.nodes
            .iter()
            .map(|&(w, a, b)| {
                let (lo, hi) = if b >= 0.0 { (a, a + b) } else { (a + b, a) };
                if x <= lo || x >= hi {
                    0.0
                } else {
                    w / (PI * ((x - lo) * (hi - x)).sqrt())
                }
            })
            .sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.nodes
            .iter()
            .map(|&(w, a, b)| {
                let (lo, hi) = if b >= 0.0 { (a, a + b) } else { (a + b, a) };
                let f = if x <= lo {
                    0.0
                } else if x >= hi {
                    1.0
                } else {
                    2.0 / PI * ((x - lo) / (hi - lo)).sqrt().asin()
                };
                w * f
            })
            .sum()
    }

    pub fn support(&self) -> (f64, f64) {
        self.nodes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, a, b)| {
            (lo.min(a.min(a + b)), hi.max(a.max(a + b)))
        })
    }
}

/// Density of `X₁₁` at `x` for the configured orientation statistics.
pub fn vulo_pdf_x11(x: f64, params: &SystemParams, hermite: &QuadratureRule) -> f64 {
    let t = VuloTermParams::new(params, 0);
    X11Law::new(t.a11, t.a12, params.mu_phi, params.sigma_phi, hermite).pdf(x)
}

const GL_PIECE: usize = 32;

/// Law of `Y = W·X` with `W = (r²+h²)^(−p)` (power-law density) and `X`
/// an independent Hermite mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductLaw {
    pub w: BsrPdfParams,
    pub x: X11Law,
    gl: QuadratureRule,
}

impl ProductLaw {
    pub fn new(w: BsrPdfParams, x: X11Law) -> Self {
        Self {
            w,
            x,
            gl: gauss_legendre(GL_PIECE),
        }
    }

    /// `Y₁ = (r²+h²)^(−(m+2))·X₁₁`.
    pub fn y1(params: &SystemParams, hermite: &QuadratureRule) -> Self {
        let t = VuloTermParams::new(params, 0);
        Self::new(
            BsrPdfParams::for_power(params.m() + 2.0, 1.0, params.ap_height, params.r_circ),
            X11Law::new(t.a11, t.a12, params.mu_phi, params.sigma_phi, hermite),
        )
    }

    /// `Y₂ = (r²+h²)^(−(m+3))·X₂₁`.
    pub fn y2(params: &SystemParams, hermite: &QuadratureRule) -> Self {
        let t = VuloTermParams::new(params, 0);
        Self::new(
            BsrPdfParams::for_power(params.m() + 3.0, 1.0, params.ap_height, params.r_circ),
            X11Law::new(t.a21, t.a22, params.mu_phi, params.sigma_phi, hermite),
        )
    }

    pub fn support(&self) -> (f64, f64) {
        let (xl, xh) = self.x.support();
        let c = [xl * self.w.y1, xl * self.w.y2, xh * self.w.y1, xh * self.w.y2];
        (
            c.iter().copied().fold(f64::INFINITY, f64::min),
            c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    }

    /// `t ∈ [0, π/2]` at which `A + B sin²t = x`, clipped to the range.
    fn t_of(a: f64, b: f64, x: f64) -> f64 {
        if b == 0.0 {
            return if x <= a { 0.0 } else { FRAC_PI_2 };
        }
        ((x - a) / b).clamp(0.0, 1.0).sqrt().asin()
    }

    fn gl_piece<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        self.gl.integrate(lo, hi, f)
    }

    /// Density with the support of `W` respected: the hypergeometric
    /// coefficients integrate each node over its whole arcsine range,
    /// which is only exact for `y` well inside the support.
    pub fn pdf(&self, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        let (w1, w2) = (self.w.y1, self.w.y2);
        // admissible x: y/x ∈ [w1, w2]
        let (xl, xh) = if y > 0.0 { (y / w2, y / w1) } else { (y / w1, y / w2) };
        let ay = y.abs();
        let mut total = 0.0;
        for &(wi, a, b) in &self.x.nodes {
            let (ta, tb) = (Self::t_of(a, b, xl), Self::t_of(a, b, xh));
            let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
            if hi <= lo {
                continue;
            }
            for k in 0..3 {
                let e = self.w.b[k] - 1.0;
                let integral = self.gl_piece(lo, hi, |t| {
                    let s = t.sin();
                    (a + b * s * s).abs().powf(e)
                });
                total += wi * self.w.c[k] * ay.powf(-self.w.b[k]) * integral * 2.0 / PI;
            }
        }
        total
    }

    /// `P[Y ≤ y]`, integrating the closed-form CDF of `W` over each
    /// node's angular variable.
    pub fn cdf(&self, y: f64) -> f64 {
        let (w1, w2) = (self.w.y1, self.w.y2);
        let mut total = 0.0;
        for &(wi, a, b) in &self.x.nodes {
            let g = |t: f64| {
                let s = t.sin();
                let x = a + b * s * s;
                if x > 0.0 {
                    self.w.cdf(y / x)
                } else if x < 0.0 {
                    1.0 - self.w.cdf(y / x)
                } else if y >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            };
            let mut cuts = vec![0.0, FRAC_PI_2];
            if y != 0.0 {
                cuts.push(Self::t_of(a, b, y / w1));
                cuts.push(Self::t_of(a, b, y / w2));
            }
            if b != 0.0 && (-a / b) > 0.0 && (-a / b) < 1.0 {
                cuts.push(Self::t_of(a, b, 0.0));
            }
            cuts.sort_by(f64::total_cmp);
            let sum: f64 = cuts.windows(2).map(|p| self.gl_piece(p[0], p[1], g)).sum();
            total += wi * sum * 2.0 / PI;
        }
        total.clamp(0.0, 1.0)
    }

    /// Hypergeometric coefficient table
    /// `C_{k,i} = c_k w_i A_i^(b_k−1) ₂F₁(1−b_k, 1/2; 1; −B_i/A_i)`.
    ///
    /// Nodes with `A_i ≤ 0` or `A_i + B_i ≤ 0` have no convergent
    /// representation and are dropped with a warning.
    pub fn c_table(&self) -> CTable {
        let mut entries = Vec::new();
        let mut warnings = Vec::new();
        for (i, (&(_, a, b), &w)) in self.x.nodes.iter().zip(&self.x.raw_weights).enumerate() {
            if !(a > 0.0) || !(a + b > 0.0) {
                warnings.push(format!(
                    "hermite node {i} excluded: A = {a:.3e}, A + B = {:.3e} (weight {w:.3e})",
                    a + b
                ));
                continue;
            }
            for k in 0..3 {
                let bk = self.w.b[k];
                match hyp2f1_half(1.0 - bk, -b / a) {
                    Ok(f) => entries.push(CEntry {
                        b: bk,
                        c: self.w.c[k] * w * a.powf(bk - 1.0) * f,
                        node: i,
                    }),
                    Err(e) => warnings.push(format!("hermite node {i}, term {k}: {e}")),
                }
            }
        }
        CTable { entries, warnings }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CEntry {
    pub b: f64,
    pub c: f64,
    pub node: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CTable {
    pub entries: Vec<CEntry>,
    pub warnings: Vec<String>,
}

impl CTable {
    /// `π^(−1/2) Σ C_{k,i} y^(−b_k)`, without support truncation.
    pub fn density(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        self.entries.iter().map(|e| e.c * y.powf(-e.b)).sum::<f64>() / PI.sqrt()
    }
}

/// Coefficient tables for `Y₁` and `Y₂`.
pub fn vulo_c_coefficients(params: &SystemParams, hermite: &QuadratureRule) -> (CTable, CTable) {
    (
        ProductLaw::y1(params, hermite).c_table(),
        ProductLaw::y2(params, hermite).c_table(),
    )
}

/// Angular moment `E[cos²Δ]·E[sin²2φ] = (1 − e^(−8σ²) cos 4μ)/4`.
fn y3_angular_factor(mu: f64, sigma: f64) -> f64 {
    (1.0 - (-8.0 * sigma * sigma).exp() * (4.0 * mu).cos()) / 4.0
}

/// Variance of the zero-mean term `Y₃`: the angular moment times the
/// RWP expectation of the squared, truncated radial series.
pub fn sigma_y3_squared(params: &SystemParams, series_k: usize) -> f64 {
    let terms = VuloTermParams::new(params, series_k);
    let (h, m, rc) = (params.ap_height, params.m(), params.r_circ);
    let f = |r: f64| {
        let s = terms.y3_radial(r, h, m);
        rwp_radial_pdf(r, rc) * s * s
    };
    let scale = terms.y3_radial(rc, h, m).powi(2).max(f64::MIN_POSITIVE);
    let (radial, _) = integrate_adaptive(|r| f(r) / scale, 0.0, rc, 16, 1e-14);
    y3_angular_factor(params.mu_phi, params.sigma_phi) * radial * scale
}

/// Same variance by term-wise integration: each product of series terms
/// against the RWP polynomial is an incomplete Beta function
/// `∫₀^R r^(2q+1)(r²+h²)^(−s) dr = h^(2(q+1−s))/2 · B_0^(u_R)(q+1, s−q−1)`.
pub fn sigma_y3_squared_series(params: &SystemParams, series_k: usize) -> Result<f64> {
    let terms = VuloTermParams::new(params, series_k);
    let (h, m, rc) = (params.ap_height, params.m(), params.r_circ);
    let u_r = rc * rc / (rc * rc + h * h);
    let coef: Vec<f64> = terms
        .a3
        .iter()
        .enumerate()
        .map(|(k, a)| a * binomial(0.5, k))
        .collect();
    let rwp = crate::mobility::RWP_COEFFS;
    let mut total = 0.0;
    for (j, cj) in coef.iter().enumerate() {
        for (n, cn) in coef.iter().enumerate() {
            // r^(2j+2n+2) (r²+h²)^(−(j+n+2m+5))
            let s = (j + n) as f64 + 2.0 * m + 5.0;
            for (l, al) in rwp.iter().enumerate() {
                // f_r term a_l r^(2l+1) / R^(2l+2), l = 0..2
                let q = (l + j + n + 1) as f64;
                let inc = incomplete_beta_generalized(0.0, u_r, q + 1.0, s - q - 1.0)?;
                let integral = 0.5 * h.powf(2.0 * (q + 1.0 - s)) * inc;
                total += cj * cn * al / rc.powi(2 * l as i32 + 2) * integral;
            }
        }
    }
    Ok(y3_angular_factor(params.mu_phi, params.sigma_phi) * total)
}

/// Outage from the double-sum Beta convolution with the Meijer-G kernel,
/// evaluated term by term as written and clamped to `[0, 1]`.
pub fn vulo_outage_closed(gamma_th: f64, params: &SystemParams, rules: &AnalysisRules) -> Result<OutageResult> {
    let (c1, c2) = vulo_c_coefficients(params, &rules.hermite);
    let var = sigma_y3_squared(params, rules.series_k);
    if !(var > 0.0) {
        return Err(Error::InvalidParameter(
            "Gaussian term has zero variance; the convolution formula is undefined".into(),
        ));
    }
    let sigma = var.sqrt();
    let mut warnings: Vec<String> = c1.warnings.iter().chain(&c2.warnings).cloned().collect();
    let half = 0.5 * gamma_th;
    let mut sum = 0.0;
    for e in &c1.entries {
        for f in &c2.entries {
            let (mut p, mut q) = (1.0 - e.b, 1.0 - f.b);
            let beta_pq = match beta(p, q) {
                Ok(v) => v,
                Err(_) => {
                    warnings.push(format!("Beta pole at ({p:.6}, {q:.6}); arguments shifted by 1e-9"));
                    p += 1e-9;
                    q += 1e-9;
                    beta(p, q)?
                }
            };
            let order = (e.b + f.b - 2.0) / 2.0;
            let mut kernel = 0.0;
            for (x, w) in rules.legendre.iter() {
                kernel += w * meijer_g_0110(half * (1.0 + x), order)?;
            }
            sum += e.c * f.c * beta_pq * sigma.powf(1.0 - e.b - f.b) * half * kernel;
        }
    }
    let raw = sum / (PI * PI);
    if !(0.0..=1.0).contains(&raw) {
        warnings.push(format!("raw value {raw:.6e} clamped to [0, 1]"));
    }
    let mut out = OutageResult::deterministic(if raw.is_finite() { raw } else { 1.0 }, Method::AnalyticApprox);
    out.warnings = warnings;
    Ok(out)
}

/// Outage from `Y₁ + Y₂ + Y₃` with `Y₁`, `Y₂` taken as independent product
/// laws and `Y₃` as a zero-mean Gaussian:
/// `P = E[F₁(γ − Y₂ − Y₃)]`, by tabulating `F₁` and `F₂` on grids.
pub fn vulo_outage_chain(gamma_th: f64, params: &SystemParams, rules: &AnalysisRules) -> OutageResult {
    const F1_GRID: usize = 2048;
    const Y2_BINS: usize = 600;
    let law1 = ProductLaw::y1(params, &rules.hermite);
    let law2 = ProductLaw::y2(params, &rules.hermite);
    let sigma = sigma_y3_squared(params, rules.series_k).sqrt();

    let (l1, h1) = law1.support();
    let step1 = (h1 - l1) / (F1_GRID - 1) as f64;
    let f1: Vec<f64> = (0..F1_GRID).map(|i| law1.cdf(l1 + step1 * i as f64)).collect();
    let f1_at = |y: f64| {
        if y <= l1 {
            return 0.0;
        }
        if y >= h1 {
            return 1.0;
        }
        let pos = (y - l1) / step1;
        let i = (pos.floor() as usize).min(F1_GRID - 2);
        let t = pos - i as f64;
        f1[i] * (1.0 - t) + f1[i + 1] * t
    };

    let (l2, h2) = law2.support();
    let step2 = (h2 - l2) / Y2_BINS as f64;
    let mut prev = 0.0;
    let mut masses = Vec::with_capacity(Y2_BINS);
    for i in 1..=Y2_BINS {
        let c = if i == Y2_BINS { 1.0 } else { law2.cdf(l2 + step2 * i as f64) };
        masses.push((l2 + step2 * (i as f64 - 0.5), c - prev));
        prev = c;
    }

    let gauss = gauss_legendre(96);
    let z_max = 8.0;
    let mut p = 0.0;
    for &(y2, mass) in &masses {
        if mass == 0.0 {
            continue;
        }
        let inner = if sigma > 0.0 {
            gauss.integrate(-z_max, z_max, |z| {
                (-0.5 * z * z).exp() / (2.0 * PI).sqrt() * f1_at(gamma_th - y2 - sigma * z)
            })
        } else {
            f1_at(gamma_th - y2)
        };
        p += mass * inner;
    }
    OutageResult::deterministic(p, Method::Chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules() -> AnalysisRules {
        AnalysisRules::default()
    }

    #[test]
    fn term_coefficients() {
        let p = SystemParams::default();
        let t = VuloTermParams::new(&p, 10);
        assert!((t.a11 + t.a12 - p.gamma0()).abs() < 1e-9 * p.gamma0());
        for w in t.a3.windows(2) {
            assert!(w[1].abs() < w[0].abs());
        }
    }

    #[test]
    fn decomposition_reproduces_snr() {
        let p = SystemParams::default();
        let t = VuloTermParams::new(&p, 40);
        for &(r, d, phi) in &[(0.0, 0.0, 0.3), (1.0, 0.7, 0.2), (3.0, 2.0, 0.5), (5.0, 4.0, 0.1)] {
            let dec = vulo_snr_decomposed(r, d, phi, &p, &t);
            assert!(dec.relative_error() < 1e-12, "r={r}: {dec:?}");
        }
        let flat = vulo_snr_decomposed(2.0, 1.0, 0.0, &p, &t);
        assert_eq!(flat.y3, 0.0);
    }

    #[test]
    fn overhead_cosine_is_receiver_tilt() {
        let p = SystemParams::default();
        assert!((vulo_cos_incidence_polar(0.0, 1.0, 0.4, &p) - 0.4f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn x11_mixture_normalises() {
        let p = SystemParams::default();
        let t = VuloTermParams::new(&p, 0);
        let law = X11Law::new(t.a11, t.a12, p.mu_phi, p.sigma_phi, &rules().hermite);
        let (lo, hi) = law.support();
        assert!((law.cdf(hi) - 1.0).abs() < 1e-12);
        assert_eq!(law.cdf(lo), 0.0);
    }

    #[test]
    fn degenerate_orientation_is_single_arcsine() {
        let p = SystemParams {
            sigma_phi: 0.0,
            ..SystemParams::default()
        };
        let t = VuloTermParams::new(&p, 0);
        let law = X11Law::new(t.a11, t.a12, p.mu_phi, 0.0, &rules().hermite);
        let (lo, hi) = law.support();
        let c = p.mu_phi.cos().powi(2);
        assert!((lo - t.a11 * c).abs() < 1e-9 * lo);
        assert!((hi - (t.a11 * c + t.a12 * (1.0 - c))).abs() < 1e-9 * hi);
    }

    #[test]
    fn product_cdf_matches_density() {
        let p = SystemParams::default();
        let law = ProductLaw::y1(&p, &gauss_hermite(12));
        let (lo, hi) = law.support();
        let mid = lo + 0.3 * (hi - lo);
        let (v, _) = integrate_adaptive(|y| law.pdf(y), lo, mid, 64, 1e-12 * law.cdf(hi));
        assert!((v - law.cdf(mid)).abs() < 1e-6, "{v} vs {}", law.cdf(mid));
        assert!((law.cdf(hi) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn c_table_without_spread() {
        let p = SystemParams {
            mu_phi: 0.0,
            sigma_phi: 0.0,
            ..SystemParams::default()
        };
        let (t1, _) = vulo_c_coefficients(&p, &gauss_hermite(4));
        let law = ProductLaw::y1(&p, &gauss_hermite(4));
        for e in &t1.entries {
            // B = 0: C = c_k w A^(b−1)
            let (_, a, _) = law.x.nodes[e.node];
            let k = law.w.b.iter().position(|b| *b == e.b).unwrap();
            let want = law.w.c[k] * law.x.raw_weights[e.node] * a.powf(e.b - 1.0);
            assert!((e.c / want - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn y3_variance_routes_agree() {
        let p = SystemParams::default();
        let quad = sigma_y3_squared(&p, 40);
        let series = sigma_y3_squared_series(&p, 40).unwrap();
        assert!((quad / series - 1.0).abs() < 1e-8, "{quad} vs {series}");
        let still = SystemParams {
            mu_phi: 0.0,
            sigma_phi: 0.0,
            ..SystemParams::default()
        };
        assert_eq!(sigma_y3_squared(&still, 10), 0.0);
    }

    #[test]
    fn deep_coverage_has_no_outage() {
        // upright receivers: Y₃ vanishes and the chain reduces to Y₁ + Y₂
        let p = SystemParams {
            tx_power_dbw: 30.0,
            mu_phi: 0.0,
            sigma_phi: 0.0,
            ..SystemParams::default()
        };
        assert!(vulo_outage_chain(5.0, &p, &rules()).p_out < 1e-9);
        let dark = SystemParams {
            tx_power_dbw: -40.0,
            ..p
        };
        assert!((vulo_outage_chain(5.0, &dark, &rules()).p_out - 1.0).abs() < 1e-9);
    }
}
