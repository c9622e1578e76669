use crate::channel::SystemParams;

use super::{Method, OutageResult};

/// Power-law density `Σ c_k y^(−b_k)` on `[y1, y2]` of
/// `Y = scale·(r²+h²)^(−p)` with `r` RWP-distributed.
///
/// For BSR `p = m+2` and `scale = γ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsrPdfParams {
    pub c: [f64; 3],
    pub b: [f64; 3],
    pub y1: f64,
    pub y2: f64,
    pub p: f64,
}

impl BsrPdfParams {
    pub fn new(params: &SystemParams) -> Self {
        Self::for_power(params.m() + 2.0, params.gamma0(), params.ap_height, params.r_circ)
    }

    pub fn for_power(p: f64, scale: f64, h: f64, r_circ: f64) -> Self {
        let (h2, r2) = (h * h, r_circ * r_circ);
        let q = h2 / r2;
        let raw = [
            6.0 / (73.0 * p * r2) * (27.0 + 35.0 * q + 8.0 * q * q),
            -6.0 / (73.0 * p * r2 * r2) * (35.0 + 16.0 * q),
            48.0 / (73.0 * p * r2 * r2 * r2),
        ];
        let mut c = [0.0; 3];
        let mut b = [0.0; 3];
        for k in 0..3 {
            let kf = (k + 1) as f64;
            b[k] = (p + kf) / p;
            c[k] = raw[k] * scale.powf(kf / p);
        }
        Self {
            c,
            b,
            y1: scale * (r2 + h2).powf(-p),
            y2: scale * h2.powf(-p),
            p,
        }
    }

    pub fn pdf(&self, y: f64) -> f64 {
        if y < self.y1 || y > self.y2 {
            return 0.0;
        }
        (0..3).map(|k| self.c[k] * y.powf(-self.b[k])).sum()
    }

    /// `∫_{y1}^{y} f`, the three-term power expression, with no clamping.
    pub fn partial_integral(&self, y: f64) -> f64 {
        (0..3)
            .map(|k| {
                let e = (k + 1) as f64 / self.p;
                self.p * self.c[k] / (k + 1) as f64 * (self.y1.powf(-e) - y.powf(-e))
            })
            .sum()
    }

    pub fn cdf(&self, y: f64) -> f64 {
        if y <= self.y1 {
            0.0
        } else if y >= self.y2 {
            1.0
        } else {
            self.partial_integral(y).clamp(0.0, 1.0)
        }
    }
}

/// SNR density of the BSR receiver.
pub fn bsr_pdf_y(y: f64, params: &SystemParams) -> f64 {
    BsrPdfParams::new(params).pdf(y)
}

/// The full-support expression (threshold above `y2`); equals 1 up to rounding.
pub fn bsr_case3_total(params: &SystemParams) -> f64 {
    let f = BsrPdfParams::new(params);
    f.partial_integral(f.y2)
}

/// Closed-form BSR outage, valid for the ideally aligned receiver.
pub fn bsr_outage_closed(gamma_th: f64, params: &SystemParams) -> OutageResult {
    let f = BsrPdfParams::new(params);
    let p = if gamma_th < f.y1 {
        0.0
    } else if gamma_th <= f.y2 {
        f.partial_integral(gamma_th)
    } else {
        f.partial_integral(f.y2)
    };
    OutageResult::deterministic(p, Method::ClosedForm)
}
