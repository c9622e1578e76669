//! Reference computations that share no code with the library: a
//! tanh-sinh integrator, a complex log-Gamma and the contour integrals
//! built on them.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

/// Double-exponential (tanh-sinh) quadrature of `f` over `[a, b]`.
///
/// Abscissae near either end are formed from the distance to that end, so
/// a power singularity at `a = 0` is sampled without cancellation.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    const T_MAX: f64 = 4.0;
    let half = 0.5 * (b - a);
    let node = |t: f64| -> Option<(f64, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        let x = if u < 0.0 {
            a + (b - a) / (1.0 + (-2.0 * u).exp())
        } else {
            b - (b - a) / (1.0 + (2.0 * u).exp())
        };
        if x <= a || x >= b {
            return None;
        }
        let w = half * FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        Some((x, w))
    };
    let sum_at = |h: f64, odd_only: bool| -> f64 {
        let n = (T_MAX / h).ceil() as i64;
        let mut s = 0.0;
        for k in -n..=n {
            if odd_only && k % 2 == 0 {
                continue;
            }
            if let Some((x, w)) = node(k as f64 * h) {
                s += w * f(x);
            }
        }
        s
    };
    let mut h = 0.5;
    let mut sum = sum_at(h, false);
    let mut prev = sum * h;
    for _ in 0..9 {
        h *= 0.5;
        sum += sum_at(h, true);
        let est = sum * h;
        if (est - prev).abs() <= 1e-15 * est.abs() {
            return est;
        }
        prev = est;
    }
    prev
}

/// `ln Γ(z)` for complex `z` with `Re z > 0`, by upward recurrence and the
/// Stirling series.
pub fn ln_gamma_complex(mut z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 20.0 {
        shift += z.ln();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
}

/// `G^{0,1}_{1,0}(z | a)` from its Mellin–Barnes integral
/// `(1/2πi) ∫ Γ(1 − a + s) z^s ds` on the line `Re s = a + 1/2`,
/// by the trapezoidal rule.
pub fn meijer_g_contour(z: f64, a: f64) -> f64 {
    const H: f64 = 0.05;
    const T: f64 = 40.0;
    let c = a + 0.5;
    let lz = z.ln();
    let n = (T / H) as i64;
    let mut sum = 0.0;
    for k in -n..=n {
        let t = k as f64 * H;
        let g = ln_gamma_complex(Complex64::new(1.5, t));
        sum += (g + Complex64::new(c, t) * lz).exp().re;
    }
    sum * H / (2.0 * PI)
}

/// `₂F₁(a, 1/2; 1; x)` from Euler's integral,
/// `(2/π) ∫₀^{π/2} (1 − x sin²θ)^(−a) dθ`.
pub fn hyp2f1_euler(a: f64, x: f64) -> f64 {
    tanh_sinh(|t| (1.0 - x * t.sin().powi(2)).powf(-a), 0.0, FRAC_PI_2) / FRAC_PI_2
}

/// `∫₀^{1/2} t^e g(t) dt` for `e > −1`, through `s = t^(e+1)`.
fn singular_half<G: Fn(f64) -> f64>(e: f64, g: G) -> f64 {
    let k = e + 1.0;
    tanh_sinh(|s| g(s.powf(1.0 / k)), 0.0, 0.5f64.powf(k)) / k
}

/// `B(p, q)` continued to `p, q > −1`, from the quadrature value of
/// `B(p+1, q+1)` and the recurrence `B(p, q) = B(p+1, q+1)(p+q)(p+q+1)/(pq)`.
pub fn beta_continued(p: f64, q: f64) -> f64 {
    let lower = singular_half(p, |t| (1.0 - t).powf(q));
    let upper = singular_half(q, |t| (1.0 - t).powf(p));
    (lower + upper) * (p + q) * (p + q + 1.0) / (p * q)
}

/// Direct quadrature of `∫_{u1}^{u2} t^(p−1)(1−t)^(q−1) dt`, valid for
/// `u2 < 1` (any `q`) and `p > 0`.
pub fn incomplete_beta_quadrature(u1: f64, u2: f64, p: f64, q: f64) -> f64 {
    if u1 == 0.0 {
        let k = p;
        tanh_sinh(|s| (1.0 - s.powf(1.0 / k)).powf(q - 1.0), 0.0, u2.powf(k)) / k
    } else {
        tanh_sinh(|t| t.powf(p - 1.0) * (1.0 - t).powf(q - 1.0), u1, u2)
    }
}

/// Kolmogorov–Smirnov distance between sorted samples and `cdf`, using
/// `grid` evenly spaced order statistics. The returned bound adds the
/// empirical mass between grid points, so it never understates the
/// true statistic.
pub fn ks_upper_bound<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F, grid: usize) -> f64 {
    let n = sorted.len();
    let mut worst: f64 = 0.0;
    for g in 0..grid {
        let i = (g * n) / grid;
        let f = cdf(sorted[i]);
        let lo = i as f64 / n as f64;
        let hi = (i + 1) as f64 / n as f64;
        worst = worst.max((f - lo).abs()).max((hi - f).abs());
    }
    worst + 1.0 / grid as f64
}
