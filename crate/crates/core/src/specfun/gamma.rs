//! Gamma and Beta functions on the real line, continued through the
//! reflection formula to negative non-integer arguments.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1−x) = π / sin(πx), with 0 < x < 0.5 here
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let series = LANCZOS
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + i as f64));
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + series.ln()
}

/// `Γ(x)`; infinite at the poles.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    ln_gamma(x).exp()
}

/// `1/Γ(x)`, zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else if x < 0.5 {
        (PI * x).sin() * gamma(1.0 - x) / PI
    } else {
        (-ln_gamma(x)).exp()
    }
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`, continued to negative non-integer `a`, `b`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return Err(Error::BetaPole(a, b));
    }
    if a > 0.0 && b > 0.0 {
        return Ok((ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp());
    }
    Ok(gamma(a) * gamma(b) * rgamma(a + b))
}

/// Generalized binomial coefficient `C(alpha, k)`.
pub fn binomial(alpha: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (alpha - j as f64) / (j as f64 + 1.0))
}
