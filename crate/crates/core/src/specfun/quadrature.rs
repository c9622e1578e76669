//! Gaussian quadrature rules and adaptive Gauss–Kronrod integration.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Hermite,
    Legendre,
}

/// Nodes (ascending) and weights of a Gaussian rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Legendre rule mapped onto `[a, b]`, Jacobian included.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        debug_assert_eq!(self.kind, RuleKind::Legendre);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.iter().map(|(x, w)| w * f(mid + half * x)).sum::<f64>()
    }
}

/// Gauss–Legendre rule on `[−1, 1]`, Newton-refined from Chebyshev-like guesses.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule {
        nodes,
        weights,
        kind: RuleKind::Legendre,
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Number of eigenvalues below `x` of the Hermite Jacobi matrix
/// (zero diagonal, off-diagonal `√(k/2)`), by Sturm sequence.
fn hermite_roots_below(x: f64, n: usize) -> usize {
    let mut count = 0;
    let mut d = -x;
    if d < 0.0 {
        count += 1;
    }
    for k in 1..n {
        let e2 = k as f64 / 2.0;
        let prev = if d == 0.0 { f64::EPSILON } else { d };
        d = -x - e2 / prev;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Orthonormal Hermite function `p_n(z)·exp(−z²/2)` and `√(2n)·p_{n−1}(z)·exp(−z²/2)`.
fn hermite_function_pair(z: f64, n: usize) -> (f64, f64) {
    const PI_M4: f64 = 0.751_125_544_464_942_5; // π^(−1/4)
    // the exp(−z²/2) factor keeps the recurrence finite for large n
    let (mut p1, mut p2) = (PI_M4 * (-0.5 * z * z).exp(), 0.0);
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

/// Gauss–Hermite rule for weight `exp(−x²)`.
///
/// Roots are bracketed by Sturm-sequence bisection on the Jacobi matrix
/// and polished by Newton steps on the three-term recurrence; weights
/// sum to `√π`.
pub fn gauss_hermite(n: usize) -> QuadratureRule {
    assert!(n >= 1, "rule needs at least one node");
    let bound = (2.0 * n as f64 + 1.0).sqrt() + 1.0;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in n / 2..n {
        // root i (ascending) has exactly i roots below it
        let (mut lo, mut hi) = (0.0, bound);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if hermite_roots_below(mid, n) > i {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut z = 0.5 * (lo + hi);
        for _ in 0..3 {
            let (p, dp) = hermite_function_pair(z, n);
            if dp == 0.0 {
                break;
            }
            z -= p / dp;
        }
        let (_, dp) = hermite_function_pair(z, n);
        x[i] = z;
        w[i] = 2.0 * (-z * z - 2.0 * dp.abs().ln()).exp();
        x[n - 1 - i] = -z;
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    QuadratureRule {
        nodes: x,
        weights: w,
        kind: RuleKind::Hermite,
    }
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS_K: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GK_WEIGHTS_G: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut k = fc * GK_WEIGHTS_K[7];
    let mut g = fc * GK_WEIGHTS_G[3];
    for j in 0..7 {
        let dx = half * GK_NODES[j];
        let s = f(mid - dx) + f(mid + dx);
        k += GK_WEIGHTS_K[j] * s;
        if j % 2 == 1 {
            g += GK_WEIGHTS_G[j / 2] * s;
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration on `[a, b]`.
///
/// The interval is first split into `panels` equal pieces; the piece with
/// the largest error estimate is then bisected until the summed estimate
/// drops below `tol` (absolute, floored at 1e−15 relative) or the
/// subdivision budget runs out. Returns `(value, error_estimate)`.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    tol: f64,
) -> (f64, f64) {
    const MAX_PIECES: usize = 4000;
    if a == b {
        return (0.0, 0.0);
    }
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(panels * 2);
    for p in 0..panels {
        let lo = a + width * p as f64;
        let hi = if p + 1 == panels { b } else { lo + width };
        let (v, e) = gk15(&mut f, lo, hi);
        heap.push(Piece { lo, hi, value: v, err: e });
    }
    loop {
        let (total, err) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err));
        let target = tol.max(1e-15 * total.abs());
        if err <= target || heap.len() >= MAX_PIECES {
            return (total, err);
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval at machine resolution; keep it and stop refining
            heap.push(Piece { err: 0.0, ..worst });
            continue;
        }
        let (v1, e1) = gk15(&mut f, worst.lo, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.hi);
        heap.push(Piece { lo: worst.lo, hi: mid, value: v1, err: e1 });
        heap.push(Piece { lo: mid, hi: worst.hi, value: v2, err: e2 });
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err).is_eq()
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive integration with default panelling; value only.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    integrate_adaptive(f, a, b, 1, tol).0
}
