//! Random-waypoint radial distribution and seeded receiver pose sampling.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::SystemParams;
use crate::geometry::Pose;

/// Coefficients `a_k` of the stationary RWP radial pdf
/// `f(r) = Σ a_k r^(2k−1) / R^(2k)`.
pub const RWP_COEFFS: [f64; 3] = [324.0 / 73.0, -420.0 / 73.0, 96.0 / 73.0];

/// Largest receiver polar angle kept by the sampler.
pub const PHI_MAX: f64 = FRAC_PI_2 - 1e-6;

/// Random draws consumed per pose: `r`, `θ`, `θ_R` and two for the Gaussian.
pub const DRAWS_PER_POSE: u128 = 5;

/// Stationary radial pdf of the zero-pause RWP model on a disc of radius `r_circ`.
pub fn rwp_radial_pdf(r: f64, r_circ: f64) -> f64 {
    rwp_radial_pdf_with(r, r_circ, &RWP_COEFFS)
}

/// Radial pdf for arbitrary coefficients (odd powers of `r`).
pub fn rwp_radial_pdf_with(r: f64, r_circ: f64, a: &[f64; 3]) -> f64 {
    if !(0.0..=r_circ).contains(&r) {
        return 0.0;
    }
    let u = r / r_circ;
    let u2 = u * u;
    (a[0] * u + a[1] * u * u2 + a[2] * u * u2 * u2) / r_circ
}

/// The same coefficients on consecutive powers `r, r², r³`. This form is
/// not normalised (it integrates to 46/73) and is kept for validation.
pub fn rwp_radial_pdf_consecutive_powers(r: f64, r_circ: f64) -> f64 {
    if !(0.0..=r_circ).contains(&r) {
        return 0.0;
    }
    let u = r / r_circ;
    (RWP_COEFFS[0] * u + RWP_COEFFS[1] * u * u + RWP_COEFFS[2] * u * u * u) / r_circ
}

/// `F(r) = (162u² − 105u⁴ + 16u⁶)/73` with `u = r/R`.
pub fn rwp_radial_cdf(r: f64, r_circ: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    if r >= r_circ {
        return 1.0;
    }
    let u2 = (r / r_circ).powi(2);
    (162.0 * u2 - 105.0 * u2 * u2 + 16.0 * u2 * u2 * u2) / 73.0
}

/// Inverse radial CDF by bisection in `u = r/R` to 1e−12.
pub fn rwp_quantile(p: f64, r_circ: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if rwp_radial_cdf(mid, 1.0) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi) * r_circ
}

/// Draw one radial distance from `rng`.
pub fn rwp_sample_r<R: Rng + ?Sized>(rng: &mut R, r_circ: f64) -> f64 {
    rwp_quantile(unit_open(rng.next_u64()), r_circ)
}

/// Uniform in `(0, 1]` from 53 random bits.
fn unit_open(x: u64) -> f64 {
    ((x >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform in `[0, 1)` from 53 random bits.
fn unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Orientation and mobility distribution from which poses are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseDistribution {
    pub r_circ: f64,
    pub mu_phi: f64,
    pub sigma_phi: f64,
}

impl PoseDistribution {
    pub fn from_params(p: &SystemParams) -> Self {
        Self {
            r_circ: p.r_circ,
            mu_phi: p.mu_phi,
            sigma_phi: p.sigma_phi,
        }
    }

    /// Receiver polar angle for standard normal `z`, folded onto `[0, π/2)`.
    ///
    /// A negative polar angle is the same orientation as `|φ|` with the
    /// azimuth turned by π, which the uniform azimuth already covers.
    pub fn polar_angle(&self, z: f64) -> f64 {
        (self.mu_phi + self.sigma_phi * z).abs().min(PHI_MAX)
    }

    /// Next pose from `rng`, consuming exactly [`DRAWS_PER_POSE`] `u64` words.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Pose {
        let r = rwp_quantile(unit_open(rng.next_u64()), self.r_circ);
        let theta = 2.0 * PI * unit(rng.next_u64());
        let theta_r = 2.0 * PI * unit(rng.next_u64());
        let u1 = unit_open(rng.next_u64());
        let u2 = unit(rng.next_u64());
        let z = (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos();
        Pose::new(r, theta, theta_r, self.polar_angle(z))
    }
}

/// Pose stream keyed by `(seed, index)`: pose `i` depends only on the seed
/// and `i`, never on how the index range is split among workers.
#[derive(Debug, Clone)]
pub struct PoseStream {
    dist: PoseDistribution,
    rng: ChaCha8Rng,
}

impl PoseStream {
    /// Stream positioned at pose `start`.
    pub fn new(dist: PoseDistribution, seed: u64, start: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // two 32-bit words per u64 draw
        rng.set_word_pos(u128::from(start) * DRAWS_PER_POSE * 2);
        Self { dist, rng }
    }

    pub fn next_pose(&mut self) -> Pose {
        self.dist.sample(&mut self.rng)
    }
}

impl Iterator for PoseStream {
    type Item = Pose;

    fn next(&mut self) -> Option<Pose> {
        Some(self.next_pose())
    }
}

/// Pose number `index` of the stream seeded with `seed`.
pub fn sample_pose(params: &SystemParams, seed: u64, index: u64) -> Pose {
    PoseStream::new(PoseDistribution::from_params(params), seed, index).next_pose()
}
