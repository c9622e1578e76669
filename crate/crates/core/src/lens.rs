//! Electrowetting lens physics and the per-scheme surface tilt solvers.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::SystemParams;
use crate::error::{Error, Result};
use crate::geometry::{lens_normal, receiver_rotation, refract, Pose, Vec3};

/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Cuboid lens cell and its electrowetting constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensGeometry {
    pub d_x: f64,
    pub d_y: f64,
    pub d_z: f64,
    /// `ε₀ε₁ / (2γ_LV)` in m/V².
    pub k_ew: f64,
    /// Highest voltage a wall driver can apply.
    pub v_max: f64,
}

impl Default for LensGeometry {
    /// 5 mm cell, dielectric with ε₁ = 3 under a water/air interface.
    fn default() -> Self {
        Self {
            d_x: 5e-3,
            d_y: 5e-3,
            d_z: 5e-3,
            k_ew: EPSILON_0 * 3.0 / (2.0 * 0.072),
            v_max: 5000.0,
        }
    }
}

impl LensGeometry {
    pub fn validate(&self) -> Result<()> {
        let dims = [self.d_x, self.d_y, self.d_z];
        if dims.iter().any(|d| !(*d > 0.0)) {
            return Err(Error::InvalidParameter("lens dimensions must be positive".into()));
        }
        if !(self.k_ew > 0.0) || !(self.v_max > 0.0) {
            return Err(Error::InvalidParameter(
                "electrowetting constant and voltage limit must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Symmetric tilt window applied to both surface axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltBounds {
    pub psi_lo: f64,
    pub psi_hi: f64,
}

impl Default for TiltBounds {
    fn default() -> Self {
        let b = 40f64.to_radians();
        Self {
            psi_lo: -b,
            psi_hi: b,
        }
    }
}

impl TiltBounds {
    pub fn validate(&self) -> Result<()> {
        if self.psi_lo > 0.0 || self.psi_hi < 0.0 || self.psi_lo <= -FRAC_PI_2 || self.psi_hi >= FRAC_PI_2 {
            return Err(Error::InvalidParameter(format!(
                "tilt bounds [{}, {}] must bracket 0 inside (-pi/2, pi/2)",
                self.psi_lo, self.psi_hi
            )));
        }
        Ok(())
    }

    pub fn contains(&self, psi: f64) -> bool {
        (self.psi_lo..=self.psi_hi).contains(&psi)
    }
}

/// Wall index into [`LensState::contact`] and [`LensState::voltage`].
pub const X_LEFT: usize = 0;
pub const X_RIGHT: usize = 1;
pub const Y_LEFT: usize = 2;
pub const Y_RIGHT: usize = 3;

/// Surface tilts together with the contact angles and wall voltages that hold them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensState {
    pub psi_x: f64,
    pub psi_y: f64,
    /// Contact angles `[x_L, x_R, y_L, y_R]` (rad).
    pub contact: [f64; 4],
    /// Wall voltages `[x_L, x_R, y_L, y_R]` (V).
    pub voltage: [f64; 4],
}

impl LensState {
    pub fn tilt(&self) -> (f64, f64) {
        (self.psi_x, self.psi_y)
    }
}

/// Contact angle reached at voltage `v` on a wall of width `d_m`.
pub fn contact_angle_from_voltage(v: f64, d_m: f64, k_ew: f64) -> Result<f64> {
    let c = k_ew * v * v / d_m;
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::VoltageExceedsWettingLimit(c));
    }
    Ok(c.acos())
}

/// Voltage needed for contact angle `theta`.
pub fn voltage_for_contact_angle(theta: f64, d_m: f64, k_ew: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::UnreachableContactAngle(theta));
    }
    Ok((d_m * theta.cos().max(0.0) / k_ew).sqrt())
}

/// Opposing walls `(left, right)` for one axis: contact angles and voltages.
///
/// The wall whose contact angle is acute is driven; the obtuse wall is
/// the passive complement and stays at 0 V.
fn axis_walls(
    psi: f64,
    d_m: f64,
    geom: &LensGeometry,
    names: [&'static str; 2],
) -> Result<([f64; 2], [f64; 2])> {
    let right = FRAC_PI_2 - psi;
    let left = std::f64::consts::PI - right;
    let idx = if psi >= 0.0 { 1 } else { 0 };
    // cos of the acute contact angle is |sin ψ|
    let v = (d_m * psi.sin().abs() / geom.k_ew).sqrt();
    if v > geom.v_max {
        return Err(Error::TiltNotActuatable {
            wall: names[idx],
            volts: v,
            limit: geom.v_max,
        });
    }
    let mut volts = [0.0; 2];
    volts[idx] = v;
    Ok(([left, right], volts))
}

/// Contact angles and voltages realising surface tilts `(psi_x, psi_y)`.
pub fn lens_state_for_tilt(psi_x: f64, psi_y: f64, geom: &LensGeometry) -> Result<LensState> {
    let (cx, vx) = axis_walls(psi_x, geom.d_x, geom, ["x left", "x right"])?;
    let (cy, vy) = axis_walls(psi_y, geom.d_y, geom, ["y left", "y right"])?;
    Ok(LensState {
        psi_x,
        psi_y,
        contact: [cx[0], cx[1], cy[0], cy[1]],
        voltage: [vx[0], vx[1], vy[0], vy[1]],
    })
}

/// VULO tilt: keeps the liquid surface horizontal.
pub fn vulo_tilt(pose: &Pose) -> (f64, f64) {
    (0.0, pose.phi_r)
}

/// Incidence cosine on the photodiode for a given surface tilt, through
/// the full rotation and refraction pipeline.
pub fn cos_incidence_for_tilt(pose: &Pose, ap_height: f64, n_l: f64, psi_x: f64, psi_y: f64) -> Result<f64> {
    let eta_tr = pose.toward_ap(ap_height)?;
    let eta_len = lens_normal(pose.theta_r, pose.phi_r, psi_x, psi_y);
    let eta_ref = refract(eta_len, eta_tr, n_l)?;
    Ok(-eta_ref.dot(pose.normal()))
}

/// Left-hand side of the BSR alignment condition
/// `n − η_TR·η_R + (cos α − √(n² − sin²α)) cψx cψy`.
///
/// It equals `n·(1 − cos φ_LR)`, so it vanishes only at perfect alignment.
pub fn bsr_residual(pose: &Pose, ap_height: f64, n_l: f64, psi_x: f64, psi_y: f64) -> Result<f64> {
    let eta_tr = pose.toward_ap(ap_height)?;
    let eta_r = pose.normal();
    let eta_len = lens_normal(pose.theta_r, pose.phi_r, psi_x, psi_y);
    let cos_a = eta_len.dot(eta_tr);
    if cos_a <= 0.0 {
        return Err(Error::IncidentFromBelow(cos_a));
    }
    let sin2 = (1.0 - cos_a * cos_a).max(0.0);
    Ok(n_l - eta_tr.dot(eta_r) + (cos_a - (n_l * n_l - sin2).sqrt()) * psi_x.cos() * psi_y.cos())
}

/// Surface tilt (receiver frame) whose normal is `v_room`.
fn tilt_from_normal(v_room: Vec3, pose: &Pose) -> (f64, f64) {
    // in the receiver frame the lens normal is [−sψy, cψy sψx, cψy cψx]
    let v = receiver_rotation(pose.theta_r, pose.phi_r) * v_room;
    let psi_y = (-v.x).clamp(-1.0, 1.0).asin();
    let psi_x = v.y.atan2(v.z);
    (psi_x, psi_y)
}

/// BSR tilt by inverting Snell's law: the surface normal that bends the
/// incoming ray onto the receiver axis is parallel to `n·η_R − η_TR`.
///
/// Fails when the required bend is steeper than the critical angle
/// `acos(1/n)` allows, or when the tilt leaves `bounds`.
pub fn bsr_tilt_exact(pose: &Pose, params: &SystemParams, bounds: &TiltBounds) -> Result<(f64, f64)> {
    let eta_tr = pose.toward_ap(params.ap_height)?;
    let eta_r = pose.normal();
    let n = eta_r * params.n_l - eta_tr;
    if n.dot(eta_tr) <= 0.0 {
        return Err(Error::Infeasible);
    }
    let n = n.normalized().ok_or(Error::Infeasible)?;
    let (psi_x, psi_y) = tilt_from_normal(n, pose);
    if !bounds.contains(psi_x) || !bounds.contains(psi_y) {
        return Err(Error::Infeasible);
    }
    Ok((psi_x, psi_y))
}

/// Off-axis components of the refracted ray in the receiver frame.
fn misalignment(pose: &Pose, eta_tr: Vec3, rot: &crate::geometry::Mat3, n_l: f64, psi: [f64; 2]) -> Option<[f64; 2]> {
    let eta_len = lens_normal(pose.theta_r, pose.phi_r, psi[0], psi[1]);
    let t = refract(eta_len, eta_tr, n_l).ok()?;
    let u = *rot * -t;
    Some([u.x, u.y])
}

/// BSR tilt by seeded multistart Newton iteration on the alignment condition.
///
/// Each attempt starts from a tilt drawn uniformly from `bounds`; up to 64
/// attempts are made before reporting [`Error::Infeasible`]. The returned
/// tilt satisfies `|bsr_residual| < 1e−9` and is actuatable by the lens.
pub fn bsr_solve(pose: &Pose, params: &SystemParams, bounds: &TiltBounds, seed: u64) -> Result<(f64, f64)> {
    const ATTEMPTS: usize = 64;
    const STEPS: usize = 60;
    const FD: f64 = 1e-7;
    let eta_tr = pose.toward_ap(params.ap_height)?;
    let rot = receiver_rotation(pose.theta_r, pose.phi_r);
    let n_l = params.n_l;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..ATTEMPTS {
        let mut psi = [
            rng.random_range(bounds.psi_lo..=bounds.psi_hi),
            rng.random_range(bounds.psi_lo..=bounds.psi_hi),
        ];
        for _ in 0..STEPS {
            let Some(f) = misalignment(pose, eta_tr, &rot, n_l, psi) else {
                break;
            };
            if f[0].hypot(f[1]) < 1e-13 {
                break;
            }
            let mut jac = [[0.0; 2]; 2];
            let mut ok = true;
            for k in 0..2 {
                let mut p = psi;
                p[k] += FD;
                match misalignment(pose, eta_tr, &rot, n_l, p) {
                    Some(g) => {
                        jac[0][k] = (g[0] - f[0]) / FD;
                        jac[1][k] = (g[1] - f[1]) / FD;
                    }
                    None => ok = false,
                }
            }
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            if !ok || det.abs() < 1e-14 {
                break;
            }
            let dx = (jac[1][1] * f[0] - jac[0][1] * f[1]) / det;
            let dy = (jac[0][0] * f[1] - jac[1][0] * f[0]) / det;
            // damp long steps so the iterate stays near the physical branch
            let scale = (0.5 / dx.hypot(dy)).min(1.0);
            psi[0] -= scale * dx;
            psi[1] -= scale * dy;
        }
        if !bounds.contains(psi[0]) || !bounds.contains(psi[1]) {
            continue;
        }
        let Ok(res) = bsr_residual(pose, params.ap_height, n_l, psi[0], psi[1]) else {
            continue;
        };
        if res.abs() < 1e-9 && lens_state_for_tilt(psi[0], psi[1], &params.lens).is_ok() {
            return Ok((psi[0], psi[1]));
        }
    }
    Err(Error::Infeasible)
}
