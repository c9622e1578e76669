//! Lambertian line-of-sight gain, per-scheme incidence cosine and SNR.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{Pose, Vec3};
use crate::lens::{bsr_tilt_exact, cos_incidence_for_tilt, LensGeometry, TiltBounds};

/// Receiver configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Bsr,
    Vulo,
    FixedLens,
    NoLens,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Bsr, Scheme::Vulo, Scheme::FixedLens, Scheme::NoLens];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Bsr => "bsr",
            Scheme::Vulo => "vulo",
            Scheme::FixedLens => "fixed_lens",
            Scheme::NoLens => "no_lens",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bsr" => Ok(Scheme::Bsr),
            "vulo" => Ok(Scheme::Vulo),
            "fixed_lens" | "fixed" => Ok(Scheme::FixedLens),
            "no_lens" | "none" => Ok(Scheme::NoLens),
            other => Err(Error::InvalidParameter(format!("unknown scheme `{other}`"))),
        }
    }
}

/// How BSR reception is modelled in sampled evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BsrMode {
    /// Perfect alignment at every pose (`cos φ_LR = 1`).
    #[default]
    Ideal,
    /// Alignment only where the lens can realise the tilt; elsewhere outage.
    Physical,
}

/// Algebraic form used for the VULO incidence cosine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VuloReading {
    /// `√(1 − r²/(n²d²))·cφ_R − n⁻¹(r/d)·sφ_R·cos(θ−θ_R)`, consistent with refraction.
    #[default]
    Snell,
    /// Polar form with the leading root inverted: `(1 − r²/(n²d²))^(−1/2)·cφ_R − …`.
    InverseRootPolar,
    /// Cartesian form `−n⁻¹(e_z − (n² − 1 + e_z²)^(−1/2))·cφ_R + n⁻¹·η_TR·η_R`.
    InverseRootCartesian,
}

/// Physical constants and distribution parameters of the link.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// LED half-power semi-angle (rad).
    pub theta_half: f64,
    /// Photodiode area (m²).
    pub pd_area: f64,
    /// Photodiode field of view (rad).
    pub fov: f64,
    /// Responsivity (A/W).
    pub responsivity: f64,
    pub tx_power_dbw: f64,
    /// Receiver noise variance (A²).
    pub noise_var: f64,
    pub n_l: f64,
    /// Vertical AP-to-receiver distance (m).
    pub ap_height: f64,
    /// Radius of the RWP disc (m).
    pub r_circ: f64,
    /// Mean of the receiver polar angle (rad).
    pub mu_phi: f64,
    /// Standard deviation of the receiver polar angle (rad).
    pub sigma_phi: f64,
    pub lens: LensGeometry,
    pub bounds: TiltBounds,
    pub bsr_mode: BsrMode,
    pub vulo_reading: VuloReading,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            theta_half: 30f64.to_radians(),
            pd_area: 1e-4,
            fov: 90f64.to_radians(),
            responsivity: 0.75,
            tx_power_dbw: 8.0,
            noise_var: 1e-12,
            n_l: 1.33,
            ap_height: 3.5,
            r_circ: 5.0,
            mu_phi: 20f64.to_radians(),
            sigma_phi: 8f64.to_radians(),
            lens: LensGeometry::default(),
            bounds: TiltBounds::default(),
            bsr_mode: BsrMode::Ideal,
            vulo_reading: VuloReading::Snell,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter(what.to_string()))
            }
        };
        check(self.theta_half > 0.0 && self.theta_half < PI / 2.0, "half-power semi-angle must lie in (0, 90) deg")?;
        check(self.pd_area > 0.0, "photodiode area must be positive")?;
        check(self.fov > 0.0 && self.fov <= PI / 2.0, "field of view must lie in (0, 90] deg")?;
        check(self.responsivity > 0.0, "responsivity must be positive")?;
        check(self.tx_power_dbw.is_finite(), "transmit power must be finite")?;
        check(self.noise_var > 0.0, "noise variance must be positive")?;
        check(self.n_l > 1.0, "refractive index must exceed 1")?;
        check(self.ap_height > 0.0, "AP height must be positive")?;
        check(self.r_circ > 0.0, "RWP radius must be positive")?;
        check(self.mu_phi.is_finite(), "orientation mean must be finite")?;
        check(self.sigma_phi >= 0.0, "orientation spread must be non-negative")?;
        self.lens.validate()?;
        self.bounds.validate()
    }

    /// Lambertian order of the LED.
    pub fn m(&self) -> f64 {
        lambertian_order(self.theta_half).unwrap_or(f64::NAN)
    }

    pub fn tx_power_w(&self) -> f64 {
        10f64.powf(self.tx_power_dbw / 10.0)
    }

    /// `k₁ = (m+1)A·hᵐ/(2π)`.
    pub fn k1(&self) -> f64 {
        let m = self.m();
        (m + 1.0) * self.pd_area * self.ap_height.powf(m) / (2.0 * PI)
    }

    /// `γ₀ = P²R²(m+1)²A²h^(2m)/(4π²σ²)`.
    pub fn gamma0(&self) -> f64 {
        let g = self.tx_power_w() * self.responsivity * self.k1();
        g * g / self.noise_var
    }

    /// Quantities reused by every evaluator.
    pub fn budget(&self) -> LinkBudget {
        LinkBudget {
            m: self.m(),
            gamma0: self.gamma0(),
            h: self.ap_height,
            n_l: self.n_l,
            cos_fov: self.fov.cos(),
        }
    }
}

/// Derived constants cached per parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub m: f64,
    pub gamma0: f64,
    pub h: f64,
    pub n_l: f64,
    pub cos_fov: f64,
}

impl LinkBudget {
    /// SNR for incidence cosine `c` at horizontal distance `r`.
    pub fn snr(&self, r: f64, c: f64) -> f64 {
        let c = self.gate(c);
        self.gamma0 * (r * r + self.h * self.h).powf(-(self.m + 2.0)) * c * c
    }

    /// Zero for negative cosines and for angles outside the field of view.
    pub fn gate(&self, c: f64) -> f64 {
        if c <= 0.0 || c < self.cos_fov {
            0.0
        } else {
            c.min(1.0)
        }
    }
}

/// `m = −ln 2 / ln cos θ½`.
pub fn lambertian_order(theta_half: f64) -> Result<f64> {
    if !(theta_half > 0.0 && theta_half < PI / 2.0) {
        return Err(Error::InvalidParameter(format!(
            "half-power semi-angle {theta_half} rad outside (0, pi/2)"
        )));
    }
    Ok(-(2f64.ln()) / theta_half.cos().ln())
}

/// Lambertian LoS gain between transmitter `p_l` and receiver `p_r`.
pub fn lambertian_gain(p_l: Vec3, p_r: Vec3, cos_irradiance: f64, cos_incidence: f64, params: &SystemParams) -> f64 {
    let d2 = (p_l - p_r).dot(p_l - p_r);
    if d2 == 0.0 || cos_incidence < 0.0 || cos_incidence < params.fov.cos() {
        return 0.0;
    }
    let m = params.m();
    (m + 1.0) * params.pd_area / (2.0 * PI * d2) * cos_irradiance.max(0.0).powf(m) * cos_incidence
}

/// `k₁·d^(−(m+2))·cos φ_LR`, with `d` the AP-to-receiver distance.
pub fn simplified_gain(pose: &Pose, cos_phi_lr: f64, params: &SystemParams) -> f64 {
    let d = pose.r.hypot(params.ap_height);
    params.k1() * d.powf(-(params.m() + 2.0)) * cos_phi_lr
}

/// `η_TR·η_R` in polar coordinates.
pub fn alignment(r: f64, theta_rel: f64, phi_r: f64, h: f64) -> f64 {
    (h * phi_r.cos() - r * phi_r.sin() * theta_rel.cos()) / r.hypot(h)
}

/// Fixed-lens incidence cosine from `x = η_TR·η_R`.
pub fn fixed_lens_cos(x: f64, n_l: f64) -> f64 {
    if x > 0.0 {
        (n_l * n_l - 1.0 + x * x).sqrt() / n_l
    } else {
        0.0
    }
}

/// VULO incidence cosine in polar coordinates (`theta_rel = θ − θ_R`).
pub fn vulo_cos_polar(r: f64, theta_rel: f64, phi_r: f64, h: f64, n_l: f64, reading: VuloReading) -> f64 {
    let d = r.hypot(h);
    let (sp, cp) = phi_r.sin_cos();
    match reading {
        VuloReading::Snell | VuloReading::InverseRootPolar => {
            let q = 1.0 - (r * r) / (n_l * n_l * d * d);
            let lead = if reading == VuloReading::Snell { q.sqrt() } else { q.powf(-0.5) };
            lead * cp - r / (n_l * d) * sp * theta_rel.cos()
        }
        VuloReading::InverseRootCartesian => {
            let ez = h / d;
            let x = alignment(r, theta_rel, phi_r, h);
            -(ez - (n_l * n_l - 1.0 + ez * ez).powf(-0.5)) * cp / n_l + x / n_l
        }
    }
}

/// Incidence cosine on the photodiode (before FoV gating).
///
/// BSR uses `solved_tilt` through the refraction pipeline when given, and
/// the aligned value 1 otherwise.
pub fn cos_incidence(scheme: Scheme, pose: &Pose, params: &SystemParams, solved_tilt: Option<(f64, f64)>) -> f64 {
    let h = params.ap_height;
    let theta_rel = pose.theta - pose.theta_r;
    match scheme {
        Scheme::Bsr => match solved_tilt {
            Some((px, py)) => cos_incidence_for_tilt(pose, h, params.n_l, px, py).unwrap_or(0.0),
            None => 1.0,
        },
        Scheme::Vulo => vulo_cos_polar(pose.r, theta_rel, pose.phi_r, h, params.n_l, params.vulo_reading),
        Scheme::FixedLens => fixed_lens_cos(alignment(pose.r, theta_rel, pose.phi_r, h), params.n_l),
        Scheme::NoLens => alignment(pose.r, theta_rel, pose.phi_r, h).max(0.0),
    }
}

/// `γ₀(r²+h²)^(−(m+2))·cos²φ_LR`, zero outside the field of view.
///
/// In [`BsrMode::Physical`] BSR poses whose tilt cannot be realised get zero SNR.
pub fn snr(pose: &Pose, scheme: Scheme, params: &SystemParams) -> f64 {
    let b = params.budget();
    snr_with(&b, pose, scheme, params)
}

/// [`snr`] with precomputed budget.
pub fn snr_with(b: &LinkBudget, pose: &Pose, scheme: Scheme, params: &SystemParams) -> f64 {
    if scheme == Scheme::Bsr
        && params.bsr_mode == BsrMode::Physical
        && bsr_tilt_exact(pose, params, &params.bounds)
            .and_then(|(px, py)| crate::lens::lens_state_for_tilt(px, py, &params.lens))
            .is_err()
    {
        return 0.0;
    }
    b.snr(pose.r, cos_incidence(scheme, pose, params, None))
}
