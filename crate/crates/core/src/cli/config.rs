use std::fmt;

use crate::channel::{BsrMode, Scheme, SystemParams, VuloReading};
use crate::error::{Error, Result};
use crate::lens::{LensGeometry, TiltBounds};
use crate::outage::{AnalysisRules, Method, QuadratureSpec};

/// Quantity varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    TxPowerDbw,
    ApHeight,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::TxPowerDbw => "tx_power_dbw",
            SweepVariable::ApHeight => "ap_height_m",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        let span = self.to - self.from;
        (0..self.steps)
            .map(|i| self.from + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// Everything a run needs, in human units (degrees, dBW).
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub theta_half_deg: f64,
    pub pd_area_m2: f64,
    pub fov_deg: f64,
    pub responsivity: f64,
    pub tx_power_dbw: f64,
    pub noise_var: f64,
    pub n_l: f64,
    pub ap_height_m: f64,
    pub r_circ_m: f64,
    pub mu_phi_deg: f64,
    pub sigma_phi_deg: f64,
    pub gamma_th: f64,
    pub lens: LensGeometry,
    pub tilt_min_deg: f64,
    pub tilt_max_deg: f64,
    pub bsr_mode: BsrMode,
    pub vulo_reading: VuloReading,
    pub sweep: Sweep,
    pub schemes: Vec<Scheme>,
    pub evaluators: Vec<Method>,
    pub mc_samples: u64,
    pub seed: u64,
    pub hermite_n: usize,
    pub legendre_n: usize,
    pub series_k: usize,
    pub quad_panels: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            theta_half_deg: 30.0,
            pd_area_m2: 1e-4,
            fov_deg: 90.0,
            responsivity: 0.75,
            tx_power_dbw: 8.0,
            noise_var: 1e-12,
            n_l: 1.33,
            ap_height_m: 3.5,
            r_circ_m: 5.0,
            mu_phi_deg: 20.0,
            sigma_phi_deg: 8.0,
            gamma_th: 5.0,
            lens: LensGeometry::default(),
            tilt_min_deg: -40.0,
            tilt_max_deg: 40.0,
            bsr_mode: BsrMode::Ideal,
            vulo_reading: VuloReading::Snell,
            sweep: Sweep {
                variable: SweepVariable::TxPowerDbw,
                from: 0.0,
                to: 20.0,
                steps: 21,
            },
            schemes: Scheme::ALL.to_vec(),
            evaluators: vec![Method::ClosedForm, Method::Quadrature, Method::MonteCarlo],
            mc_samples: 1_000_000,
            seed: 1,
            hermite_n: 30,
            legendre_n: 50,
            series_k: 40,
            quad_panels: 16,
        }
    }
}

/// Keys accepted in a config file, for `--help` and error messages.
pub const CONFIG_KEYS: &[&str] = &[
    "theta_half_deg",
    "pd_area_m2",
    "fov_deg",
    "responsivity_a_per_w",
    "tx_power_dbw",
    "noise_var_a2",
    "n_l",
    "ap_height_m",
    "r_circ_m",
    "mu_phi_deg",
    "sigma_phi_deg",
    "gamma_th",
    "lens_dx_m",
    "lens_dy_m",
    "lens_dz_m",
    "lens_k_ew",
    "lens_v_max",
    "tilt_min_deg",
    "tilt_max_deg",
    "bsr_mode",
    "vulo_reading",
    "sweep_variable",
    "sweep_from",
    "sweep_to",
    "sweep_steps",
    "schemes",
    "evaluators",
    "mc_samples",
    "seed",
    "hermite_n",
    "legendre_n",
    "series_k",
    "quad_panels",
];

fn num(line: usize, key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.parse().map_err(|_| Error::Config {
        line,
        msg: format!("`{key}`: malformed number `{v}`"),
    })?;
    if !x.is_finite() {
        return Err(Error::Config {
            line,
            msg: format!("`{key}`: value must be finite"),
        });
    }
    Ok(x)
}

fn int(line: usize, key: &str, v: &str) -> Result<u64> {
    v.parse().map_err(|_| Error::Config {
        line,
        msg: format!("`{key}`: malformed integer `{v}`"),
    })
}

fn range(line: usize, key: &str, x: f64, ok: bool, what: &str) -> Result<f64> {
    if ok {
        Ok(x)
    } else {
        Err(Error::Config {
            line,
            msg: format!("`{key}` = {x} out of range: {what}"),
        })
    }
}

fn list<T, F: Fn(&str) -> Result<T>>(line: usize, key: &str, v: &str, f: F) -> Result<Vec<T>> {
    let items: Vec<T> = v
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            f(s).map_err(|e| Error::Config {
                line,
                msg: format!("`{key}`: {e}"),
            })
        })
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::Config {
            line,
            msg: format!("`{key}` needs at least one entry"),
        });
    }
    Ok(items)
}

/// Parse flat `key = value` text; `#` starts a comment. Omitted keys keep
/// their defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut c = ExperimentConfig::default();
    apply_config(&mut c, text)?;
    Ok(c)
}

/// Apply `key = value` lines on top of `base`. On error `base` is left
/// unchanged.
pub fn apply_config(base: &mut ExperimentConfig, text: &str) -> Result<()> {
    let mut c = base.clone();
    let mut sweep_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| Error::Config {
            line,
            msg: format!("expected `key = value`, found `{body}`"),
        })?;
        let (key, v) = (key.trim(), value.trim());
        match key {
            "theta_half_deg" => {
                let x = num(line, key, v)?;
                c.theta_half_deg = range(line, key, x, x > 0.0 && x < 90.0, "0 < deg < 90")?;
            }
            "pd_area_m2" => {
                let x = num(line, key, v)?;
                c.pd_area_m2 = range(line, key, x, x > 0.0, "must be positive")?;
            }
            "fov_deg" => {
                let x = num(line, key, v)?;
                c.fov_deg = range(line, key, x, x > 0.0 && x <= 90.0, "0 < deg <= 90")?;
            }
            "responsivity_a_per_w" => {
                let x = num(line, key, v)?;
                c.responsivity = range(line, key, x, x > 0.0, "must be positive")?;
            }
            "tx_power_dbw" => c.tx_power_dbw = num(line, key, v)?,
            "noise_var_a2" => {
                let x = num(line, key, v)?;
                c.noise_var = range(line, key, x, x > 0.0, "must be positive")?;
            }
            "n_l" => {
                let x = num(line, key, v)?;
                c.n_l = range(line, key, x, x > 1.0, "must exceed 1")?;
            }
            "ap_height_m" => {
                let x = num(line, key, v)?;
                c.ap_height_m = range(line, key, x, x > 0.0, "must be positive")?;
            }
            "r_circ_m" => {
                let x = num(line, key, v)?;
                c.r_circ_m = range(line, key, x, x > 0.0, "must be positive")?;
            }
            "mu_phi_deg" => {
                let x = num(line, key, v)?;
                c.mu_phi_deg = range(line, key, x, (0.0..90.0).contains(&x), "0 <= deg < 90")?;
            }
            "sigma_phi_deg" => {
                let x = num(line, key, v)?;
                c.sigma_phi_deg = range(line, key, x, x >= 0.0, "must be non-negative")?;
            }
            "gamma_th" => {
                let x = num(line, key, v)?;
                c.gamma_th = range(line, key, x, x >= 0.0, "must be non-negative")?;
            }
            "lens_dx_m" | "lens_dy_m" | "lens_dz_m" | "lens_k_ew" | "lens_v_max" => {
                let x = num(line, key, v)?;
                let x = range(line, key, x, x > 0.0, "must be positive")?;
                match key {
                    "lens_dx_m" => c.lens.d_x = x,
                    "lens_dy_m" => c.lens.d_y = x,
                    "lens_dz_m" => c.lens.d_z = x,
                    "lens_k_ew" => c.lens.k_ew = x,
                    _ => c.lens.v_max = x,
                }
            }
            "tilt_min_deg" => {
                let x = num(line, key, v)?;
                c.tilt_min_deg = range(line, key, x, x > -90.0 && x <= 0.0, "-90 < deg <= 0")?;
            }
            "tilt_max_deg" => {
                let x = num(line, key, v)?;
                c.tilt_max_deg = range(line, key, x, (0.0..90.0).contains(&x), "0 <= deg < 90")?;
            }
            "bsr_mode" => {
                c.bsr_mode = match v {
                    "ideal" => BsrMode::Ideal,
                    "physical" => BsrMode::Physical,
                    _ => {
                        return Err(Error::Config {
                            line,
                            msg: format!("`bsr_mode` must be `ideal` or `physical`, found `{v}`"),
                        })
                    }
                }
            }
            "vulo_reading" => {
                c.vulo_reading = match v {
                    "snell" => VuloReading::Snell,
                    "inverse_root_polar" => VuloReading::InverseRootPolar,
                    "inverse_root_cartesian" => VuloReading::InverseRootCartesian,
                    _ => {
                        return Err(Error::Config {
                            line,
                            msg: format!(
                                "`vulo_reading` must be snell, inverse_root_polar or inverse_root_cartesian, found `{v}`"
                            ),
                        })
                    }
                }
            }
            "sweep_variable" => {
                c.sweep.variable = match v {
                    "tx_power_dbw" => SweepVariable::TxPowerDbw,
                    "ap_height_m" | "ap_height" => SweepVariable::ApHeight,
                    _ => {
                        return Err(Error::Config {
                            line,
                            msg: format!("`sweep_variable` must be tx_power_dbw or ap_height_m, found `{v}`"),
                        })
                    }
                };
                sweep_line = line;
            }
            "sweep_from" => {
                c.sweep.from = num(line, key, v)?;
                sweep_line = line;
            }
            "sweep_to" => {
                c.sweep.to = num(line, key, v)?;
                sweep_line = line;
            }
            "sweep_steps" => {
                let n = int(line, key, v)?;
                c.sweep.steps = range(line, key, n as f64, n >= 2, "at least 2")? as usize;
            }
            "schemes" => c.schemes = list(line, key, v, str::parse::<Scheme>)?,
            "evaluators" => c.evaluators = list(line, key, v, str::parse::<Method>)?,
            "mc_samples" => {
                let n = int(line, key, v)?;
                c.mc_samples = range(line, key, n as f64, n >= 1, "at least 1")? as u64;
            }
            "seed" => c.seed = int(line, key, v)?,
            "hermite_n" | "legendre_n" | "series_k" | "quad_panels" => {
                let n = int(line, key, v)? as usize;
                match key {
                    "hermite_n" => c.hermite_n = range(line, key, n as f64, n >= 1, "at least 1")? as usize,
                    "legendre_n" => c.legendre_n = range(line, key, n as f64, n >= 1, "at least 1")? as usize,
                    "series_k" => c.series_k = n,
                    _ => c.quad_panels = range(line, key, n as f64, n >= 16, "at least 16")? as usize,
                }
            }
            _ => {
                return Err(Error::Config {
                    line,
                    msg: format!("unknown key `{key}`"),
                })
            }
        }
    }
    if !(c.sweep.from < c.sweep.to) {
        return Err(Error::Config {
            line: sweep_line,
            msg: format!("sweep_from ({}) must be below sweep_to ({})", c.sweep.from, c.sweep.to),
        });
    }
    if c.sweep.variable == SweepVariable::ApHeight && c.sweep.from <= 0.0 {
        return Err(Error::Config {
            line: sweep_line,
            msg: "AP height sweep must start above 0 m".into(),
        });
    }
    *base = c;
    Ok(())
}

impl ExperimentConfig {
    pub fn params(&self) -> SystemParams {
        SystemParams {
            theta_half: self.theta_half_deg.to_radians(),
            pd_area: self.pd_area_m2,
            fov: self.fov_deg.to_radians(),
            responsivity: self.responsivity,
            tx_power_dbw: self.tx_power_dbw,
            noise_var: self.noise_var,
            n_l: self.n_l,
            ap_height: self.ap_height_m,
            r_circ: self.r_circ_m,
            mu_phi: self.mu_phi_deg.to_radians(),
            sigma_phi: self.sigma_phi_deg.to_radians(),
            lens: self.lens,
            bounds: TiltBounds {
                psi_lo: self.tilt_min_deg.to_radians(),
                psi_hi: self.tilt_max_deg.to_radians(),
            },
            bsr_mode: self.bsr_mode,
            vulo_reading: self.vulo_reading,
        }
    }

    /// Parameters at one sweep point.
    pub fn params_at(&self, value: f64) -> SystemParams {
        let mut p = self.params();
        match self.sweep.variable {
            SweepVariable::TxPowerDbw => p.tx_power_dbw = value,
            SweepVariable::ApHeight => p.ap_height = value,
        }
        p
    }

    pub fn rules(&self) -> AnalysisRules {
        AnalysisRules::new(self.hermite_n, self.legendre_n, self.series_k)
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            panels: self.quad_panels,
            ..QuadratureSpec::default()
        }
    }
}
