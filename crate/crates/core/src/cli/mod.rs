//! Command-line front end: config parsing, sweeps, single-point outage,
//! lens solving and the validation report.

mod config;
mod sweep;
mod validate;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::channel::{cos_incidence, snr, Scheme};
use crate::error::Error;
use crate::geometry::Pose;
use crate::lens::{bsr_solve, bsr_tilt_exact, lens_state_for_tilt, vulo_tilt, LensState};

pub use config::{apply_config, parse_config, ExperimentConfig, Sweep, SweepVariable, CONFIG_KEYS};
pub use sweep::{evaluate_point, mark_saturation, run_sweep, write_csv, SweepRow, APPROX_GATE, SATURATION_DELTA};
pub use validate::{rwp_normalisation_check, run_validation, vulo_reading_deviation, Check, ValidationReport};

const HELP_FOOTER: &str = "\
CSV columns (sweep, outage):
  <variable>    sweep value (tx_power_dbw or ap_height_m)
  scheme        bsr | vulo | fixed_lens | no_lens
  evaluator     closed_form | analytic_approx | chain | quadrature | monte_carlo
  p_out         outage probability, 9 significant digits; blank if not produced
  stderr        binomial standard error; Monte Carlo rows only
  samples       Monte Carlo sample count, 0 otherwise
  status        ok, or '|'-joined flags: unsupported, error, unconverged,
                clamped, approximate (>25% from quadrature), saturated
  wallclock_ms  only with --timing

Config: flat `key = value` lines, `#` comments. Keys:
  theta_half_deg pd_area_m2 fov_deg responsivity_a_per_w tx_power_dbw
  noise_var_a2 n_l ap_height_m r_circ_m mu_phi_deg sigma_phi_deg gamma_th
  lens_dx_m lens_dy_m lens_dz_m lens_k_ew lens_v_max tilt_min_deg tilt_max_deg
  bsr_mode vulo_reading sweep_variable sweep_from sweep_to sweep_steps
  schemes evaluators mc_samples seed hermite_n legendre_n series_k quad_panels

Exit codes: 0 success, 1 validation failure, 2 config error.";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tllvlc",
    version,
    about = "Outage analysis of a VLC link with a tunable liquid-lens receiver",
    after_help = HELP_FOOTER
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RunOpts {
    /// Config file of `key = value` lines
    pub config: PathBuf,
    /// Override the Monte Carlo seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the Monte Carlo sample count
    #[arg(long)]
    pub samples: Option<u64>,
    /// Write CSV here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Append a wallclock_ms column
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Outage over the configured sweep, as CSV
    Sweep(RunOpts),
    /// Outage at the configured operating point, as CSV
    Outage(RunOpts),
    /// Lens tilt, contact angles and voltages for one receiver pose
    LensSolve {
        /// Config file (defaults apply when omitted)
        config: Option<PathBuf>,
        /// Horizontal distance from the AP axis (m)
        #[arg(long)]
        r: f64,
        /// Azimuth of the receiver position (deg)
        #[arg(long, default_value_t = 0.0)]
        theta_deg: f64,
        /// Receiver azimuth (deg)
        #[arg(long, default_value_t = 0.0)]
        theta_r_deg: f64,
        /// Receiver polar angle (deg)
        #[arg(long)]
        phi_r_deg: f64,
        /// Solver seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Self-consistency checks; exits 1 if any fails
    Validate {
        /// Config file (defaults apply when omitted)
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

/// Error that maps onto a process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl CliError {
    fn config(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            msg: msg.into(),
        }
    }
}

pub fn load_config(path: Option<&PathBuf>) -> Result<ExperimentConfig, CliError> {
    let Some(path) = path else {
        return Ok(ExperimentConfig::default());
    };
    let text = fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        Error::Config { line, msg } => CliError::config(format!("{}:{line}: {msg}", path.display())),
        other => CliError::config(format!("{}: {other}", path.display())),
    })
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(CliError::config("--workers must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| CliError::config(e.to_string())),
    }
}

fn apply_overrides(cfg: &mut ExperimentConfig, seed: Option<u64>, samples: Option<u64>) -> Result<(), CliError> {
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(n) = samples {
        if n == 0 {
            return Err(CliError::config("--samples must be at least 1"));
        }
        cfg.mc_samples = n;
    }
    Ok(())
}

fn emit(out: Option<&PathBuf>, body: &[u8]) -> Result<(), CliError> {
    let io_err = |e: io::Error| CliError {
        code: EXIT_CONFIG,
        msg: e.to_string(),
    };
    match out {
        Some(p) => fs::write(p, body).map_err(io_err),
        None => io::stdout().write_all(body).map_err(io_err),
    }
}

fn run_rows(opts: &RunOpts, single: bool) -> Result<(), CliError> {
    let mut cfg = load_config(Some(&opts.config))?;
    apply_overrides(&mut cfg, opts.seed, opts.samples)?;
    let rows = with_workers(opts.workers, || {
        if single {
            let base = match cfg.sweep.variable {
                SweepVariable::TxPowerDbw => cfg.tx_power_dbw,
                SweepVariable::ApHeight => cfg.ap_height_m,
            };
            evaluate_point(&cfg, base)
        } else {
            run_sweep(&cfg)
        }
    })?;
    let mut buf = Vec::new();
    write_csv(&mut buf, cfg.sweep.variable, &rows, opts.timing).expect("write to memory");
    for r in rows.iter().filter(|r| !r.warnings.is_empty()) {
        for w in &r.warnings {
            eprintln!("warning: {} {} {}@{}: {w}", r.scheme, r.evaluator, cfg.sweep.variable, r.value);
        }
    }
    emit(opts.out.as_ref(), &buf)
}

fn describe_state(out: &mut String, label: &str, s: &LensState) {
    let _ = writeln!(out, "{label}.psi_x_deg = {:.6}", s.psi_x.to_degrees());
    let _ = writeln!(out, "{label}.psi_y_deg = {:.6}", s.psi_y.to_degrees());
    let c = s.contact.map(f64::to_degrees);
    let _ = writeln!(out, "{label}.contact_deg = {:.4} {:.4} {:.4} {:.4}", c[0], c[1], c[2], c[3]);
    let v = s.voltage;
    let _ = writeln!(out, "{label}.voltage_v = {:.3} {:.3} {:.3} {:.3}", v[0], v[1], v[2], v[3]);
}

/// Text report of the lens settings each scheme uses at `pose`.
pub fn lens_solve_report(cfg: &ExperimentConfig, pose: &Pose, seed: u64) -> String {
    let p = cfg.params();
    let mut out = String::new();
    let _ = writeln!(out, "pose = r {:.4} m, theta {:.4} deg, theta_r {:.4} deg, phi_r {:.4} deg",
        pose.r, pose.theta.to_degrees(), pose.theta_r.to_degrees(), pose.phi_r.to_degrees());

    let (vx, vy) = vulo_tilt(pose);
    match lens_state_for_tilt(vx, vy, &p.lens) {
        Ok(s) => describe_state(&mut out, "vulo", &s),
        Err(e) => {
            let _ = writeln!(out, "vulo = {e}");
        }
    }
    let _ = writeln!(out, "vulo.cos_incidence = {:.9}", cos_incidence(Scheme::Vulo, pose, &p, None));

    match bsr_tilt_exact(pose, &p, &p.bounds) {
        Ok((px, py)) => match lens_state_for_tilt(px, py, &p.lens) {
            Ok(s) => {
                describe_state(&mut out, "bsr", &s);
                let _ = writeln!(out, "bsr.cos_incidence = {:.9}", cos_incidence(Scheme::Bsr, pose, &p, Some((px, py))));
            }
            Err(e) => {
                let _ = writeln!(out, "bsr = {e}");
            }
        },
        Err(e) => {
            let _ = writeln!(out, "bsr = {e}");
        }
    }
    match bsr_solve(pose, &p, &p.bounds, seed) {
        Ok((px, py)) => {
            let _ = writeln!(out, "bsr.newton_tilt_deg = {:.6} {:.6}", px.to_degrees(), py.to_degrees());
        }
        Err(e) => {
            let _ = writeln!(out, "bsr.newton = {e}");
        }
    }
    for s in Scheme::ALL {
        let _ = writeln!(out, "{s}.snr = {:.9e}", snr(pose, s, &p));
    }
    out
}

/// Run a parsed command; the return value is the process exit code.
pub fn run(cli: Cli) -> i32 {
    let res = match cli.command {
        Command::Sweep(opts) => run_rows(&opts, false).map(|_| EXIT_OK),
        Command::Outage(opts) => run_rows(&opts, true).map(|_| EXIT_OK),
        Command::LensSolve {
            config,
            r,
            theta_deg,
            theta_r_deg,
            phi_r_deg,
            seed,
        } => load_config(config.as_ref()).and_then(|cfg| {
            if !(r >= 0.0) || !(0.0..90.0).contains(&phi_r_deg) {
                return Err(CliError::config("need r >= 0 and 0 <= phi_r_deg < 90"));
            }
            let pose = Pose::new(r, theta_deg.to_radians(), theta_r_deg.to_radians(), phi_r_deg.to_radians());
            print!("{}", lens_solve_report(&cfg, &pose, seed));
            Ok(EXIT_OK)
        }),
        Command::Validate {
            config,
            seed,
            samples,
            workers,
        } => load_config(config.as_ref()).and_then(|mut cfg| {
            apply_overrides(&mut cfg, seed, samples)?;
            let report = with_workers(workers, || run_validation(&cfg))?;
            println!("{report}");
            Ok(if report.all_pass() { EXIT_OK } else { EXIT_VALIDATION })
        }),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            e.code
        }
    }
}
