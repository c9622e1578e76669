use std::fmt;

use crate::channel::{vulo_cos_polar, Scheme, SystemParams, VuloReading};
use crate::geometry::{lens_normal, lens_rotation, receiver_rotation, refract};
use crate::lens::{bsr_residual, bsr_solve, cos_incidence_for_tilt, vulo_tilt, TiltBounds};
use crate::mobility::{rwp_radial_pdf, PoseDistribution, PoseStream};
use crate::outage::{
    bsr_case3_total, bsr_outage_closed, monte_carlo_counts, outage_quadrature, sigma_y3_squared,
    sigma_y3_squared_series, vulo_outage_chain, vulo_outage_closed, vulo_snr_decomposed, BsrPdfParams,
    OutageResult, ProductLaw, VuloTermParams,
};
use crate::specfun::integrate_adaptive;

use super::config::ExperimentConfig;

/// One line of the validation table.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: String,
}

impl Check {
    /// Pass when `measured <= tolerance`.
    pub fn at_most(name: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            pass: measured <= tolerance,
            note: String::new(),
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5);
        writeln!(f, "{:<w$}  {:>15}  {:>10}  verdict  note", "check", "measured", "tolerance")?;
        for c in &self.checks {
            writeln!(
                f,
                "{:<w$}  {:>15.6e}  {:>10.1e}  {:<7}  {}",
                c.name,
                c.measured,
                c.tolerance,
                if c.pass { "PASS" } else { "FAIL" },
                c.note
            )?;
        }
        write!(f, "{} of {} checks passed", self.checks.len() - self.failures(), self.checks.len())
    }
}

/// `|∫₀ᴿ f − 1|` for a candidate radial pdf.
pub fn rwp_normalisation_check<F: Fn(f64) -> f64>(pdf: F, r_circ: f64) -> Check {
    let (v, _) = integrate_adaptive(pdf, 0.0, r_circ, 8, 1e-15);
    Check::at_most("rwp radial pdf integrates to 1", (v - 1.0).abs(), 1e-12).note(format!("integral {v:.12}"))
}

fn poses(params: &SystemParams, seed: u64, n: usize) -> impl Iterator<Item = crate::Pose> {
    PoseStream::new(PoseDistribution::from_params(params), seed, 0).take(n)
}

/// Largest `|cos_reading − cos_refraction|` over sampled poses.
pub fn vulo_reading_deviation(params: &SystemParams, reading: VuloReading, n: usize) -> f64 {
    let h = params.ap_height;
    poses(params, 7, n)
        .filter_map(|pose| {
            let (px, py) = vulo_tilt(&pose);
            let exact = cos_incidence_for_tilt(&pose, h, params.n_l, px, py).ok()?;
            let c = vulo_cos_polar(pose.r, pose.theta - pose.theta_r, pose.phi_r, h, params.n_l, reading);
            Some((c - exact).abs())
        })
        .fold(0.0, f64::max)
}

fn ratio_check(name: &str, value: f64, reference: f64) -> Check {
    let ratio = value / reference;
    // measured is the log2 distance from the reference
    let dist = if ratio > 0.0 { ratio.log2().abs() } else { f64::INFINITY };
    Check::at_most(name, dist, 1.0).note(format!("value {value:.4e}, quadrature {reference:.4e}"))
}

fn z_score(mc: &OutageResult, reference: f64) -> f64 {
    let n = mc.samples as f64;
    let se = (reference * (1.0 - reference) / n).sqrt();
    if se == 0.0 {
        if mc.p_out == reference {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (mc.p_out - reference).abs() / se
    }
}

/// Model self-consistency checks at the configured operating point.
pub fn run_validation(cfg: &ExperimentConfig) -> ValidationReport {
    let p = cfg.params();
    let rules = cfg.rules();
    let qspec = cfg.quadrature_spec();
    let g = cfg.gamma_th;
    let mut checks = Vec::new();

    checks.push(rwp_normalisation_check(|r| rwp_radial_pdf(r, p.r_circ), p.r_circ));

    let w = BsrPdfParams::new(&p);
    let (wn, _) = integrate_adaptive(|y| w.pdf(y), w.y1, w.y2, 16, 1e-14);
    checks.push(Check::at_most("BSR SNR pdf integrates to 1", (wn - 1.0).abs(), 1e-9));
    checks.push(Check::at_most("BSR outage at the top of the support", (bsr_case3_total(&p) - 1.0).abs(), 1e-9));

    let y1 = ProductLaw::y1(&p, &rules.hermite);
    let (_, top) = y1.support();
    checks.push(Check::at_most("Y1 product law cdf reaches 1", (y1.cdf(top) - 1.0).abs(), 1e-6));

    let mut snell = 0.0f64;
    let mut rot = 0.0f64;
    for (i, pose) in poses(&p, 3, 2000).enumerate() {
        let psi = (0.3 * (i as f64).sin(), 0.3 * (i as f64 * 0.7).cos());
        let l = lens_normal(pose.theta_r, pose.phi_r, psi.0, psi.1);
        rot = rot
            .max(receiver_rotation(pose.theta_r, pose.phi_r).orthonormality_defect())
            .max(lens_rotation(psi.0, psi.1).orthonormality_defect());
        if let Ok(e) = pose.toward_ap(p.ap_height) {
            if let Ok(t) = refract(l, e, p.n_l) {
                snell = snell.max((p.n_l * t.cross(l).norm() - e.cross(l).norm()).abs());
                snell = snell.max((t.norm() - 1.0).abs());
            }
        }
    }
    checks.push(Check::at_most("refraction obeys Snell's law", snell, 1e-12));
    checks.push(Check::at_most("rotations are orthonormal", rot, 1e-12));

    let wide = TiltBounds {
        psi_lo: -1.2,
        psi_hi: 1.2,
    };
    let (mut solved, mut worst) = (0, 0.0f64);
    for (i, pose) in poses(&p, 5, 100).enumerate() {
        if let Ok((px, py)) = bsr_solve(&pose, &p, &wide, i as u64) {
            solved += 1;
            worst = worst.max(bsr_residual(&pose, p.ap_height, p.n_l, px, py).unwrap_or(f64::INFINITY).abs());
        }
    }
    checks.push(
        Check::at_most("BSR tilt solver residual", worst, 1e-9).note(format!("{solved} of 100 poses solvable within +-1.2 rad")),
    );

    let devs = [
        VuloReading::Snell,
        VuloReading::InverseRootPolar,
        VuloReading::InverseRootCartesian,
    ]
    .map(|r| vulo_reading_deviation(&p, r, 2000));
    let configured = match p.vulo_reading {
        VuloReading::Snell => devs[0],
        VuloReading::InverseRootPolar => devs[1],
        VuloReading::InverseRootCartesian => devs[2],
    };
    checks.push(Check::at_most("VULO cosine reading matches refraction", configured, 1e-12).note(format!(
        "snell {:.2e}, inverse_root_polar {:.2e}, inverse_root_cartesian {:.2e}",
        devs[0], devs[1], devs[2]
    )));

    let terms = VuloTermParams::new(&p, rules.series_k);
    let decomp = poses(&p, 11, 2000)
        .map(|pose| vulo_snr_decomposed(pose.r, pose.theta - pose.theta_r, pose.phi_r, &p, &terms).relative_error())
        .fold(0.0, f64::max);
    checks.push(Check::at_most("VULO SNR decomposition is exact", decomp, 1e-10));

    let var_q = sigma_y3_squared(&p, rules.series_k);
    let var_s = sigma_y3_squared_series(&p, rules.series_k).unwrap_or(f64::NAN);
    let rel = (var_q - var_s).abs() / var_q.abs().max(f64::MIN_POSITIVE);
    checks.push(Check::at_most("Y3 variance: quadrature vs series", if rel.is_nan() { f64::INFINITY } else { rel }, 1e-8));

    let bsr_closed = bsr_outage_closed(g, &p).p_out;
    let quad: Vec<Option<OutageResult>> = Scheme::ALL
        .iter()
        .map(|&s| outage_quadrature(s, g, &p, &qspec).ok())
        .collect();
    if let Some(q) = &quad[0] {
        checks.push(Check::at_most("BSR closed form vs quadrature", (bsr_closed - q.p_out).abs(), 1e-6));
    }
    for (s, q) in Scheme::ALL.iter().zip(&quad) {
        if let Some(q) = q {
            let mut c = Check::at_most(&format!("{s} quadrature converges under doubling"), 0.0, 0.0);
            c.pass = q.converged == Some(true);
            c.measured = if c.pass { 0.0 } else { 1.0 };
            checks.push(c);
        }
    }

    let n = cfg.mc_samples;
    let counts = monte_carlo_counts(&Scheme::ALL, g, &p, n, cfg.seed);
    for (i, (s, q)) in Scheme::ALL.iter().zip(&quad).enumerate() {
        if let Some(q) = q {
            let mc = OutageResult::sampled(counts.outages[i], n);
            checks.push(
                Check::at_most(&format!("{s} Monte Carlo vs quadrature (z)"), z_score(&mc, q.p_out), 3.0)
                    .note(format!("mc {:.4e}, quadrature {:.4e}, n {n}", mc.p_out, q.p_out)),
            );
        }
    }

    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().map(|pool| {
        pool.install(|| monte_carlo_counts(&Scheme::ALL, g, &p, n.min(200_000), cfg.seed))
    });
    let multi = monte_carlo_counts(&Scheme::ALL, g, &p, n.min(200_000), cfg.seed);
    let same = single.map(|c| c == multi).unwrap_or(false);
    let mut c = Check::at_most("Monte Carlo counts independent of worker count", if same { 0.0 } else { 1.0 }, 0.0);
    c.pass = same;
    checks.push(c);

    if let Some(q) = &quad[1] {
        if q.p_out > 0.0 {
            match vulo_outage_closed(g, &p, &rules) {
                Ok(v) => checks.push(ratio_check("VULO convolution formula within 2x of quadrature", v.p_out, q.p_out)),
                Err(e) => checks.push(Check {
                    name: "VULO convolution formula within 2x of quadrature".into(),
                    measured: f64::INFINITY,
                    tolerance: 1.0,
                    pass: false,
                    note: e.to_string(),
                }),
            }
            let chain = vulo_outage_chain(g, &p, &rules);
            checks.push(ratio_check("VULO chain approximation within 2x of quadrature", chain.p_out, q.p_out));
        }
    }

    ValidationReport { checks }
}
