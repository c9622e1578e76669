mod oracles;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;

use tllvlc::channel::{alignment, fixed_lens_cos, snr, Scheme, SystemParams};
use tllvlc::cli::parse_config;
use tllvlc::geometry::{lens_rotation, receiver_rotation, refract, Pose, Vec3};
use tllvlc::lens::{contact_angle_from_voltage, lens_state_for_tilt, voltage_for_contact_angle, LensGeometry};
use tllvlc::mobility::{rwp_quantile, rwp_radial_cdf, sample_pose};
use tllvlc::outage::bsr_outage_closed;
use tllvlc::specfun::{hyp2f1_half, meijer_g_0110};

fn unit(theta: f64, phi: f64) -> Vec3 {
    Vec3::new(phi.sin() * theta.cos(), phi.sin() * theta.sin(), phi.cos())
}

#[test]
fn tanh_sinh_handles_endpoint_singularity() {
    let v = oracles::tanh_sinh(|t| t.powf(-0.5), 0.0, 1.0);
    assert!((v - 2.0).abs() < 1e-10, "{v}");
}

#[test]
fn complex_log_gamma_matches_real() {
    let v = oracles::ln_gamma_complex(Complex64::new(3.5, 0.0));
    assert!((v.re - statrs::function::gamma::ln_gamma(3.5)).abs() < 1e-13);
    assert!(v.im.abs() < 1e-15);
}

proptest! {
    #[test]
    fn refraction_obeys_snell(
        t1 in 0.0..TAU, p1 in 0.0..1.5f64,
        t2 in 0.0..TAU, p2 in 0.0..1.5f64,
        n in 1.01..2.0f64,
    ) {
        let l = unit(t1, p1);
        let e = unit(t2, p2);
        prop_assume!(l.dot(e) > 1e-3);
        let t = refract(l, e, n).unwrap();
        prop_assert!((t.norm() - 1.0).abs() < 1e-12);
        prop_assert!((n * t.cross(l).norm() - e.cross(l).norm()).abs() < 1e-12);
        prop_assert!(t.dot(l.cross(e)).abs() < 1e-12);
        // the ray continues into the lens
        prop_assert!(t.dot(l) < 0.0);
    }

    #[test]
    fn rotations_are_proper(tr in 0.0..TAU, pr in 0.0..FRAC_PI_2, px in -1.5..1.5f64, py in -1.5..1.5f64) {
        for m in [receiver_rotation(tr, pr), lens_rotation(px, py)] {
            prop_assert!(m.orthonormality_defect() < 1e-12);
            prop_assert!((m.det() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fixed_lens_never_loses_to_bare_photodiode(x in -1.0..1.0f64, n in 1.0..2.5f64) {
        prop_assert!(fixed_lens_cos(x, n) + 1e-15 >= x.max(0.0));
        prop_assert!(fixed_lens_cos(x, n) <= 1.0 + 1e-15);
    }

    #[test]
    fn scheme_snr_ordering(r in 0.0..5.0f64, th in 0.0..TAU, tr in 0.0..TAU, pr in 0.0..1.5f64) {
        let p = SystemParams::default();
        let pose = Pose::new(r, th, tr, pr);
        let s: Vec<f64> = Scheme::ALL.iter().map(|&k| snr(&pose, k, &p)).collect();
        prop_assert!(s.iter().all(|v| v.is_finite() && *v >= 0.0));
        // ideal BSR is aligned; the others can only lose gain
        prop_assert!(s.iter().all(|v| *v <= s[0] * (1.0 + 1e-12)));
        prop_assert!(s[2] + 1e-12 * s[0] >= s[3]);
    }

    #[test]
    fn alignment_is_a_cosine(r in 0.0..10.0f64, d in 0.0..TAU, pr in 0.0..FRAC_PI_2, h in 0.5..10.0f64) {
        let x = alignment(r, d, pr, h);
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&x));
    }

    #[test]
    fn rwp_quantile_inverts_cdf(u in 1e-9..1.0f64, rc in 0.5..10.0f64) {
        let r = rwp_quantile(u, rc);
        prop_assert!((0.0..=rc).contains(&r));
        prop_assert!((rwp_radial_cdf(r, rc) - u).abs() < 1e-10);
    }

    #[test]
    fn rwp_cdf_is_monotone(a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(rwp_radial_cdf(lo, 1.0) <= rwp_radial_cdf(hi, 1.0));
    }

    #[test]
    fn bsr_outage_monotone_in_power_and_threshold(p1 in -10.0..25.0f64, dp in 0.0..5.0f64, g in 0.5..50.0f64, dg in 0.0..20.0f64) {
        let base = SystemParams { tx_power_dbw: p1, ..SystemParams::default() };
        let louder = SystemParams { tx_power_dbw: p1 + dp, ..base.clone() };
        let a = bsr_outage_closed(g, &base).p_out;
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(bsr_outage_closed(g, &louder).p_out <= a + 1e-12);
        prop_assert!(bsr_outage_closed(g + dg, &base).p_out + 1e-12 >= a);
    }

    #[test]
    fn pose_addressing_is_pure(seed in any::<u64>(), idx in 0u64..1_000_000) {
        let p = SystemParams::default();
        prop_assert_eq!(sample_pose(&p, seed, idx), sample_pose(&p, seed, idx));
    }

    #[test]
    fn electrowetting_round_trip(theta in 0.0..FRAC_PI_2, d in 1e-3..1e-2f64) {
        let k = LensGeometry::default().k_ew;
        let v = voltage_for_contact_angle(theta, d, k).unwrap();
        prop_assert!((contact_angle_from_voltage(v, d, k).unwrap() - theta).abs() < 1e-6);
    }

    #[test]
    fn lens_walls_hold_the_tilt(px in -0.6..0.6f64, py in -0.6..0.6f64) {
        let s = lens_state_for_tilt(px, py, &LensGeometry::default()).unwrap();
        // surface tilt is π/2 minus the right-wall contact angle on each axis
        prop_assert!((FRAC_PI_2 - s.contact[1] - px).abs() < 1e-12);
        prop_assert!((FRAC_PI_2 - s.contact[3] - py).abs() < 1e-12);
        prop_assert!((s.contact[0] + s.contact[1] - PI).abs() < 1e-12);
        prop_assert!(s.voltage.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn hyp2f1_matches_euler_integral(a in -1.5..1.5f64, x in -20.0..0.9f64) {
        let v = hyp2f1_half(a, x).unwrap();
        let o = oracles::hyp2f1_euler(a, x);
        prop_assert!((v - o).abs() <= 1e-9 * o.abs(), "{} vs {}", v, o);
    }

    #[test]
    fn meijer_g_matches_contour(z in 0.3..8.0f64, a in -1.5..1.5f64) {
        let v = meijer_g_0110(z, a).unwrap();
        let o = oracles::meijer_g_contour(z, a);
        prop_assert!((v - o).abs() <= 1e-9 * o.abs(), "{} vs {}", v, o);
    }

    #[test]
    fn config_accepts_in_range_angles(deg in 0.5..89.5f64) {
        let c = parse_config(&format!("theta_half_deg = {deg}\nmu_phi_deg = {deg}")).unwrap();
        prop_assert!((c.params().theta_half - deg.to_radians()).abs() < 1e-15);
    }
}
