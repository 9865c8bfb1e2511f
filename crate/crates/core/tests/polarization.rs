use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

use kerrqc::fockoracle::{coherent_fock, minimal_cutoff, StokesAxis};
use kerrqc::phasespace::{KerrConfig, Tau, TwoModeCoherentInit};
use kerrqc::polarization::{
    optimal_amount_closed_form, optimal_angle, squeezing_report, squeezing_report_with,
    stokes_mean, stokes_var_perp, StokesMoments, VarianceForm,
};
use kerrqc::quadrature::golden_section_min;
use proptest::prelude::*;

fn tau(t: f64) -> Tau {
    Tau::new(t).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn mean_starts_on_the_circular_pole() {
    let i0 = 1e6;
    assert_eq!(stokes_mean(i0, tau(0.0)).unwrap(), [0.0, i0, 0.0]);
    let m = StokesMoments::new(i0, tau(0.0), 0.0).unwrap();
    assert_eq!(m.mean_n(), i0);
    for theta in [0.0, 0.4, FRAC_PI_2, 2.0] {
        assert!(rel(m.var_perp(theta), i0) < 1e-15);
    }
}

#[test]
fn mean_follows_short_time_expansion() {
    let i0 = 1e6;
    for x in [1e-6_f64, 1e-5, 1e-4, 5e-4] {
        let t = (x / i0).sqrt();
        let sy = stokes_mean(i0, tau(t)).unwrap()[1];
        // Leading order of the exact mean is I0 (1 - 2 I0 tau^2).
        let leading = i0 * (1.0 - 2.0 * i0 * t * t);
        assert!(rel(sy, leading) < 4.0 * x * x + 1e-12, "I0 tau^2 = {x}");
        let coarse = i0 * (1.0 - i0 * t * t);
        assert!(rel(sy, coarse) < 1e-3, "I0 tau^2 = {x}");
    }
}

#[test]
fn variance_follows_short_time_expansion() {
    let i0 = 1e6;
    for x in [1e-3, 1e-2] {
        let t = x / i0;
        for k in 0..16 {
            let theta = PI * f64::from(k) / 16.0;
            let got = stokes_var_perp(i0, theta, tau(t)).unwrap();
            let s = theta.sin();
            let want = i0 * (1.0 + 4.0 * i0 * i0 * s * s * t * t)
                - 2.0 * i0 * i0 * (2.0 * theta).sin() * t;
            assert!(rel(got, want) < 1e-4, "I0 tau = {x}, theta = {theta}");
        }
    }
}

#[test]
fn moments_match_fock_oracle() {
    let i0 = 25.0;
    let init = TwoModeCoherentInit::circular(i0).unwrap();
    let state = coherent_fock(&init, minimal_cutoff(i0) + 10).unwrap();
    for t in [1e-3, 1e-2] {
        let evolved = state.evolve(tau(t));
        let m = StokesMoments::new(i0, tau(t), 0.0).unwrap();
        let sy = evolved.stokes_mean(StokesAxis::Y);
        assert!(!sy.truncation_warning);
        let mean_err = rel(m.mean_s()[1], -sy.value);
        assert!(mean_err <= 5.0 / i0, "tau = {t}: {mean_err}");
        for theta in [0.0, FRAC_PI_8, FRAC_PI_4] {
            let fock = evolved.stokes_var(StokesAxis::Perp(theta)).value;
            let var_err = rel(m.var_perp(theta), fock);
            assert!(
                var_err <= 10.0 / i0,
                "tau = {t}, theta = {theta}: {var_err}"
            );
        }
    }
}

#[test]
fn half_angle_variance_goes_negative() {
    let i0 = 1e6;
    let m = StokesMoments::new(i0, tau(0.0), 0.0).unwrap();
    let half_angle = m.with_form(VarianceForm::HalfAngle).var_perp(FRAC_PI_2);
    assert!(rel(half_angle, i0 * (1.0 + 0.25 * i0) - 2.0 * i0 * i0) < 1e-15);
    assert!(half_angle < 0.0);
    assert!(m.with_form(VarianceForm::FullAngle).var_perp(FRAC_PI_2) < 0.0);
    assert!(m.var_perp(FRAC_PI_2) > 0.0);
}

#[test]
fn uncertainty_product_is_bounded_by_mean() {
    let i0 = 1e6;
    for t in [0.0, 1e-8, 1e-7, 1e-6, 5e-6, 1e-5] {
        for g in [0.0, 1.0, 20.0] {
            let m = StokesMoments::new(i0, tau(t), g).unwrap();
            let sy = m.mean_s()[1];
            for k in 0..64 {
                let theta = PI * f64::from(k) / 64.0;
                let product = m.var_perp(theta) * m.var_perp(theta + FRAC_PI_2);
                assert!(
                    product >= sy * sy * (1.0 - 1e-12),
                    "tau={t} g={g} theta={theta}"
                );
            }
        }
    }
}

#[test]
fn variance_has_period_pi() {
    let i0 = 1e6;
    for t in [1e-7, 3e-6] {
        for g in [0.0, 5.0] {
            let m = StokesMoments::new(i0, tau(t), g).unwrap();
            for k in 0..32 {
                let theta = 0.1 + PI * f64::from(k) / 32.0;
                assert!(rel(m.var_perp(theta), m.var_perp(theta + PI)) < 1e-12);
            }
        }
    }
}

#[test]
fn dephasing_degrades_monotonically() {
    let i0 = 1e6;
    let t = 1e-6;
    let gammas = [0.0, 0.2, 1.0, 5.0, 20.0, 100.0];
    let theta = optimal_angle(i0, tau(t), 0.0).unwrap();
    let mut prev_var = f64::NEG_INFINITY;
    let mut prev_mean = f64::INFINITY;
    let mut prev_closed = f64::NEG_INFINITY;
    for g in gammas {
        let m = StokesMoments::new(i0, tau(t), g).unwrap();
        let var = m.var_perp(theta);
        let mean = m.mean_s()[1];
        let closed = optimal_amount_closed_form(i0, tau(t), g);
        assert!(
            var >= prev_var && mean <= prev_mean && closed >= prev_closed,
            "g={g}"
        );
        prev_var = var;
        prev_mean = mean;
        prev_closed = closed;
    }
}

#[test]
fn dephased_moments_reduce_to_lossless() {
    let i0 = 1e6;
    for t in [1e-7, 2e-6] {
        let lossless = StokesMoments::new(i0, tau(t), 0.0).unwrap();
        let faint = StokesMoments::new(i0, tau(t), 1e-14).unwrap();
        assert_eq!(lossless.mean_s(), stokes_mean(i0, tau(t)).unwrap());
        assert!(rel(faint.mean_s()[1], lossless.mean_s()[1]) < 1e-12);
        for k in 0..8 {
            let theta = PI * f64::from(k) / 8.0 + 0.05;
            assert_eq!(
                lossless.var_perp(theta),
                stokes_var_perp(i0, theta, tau(t)).unwrap()
            );
            assert!(rel(faint.var_perp(theta), lossless.var_perp(theta)) < 1e-10);
        }
    }
}

#[test]
fn squeezing_angle_trivial_cases() {
    assert_eq!(optimal_angle(1e6, tau(0.0), 0.0).unwrap(), FRAC_PI_4);
    let lossless = optimal_angle(1e6, tau(1e-6), 0.0).unwrap();
    for g in [0.1, 1.0, 10.0] {
        assert!(optimal_angle(1e6, tau(1e-6), g).unwrap() < lossless);
    }
    assert!(optimal_angle(-1.0, tau(0.0), 0.0).is_err());
    assert!(optimal_angle(1.0, tau(0.0), -1.0).is_err());
}

#[test]
fn report_certifies_lossless_squeezing() {
    let i0 = 1e6;
    let chi = 2.0;
    let cfg = KerrConfig::unitary(chi).unwrap();
    let t_phys = 1e-6;
    let r = squeezing_report(i0, &cfg, t_phys).unwrap();
    let t = r.tau.value();
    assert!(rel(t, 0.5 * chi * t_phys) < 1e-15);
    assert!(r.squeezing_certified);
    assert!(r.var_sq < i0 && r.var_antisq > i0);
    let x = i0 * t;
    assert!(
        rel(
            r.optimal_amount_closed_form,
            2.0 * i0 * x * (x - (1.0 + x * x).sqrt())
        ) < 1e-14
    );
    assert!(rel(r.optimal_amount, r.optimal_amount_closed_form) < 1e-2);
    assert_eq!(r.form, VarianceForm::Derived);
    let half_angle = squeezing_report_with(i0, &cfg, t_phys, VarianceForm::HalfAngle).unwrap();
    assert_eq!(half_angle.var_sq, r.var_sq_half_angle);
}

#[test]
fn strong_dephasing_removes_squeezing() {
    let i0 = 1e6;
    let cfg = KerrConfig::dephased(1.0, 1e8).unwrap();
    let r = squeezing_report(i0, &cfg, 2e-6).unwrap();
    assert!(!r.squeezing_certified);
    assert!(r.var_sq >= i0 * (1.0 - 1e-9));
}

proptest! {
    #[test]
    fn closed_form_angle_minimises_variance(x in 1e-3_f64..=5.0, log_i0 in 5.0_f64..7.0) {
        let i0 = 10f64.powf(log_i0);
        let t = tau(x / i0);
        let m = StokesMoments::new(i0, t, 0.0).unwrap();
        let numeric = golden_section_min(|th| m.var_perp(th), 0.0, FRAC_PI_2, 1e-10);
        let closed = optimal_angle(i0, t, 0.0).unwrap();
        prop_assert!((numeric - closed).abs() < 1e-2, "{} vs {}", numeric, closed);
    }
}
