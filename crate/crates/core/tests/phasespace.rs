use std::f64::consts::{FRAC_PI_2, PI};

use kerrqc::phasespace::{
    convert_chart, evolve_point, wigner_dephased, wigner_dephased_series, wigner_evolved,
    wigner_initial, wigner_poincare, wrap_angle, Chart, KerrConfig, PhasePoint, Tau,
    TwoModeCoherentInit,
};
use kerrqc::specfun::bessel_i_scaled;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tau(t: f64) -> Tau {
    Tau::new(t).unwrap()
}

fn aa(ia: f64, phi_a: f64, ib: f64, phi_b: f64) -> PhasePoint {
    PhasePoint::ActionAngle {
        ia,
        phi_a,
        ib,
        phi_b,
    }
}

fn cart(s: [f64; 3]) -> PhasePoint {
    PhasePoint::PoincareCartesian {
        stokes: s,
        global_phase: 0.0,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

const PEAK: f64 = 4.0 / (PI * PI);

/// Random amplitude point within a few shot-noise units of `init`.
fn near(rng: &mut ChaCha8Rng, init: &TwoModeCoherentInit, spread: f64) -> PhasePoint {
    let mut d = || {
        Complex64::new(
            rng.gen_range(-spread..spread),
            rng.gen_range(-spread..spread),
        )
    };
    PhasePoint::Amplitude {
        alpha: init.alpha0() + d(),
        beta: init.beta0() + d(),
    }
}

#[test]
fn initial_wigner_values() {
    let init = TwoModeCoherentInit::new(2.0, 3.0, 0.4, -1.1).unwrap();
    let center = PhasePoint::Amplitude {
        alpha: init.alpha0(),
        beta: init.beta0(),
    };
    assert!(rel(wigner_initial(&init, &center).unwrap(), PEAK) < 1e-15);
    let shifted = PhasePoint::Amplitude {
        alpha: init.alpha0() + Complex64::new(0.5_f64.sqrt(), 0.0),
        beta: init.beta0(),
    };
    assert!(
        rel(
            wigner_initial(&init, &shifted).unwrap(),
            PEAK * (-1.0_f64).exp()
        ) < 1e-14
    );
}

#[test]
fn initial_wigner_is_normalized() {
    // Trapezoid rule on a uniform grid is spectrally accurate for a Gaussian.
    let init = TwoModeCoherentInit::new(2.0, 3.0, 0.4, -1.1).unwrap();
    let (a0, b0) = (init.alpha0(), init.beta0());
    let n = 48;
    let half = 3.5;
    let h = 2.0 * half / (n - 1) as f64;
    let axis: Vec<f64> = (0..n).map(|i| -half + i as f64 * h).collect();
    let mut total = 0.0;
    for &x1 in &axis {
        for &x2 in &axis {
            let alpha = a0 + Complex64::new(x1, x2);
            for &x3 in &axis {
                for &x4 in &axis {
                    let p = PhasePoint::Amplitude {
                        alpha,
                        beta: b0 + Complex64::new(x3, x4),
                    };
                    total += wigner_initial(&init, &p).unwrap();
                }
            }
        }
    }
    total *= h.powi(4);
    assert!((total - 1.0).abs() < 1e-8, "{total}");
}

#[test]
fn evolve_point_examples() {
    let p = aa(1.3, 0.2, 0.7, -2.0);
    let same = evolve_point(&p, tau(0.0)).unwrap();
    assert_eq!(same.action_angle(), p.action_angle());
    let moved = evolve_point(&aa(1.0, 0.0, 2.0, 0.0), tau(0.25)).unwrap();
    let (ia, pa, ib, pb) = moved.action_angle();
    assert_eq!((ia, ib), (1.0, 2.0));
    assert!((pa - 1.0).abs() < 1e-15 && (pb - 0.5).abs() < 1e-15);
}

#[test]
fn evolve_point_has_unit_jacobian() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-6;
    for _ in 0..100 {
        let x = [
            rng.gen_range(0.5..20.0),
            rng.gen_range(-PI..PI),
            rng.gen_range(0.5..20.0),
            rng.gen_range(-PI..PI),
        ];
        let t = tau(rng.gen_range(0.0..2.0));
        let image = |x: [f64; 4]| {
            let (ia, pa, ib, pb) = evolve_point(&aa(x[0], x[1], x[2], x[3]), t)
                .unwrap()
                .action_angle();
            [ia, pa, ib, pb]
        };
        let mut jac = nalgebra::Matrix4::<f64>::zeros();
        for col in 0..4 {
            let (mut up, mut down) = (x, x);
            up[col] += h;
            down[col] -= h;
            let (fu, fd) = (image(up), image(down));
            for row in 0..4 {
                let diff = fu[row] - fd[row];
                let diff = if row % 2 == 1 { wrap_angle(diff) } else { diff };
                jac[(row, col)] = diff / (2.0 * h);
            }
        }
        assert!(
            (jac.determinant() - 1.0).abs() < 1e-6,
            "{}",
            jac.determinant()
        );
    }
}

#[test]
fn evolve_point_preserves_volume() {
    // Fraction of the domain [1,2] x T x [2,3] x T whose image lands in a
    // fixed box of unit volume.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples = 8_000_000;
    for t in [0.1, 1.0] {
        let t = tau(t);
        let mut hits = 0u64;
        for _ in 0..samples {
            let p = aa(
                rng.gen_range(1.0..2.0),
                rng.gen_range(-PI..PI),
                rng.gen_range(2.0..3.0),
                rng.gen_range(-PI..PI),
            );
            let (_, pa, _, pb) = evolve_point(&p, t).unwrap().action_angle();
            if (0.0..1.0).contains(&pa) && (0.5..1.5).contains(&pb) {
                hits += 1;
            }
        }
        let volume = hits as f64 / samples as f64 * (2.0 * PI).powi(2);
        assert!((volume - 1.0).abs() < 0.01, "tau={t:?}: {volume}");
    }
}

#[test]
fn evolved_wigner_equals_transported_initial() {
    let init = TwoModeCoherentInit::new(3.0, 5.0, 0.7, 2.0).unwrap();
    assert!(
        rel(
            wigner_evolved(&init, &init.center(), tau(0.0)).unwrap(),
            PEAK
        ) < 1e-15
    );
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let p = near(&mut rng, &init, 2.0);
        let t = tau(rng.gen_range(0.0..3.0));
        let direct = wigner_evolved(&init, &p, t).unwrap();
        let composed = wigner_initial(&init, &evolve_point(&p, t).unwrap()).unwrap();
        assert!((direct - composed).abs() < 1e-12, "{direct} vs {composed}");
    }
}

#[test]
fn evolved_wigner_stays_normalized_at_high_intensity() {
    // d^2 alpha d^2 beta = dI_a dphi_a dI_b dphi_b / 4. The phase integrals
    // are taken over windows that follow the evolved centre.
    let (i0, t) = (1e6, 1e-6);
    let init = TwoModeCoherentInit::new(i0, i0, 0.3, -0.2).unwrap();
    let tt = tau(t);
    let sigma_i = i0.sqrt();
    let sigma_phi = 0.5 / i0.sqrt();
    let trapezoid = |n: usize, lo: f64, hi: f64| {
        let h = (hi - lo) / (n - 1) as f64;
        (0..n).map(move |k| {
            let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            (lo + k as f64 * h, w * h)
        })
    };
    let mut total = 0.0;
    for (ia, wa) in trapezoid(61, i0 - 7.5 * sigma_i, i0 + 7.5 * sigma_i) {
        for (ib, wb) in trapezoid(61, i0 - 7.5 * sigma_i, i0 + 7.5 * sigma_i) {
            let ca = init.phi0a() - 2.0 * ib * t;
            let cb = init.phi0b() - 2.0 * ia * t;
            let span = 9.0 * sigma_phi;
            for (pa, wpa) in trapezoid(61, ca - span, ca + span) {
                for (pb, wpb) in trapezoid(61, cb - span, cb + span) {
                    let w = wigner_evolved(&init, &aa(ia, pa, ib, pb), tt).unwrap();
                    total += w * wa * wb * wpa * wpb;
                }
            }
        }
    }
    total *= 0.25;
    assert!((total - 1.0).abs() < 1e-6, "{total}");
}

#[test]
fn evolved_wigner_solves_transport_equation() {
    let init = TwoModeCoherentInit::new(2.0, 3.0, 0.5, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-6;
    for _ in 0..100 {
        let (ia, pa, ib, pb) = near(&mut rng, &init, 1.0).action_angle();
        let t = rng.gen_range(0.01..1.0);
        let w = |ia: f64, pa: f64, ib: f64, pb: f64, t: f64| {
            wigner_evolved(&init, &aa(ia, pa, ib, pb), tau(t)).unwrap()
        };
        let dt = (w(ia, pa, ib, pb, t + h) - w(ia, pa, ib, pb, t - h)) / (2.0 * h);
        let dpa = (w(ia, pa + h, ib, pb, t) - w(ia, pa - h, ib, pb, t)) / (2.0 * h);
        let dpb = (w(ia, pa, ib, pb + h, t) - w(ia, pa, ib, pb - h, t)) / (2.0 * h);
        let residual = dt - 2.0 * ib * dpa - 2.0 * ia * dpb;
        assert!(residual.abs() < 1e-4, "{residual}");
    }
}

#[test]
fn evolved_wigner_is_non_negative() {
    let init = TwoModeCoherentInit::new(4.0, 1.0, -0.3, 2.2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100_000 {
        let p = near(&mut rng, &init, 4.0);
        let t = tau(rng.gen_range(0.0..10.0));
        let w = wigner_evolved(&init, &p, t).unwrap();
        assert!((0.0..=PEAK).contains(&w));
    }
}

#[test]
fn initial_wigner_factorizes() {
    let init = TwoModeCoherentInit::new(4.0, 1.0, -0.3, 2.2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let p = near(&mut rng, &init, 1.5);
        let (alpha, beta) = p.amplitudes();
        let wa = 2.0 / PI * (-2.0 * (alpha - init.alpha0()).norm_sqr()).exp();
        let wb = 2.0 / PI * (-2.0 * (beta - init.beta0()).norm_sqr()).exp();
        let w = wigner_evolved(&init, &p, tau(0.0)).unwrap();
        assert!(rel(w, wa * wb) < 1e-12);
    }
}

#[test]
fn chart_examples() {
    let p = aa(5.0, 2.0, 5.0, 2.0 - FRAC_PI_2);
    let (i, theta, phi) = p.spherical();
    assert!((i - 10.0).abs() < 1e-14);
    assert!((theta - FRAC_PI_2).abs() < 1e-15 && (phi - FRAC_PI_2).abs() < 1e-15);
    let s = convert_chart(&p, Chart::PoincareCartesian)
        .unwrap()
        .stokes();
    assert!(s[0].abs() < 1e-14 && (s[1] - 10.0).abs() < 1e-14 && s[2].abs() < 1e-14);

    let pole = aa(3.0, 0.4, 0.0, 1.0);
    let sph = convert_chart(&pole, Chart::PoincareSpherical).unwrap();
    assert_eq!(sph.spherical(), (3.0, 0.0, 0.0));
    assert_eq!(sph.stokes(), [0.0, 0.0, 3.0]);

    assert!(convert_chart(&aa(-1.0, 0.0, 1.0, 0.0), Chart::Amplitude).is_err());
}

#[test]
fn poincare_peak_value() {
    let i0 = 1e6;
    let init = TwoModeCoherentInit::circular(i0).unwrap();
    let peak = wigner_poincare(&init, &cart(init.stokes0()), tau(0.0)).unwrap();
    let exact = 8.0 / PI * bessel_i_scaled(0, 4.0 * i0).unwrap();
    assert!(rel(peak, exact) < 1e-14);
    let leading = 8.0 / PI / (8.0 * PI * i0).sqrt();
    assert!(rel(peak, leading) < 1e-6);
}

#[test]
fn poincare_circular_reduction() {
    // For S_0 = (0, I_0, 0): sigma = 2 I_0 (I + S_y cos(2 tau S_z) - S_x sin(2 tau S_z)).
    let i0: f64 = 40.0;
    let init = TwoModeCoherentInit::circular(i0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let s: [f64; 3] = [
            rng.gen_range(-15.0..15.0),
            rng.gen_range(25.0..55.0),
            rng.gen_range(-15.0..15.0),
        ];
        let t: f64 = rng.gen_range(0.0..0.05);
        let i = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
        let (sn, cs) = (2.0 * t * s[2]).sin_cos();
        let sigma = 2.0 * i0 * (i + s[1] * cs - s[0] * sn);
        let arg = 2.0 * sigma.sqrt();
        let want = 8.0 / PI * (arg - 2.0 * i - 2.0 * i0).exp() * bessel_i_scaled(0, arg).unwrap();
        let got = wigner_poincare(&init, &cart(s), tau(t)).unwrap();
        assert!(rel(got, want) < 1e-12);
    }
}

#[test]
fn poincare_rotates_about_sz() {
    let init = TwoModeCoherentInit::new(30.0, 12.0, 0.2, -0.9).unwrap();
    let s0 = init.stokes0();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let s = [
            s0[0] + rng.gen_range(-10.0..10.0),
            s0[1] + rng.gen_range(-10.0..10.0),
            s0[2] + rng.gen_range(-10.0..10.0),
        ];
        let t: f64 = rng.gen_range(0.0..0.1);
        // The relative phase advances by 2 tau S_z along the flow.
        let (sn, cs) = (-2.0 * t * s[2]).sin_cos();
        let back = [s[0] * cs - s[1] * sn, s[0] * sn + s[1] * cs, s[2]];
        let evolved = wigner_poincare(&init, &cart(s), tau(t)).unwrap();
        let initial = wigner_poincare(&init, &cart(back), tau(0.0)).unwrap();
        assert!(rel(evolved, initial) < 1e-11);
    }
}

#[test]
fn poincare_density_integrates_to_one() {
    let i0 = 50.0;
    let init = TwoModeCoherentInit::circular(i0).unwrap();
    for t in [0.0, 0.01] {
        // The rotation about S_z shears the blob sideways, so x gets more room.
        let (n, half) = (121, 45.0);
        let h = 2.0 * half / (n - 1) as f64;
        let nx = 2 * n;
        let mut total = 0.0;
        for i in 0..nx {
            for j in 0..n {
                for k in 0..n {
                    let s = [
                        -2.0 * half + i as f64 * h,
                        i0 - half + j as f64 * h,
                        -half + k as f64 * h,
                    ];
                    let r = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
                    total += wigner_poincare(&init, &cart(s), tau(t)).unwrap() / (8.0 * r);
                }
            }
        }
        total *= h.powi(3);
        assert!((total - 1.0).abs() < 1e-6, "tau={t}: {total}");
    }
}

#[test]
fn poincare_density_is_global_phase_marginal() {
    // W_P(S) = integral over phi_a of W(I_a, phi_a, I_b, phi_a - phi).
    let init = TwoModeCoherentInit::new(6.0, 9.0, 1.0, -0.5).unwrap();
    let s0 = init.stokes0();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let m = 1024;
    for _ in 0..50 {
        let s = [
            s0[0] + rng.gen_range(-4.0..4.0),
            s0[1] + rng.gen_range(-4.0..4.0),
            s0[2] + rng.gen_range(-4.0..4.0),
        ];
        let t = rng.gen_range(0.0..0.3);
        let (ia, _, ib, _) = cart(s).action_angle();
        let (_, _, phi) = cart(s).spherical();
        let marginal: f64 = (0..m)
            .map(|k| {
                let pa = 2.0 * PI * k as f64 / m as f64;
                wigner_evolved(&init, &aa(ia, pa, ib, pa - phi), tau(t)).unwrap()
            })
            .sum::<f64>()
            * 2.0
            * PI
            / m as f64;
        let direct = wigner_poincare(&init, &cart(s), tau(t)).unwrap();
        assert!(rel(direct, marginal) < 1e-10, "{direct} vs {marginal}");
    }
}

fn spherical(i: f64, theta: f64, phi: f64) -> PhasePoint {
    PhasePoint::PoincareSpherical {
        intensity: i,
        theta,
        phi,
        global_phase: 0.0,
    }
}

#[test]
fn dephased_wigner_becomes_a_ring() {
    let init = TwoModeCoherentInit::circular(1e4).unwrap();
    let cfg = KerrConfig::dephased(1.0, 1.0).unwrap();
    let t = 400.0;
    let values: Vec<f64> = [-3.0, -1.0, 0.0, 0.5, 2.0, PI]
        .iter()
        .map(|&phi| wigner_dephased(&init, &spherical(1e4, 1.5, phi), t, &cfg).unwrap())
        .collect();
    for v in &values {
        assert!(rel(*v, values[0]) < 1e-12);
    }
}

#[test]
fn dephasing_conserves_the_phase_marginal() {
    let i0 = 1e4;
    let init = TwoModeCoherentInit::circular(i0).unwrap();
    let m = 1024;
    let t = 2e-4;
    let marginal = |gamma: f64| -> f64 {
        let cfg = KerrConfig::dephased(1.0, gamma).unwrap();
        (0..m)
            .map(|k| {
                let phi = -PI + 2.0 * PI * k as f64 / m as f64;
                wigner_dephased(
                    &init,
                    &spherical(i0 + 30.0, FRAC_PI_2 + 0.004, phi),
                    t,
                    &cfg,
                )
                .unwrap()
            })
            .sum::<f64>()
            / m as f64
    };
    let reference = marginal(0.01);
    for gamma in [0.1, 1.0, 10.0, 1e3] {
        assert!(rel(marginal(gamma), reference) < 1e-10);
    }
}

#[test]
fn dephased_wigner_starts_at_the_coherent_state() {
    let i0 = 1e4;
    let init = TwoModeCoherentInit::circular(i0).unwrap();
    let cfg = KerrConfig::dephased(1.0, 0.5).unwrap();
    let s = i0.sqrt();
    for &(dx, dy, dz) in &[
        (0.0, 0.0, 0.0),
        (s, 0.0, 0.0),
        (0.0, s, 0.0),
        (0.0, 0.0, s),
        (s, -s, s),
    ] {
        let p = cart([dx, i0 + dy, dz]);
        let dephased = wigner_dephased(&init, &p, 0.0, &cfg).unwrap();
        let unitary = wigner_poincare(&init, &p, tau(0.0)).unwrap();
        assert!(rel(dephased, unitary) < 1e-2, "{dephased} vs {unitary}");
    }
}

#[test]
fn dephased_wigner_matches_the_exact_series() {
    let i0 = 1e4;
    let init = TwoModeCoherentInit::circular(i0).unwrap();
    let s = i0.sqrt();
    for gamma in [0.05, 0.5, 5.0] {
        let cfg = KerrConfig::dephased(1.0, gamma).unwrap();
        for t in [0.0, 2e-5, 1e-4] {
            for &(dx, dy, dz) in &[(0.0, 0.0, 0.0), (s, 0.0, 0.5 * s), (-s, 0.5 * s, -s)] {
                let p = cart([dx, i0 + dy, dz]);
                let closed = wigner_dephased(&init, &p, t, &cfg).unwrap();
                let series = wigner_dephased_series(&init, &p, t, &cfg).unwrap();
                assert!(rel(closed, series) < 1e-2, "{closed} vs {series}");
            }
        }
    }
}

#[test]
fn dephased_series_without_dephasing_is_the_lossless_density() {
    let init = TwoModeCoherentInit::new(300.0, 200.0, 0.3, 1.0).unwrap();
    let s0 = init.stokes0();
    let cfg = KerrConfig::unitary(2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let s = [
            s0[0] + rng.gen_range(-30.0..30.0),
            s0[1] + rng.gen_range(-30.0..30.0),
            s0[2] + rng.gen_range(-30.0..30.0),
        ];
        let t = rng.gen_range(0.0..1e-3);
        let series = wigner_dephased_series(&init, &cart(s), t, &cfg).unwrap();
        let lossless = wigner_poincare(&init, &cart(s), Tau::from_time(2.0, t).unwrap()).unwrap();
        assert!(rel(series, lossless) < 1e-9, "{series} vs {lossless}");
    }
}

/// Largest relative gap between the dephased closed form and the lossless
/// density on a 3x3x3 grid of points one shot-noise unit apart, carried
/// along the flow.
fn lossless_gap(i0: f64, tau_value: f64, diffusion: f64) -> f64 {
    let init = TwoModeCoherentInit::circular(i0).unwrap();
    let chi = 1.0;
    let t = 2.0 * tau_value / chi;
    let cfg = KerrConfig::dephased(chi, 4.0 * diffusion / t).unwrap();
    let tt = Tau::from_time(chi, t).unwrap();
    let s = i0.sqrt();
    let mut worst: f64 = 0.0;
    for dx in [-1.0, 0.0, 1.0] {
        for dy in [-1.0, 0.0, 1.0] {
            for dz in [-1.0, 0.0, 1.0] {
                let (i, theta, phi) = cart([dx * s, i0 + dy * s, dz * s]).spherical();
                let p = spherical(i, theta, phi + chi * t * i * theta.cos());
                let dephased = wigner_dephased(&init, &p, t, &cfg).unwrap();
                let lossless = wigner_poincare(&init, &p, tt).unwrap();
                worst = worst.max(rel(dephased, lossless));
            }
        }
    }
    worst
}

#[test]
fn dephased_wigner_approaches_lossless_limit() {
    // The coherent state's own phase width is about 1 / (2 I_0), so the
    // diffusion must be small against that for the limit to show.
    assert!(lossless_gap(400.0, 1e-4, 1e-6) < 1e-3);
    let gaps: Vec<f64> = [1e-8, 1e-9, 1e-10, 1e-11]
        .iter()
        .map(|&d| lossless_gap(1e6, 2e-7, d))
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[3] < 1e-3, "{gaps:?}");
}

#[test]
fn dephased_wigner_rejects_bad_input() {
    let init = TwoModeCoherentInit::circular(100.0).unwrap();
    let cfg = KerrConfig::dephased(1.0, 1.0).unwrap();
    assert!(wigner_dephased(&init, &spherical(100.0, 0.0, 0.0), 1.0, &cfg).is_err());
    assert!(wigner_dephased(&init, &spherical(100.0, PI - 1e-7, 0.0), 1.0, &cfg).is_err());
    let lossless = KerrConfig::unitary(1.0).unwrap();
    assert!(wigner_dephased(&init, &spherical(100.0, 1.0, 0.0), 1.0, &lossless).is_err());
    assert!(wigner_dephased(&init, &spherical(100.0, 1.0, 0.0), -1.0, &cfg).is_err());
}

proptest! {
    #[test]
    fn charts_round_trip(
        ia in 1e-2_f64..1e3,
        ib in 1e-2_f64..1e3,
        pa in -PI..PI,
        pb in -PI..PI,
    ) {
        let p = aa(ia, pa, ib, pb);
        let sph = convert_chart(&p, Chart::PoincareSpherical).unwrap();
        let cart = convert_chart(&sph, Chart::PoincareCartesian).unwrap();
        let back = convert_chart(&cart, Chart::ActionAngle).unwrap();
        let (ia2, pa2, ib2, pb2) = back.action_angle();
        let scale = ia + ib;
        prop_assert!((ia2 - ia).abs() <= 1e-12 * scale);
        prop_assert!((ib2 - ib).abs() <= 1e-12 * scale);
        prop_assert!(wrap_angle(pa2 - pa).abs() <= 1e-12);
        let tol = 1e-12 * (scale / ia.min(ib)).sqrt();
        prop_assert!(wrap_angle(pb2 - pb).abs() <= tol);
    }
}
