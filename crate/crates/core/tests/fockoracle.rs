use std::f64::consts::PI;

use kerrqc::fockoracle::{
    coherent_fock, minimal_cutoff, FockState, Mode, StokesAxis, BOUNDARY_WARNING, MAX_NORM_LEAK,
};
use kerrqc::phasespace::{Tau, TwoModeCoherentInit};
use kerrqc::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tau(t: f64) -> Tau {
    Tau::new(t).unwrap()
}

fn state(i0a: f64, i0b: f64, phi0a: f64, phi0b: f64, extra: usize) -> FockState {
    let init = TwoModeCoherentInit::new(i0a, i0b, phi0a, phi0b).unwrap();
    coherent_fock(&init, minimal_cutoff(i0a.max(i0b)) + extra).unwrap()
}

/// Poisson probability `e^{-l} l^n / n!`.
fn poisson(l: f64, n: usize) -> f64 {
    let ln_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    (-l + n as f64 * l.ln() - ln_fact).exp()
}

/// `<a^dag b>` at `tau` for the product coherent state, from the coherent-state
/// expectation `<alpha| e^{i s n} |alpha> = exp(|alpha|^2 (e^{is} - 1))`.
fn exact_coherence(init: &TwoModeCoherentInit, t: f64) -> Complex64 {
    let i = Complex64::i();
    let phase_a = ((-2.0 * i * t).exp() - 1.0) * init.i0a();
    let phase_b = ((2.0 * i * t).exp() - 1.0) * init.i0b();
    init.alpha0().conj() * init.beta0() * (phase_a + phase_b).exp()
}

#[test]
fn vacuum_is_a_single_basis_state() {
    let s = state(0.0, 0.0, 0.0, 0.0, 0);
    assert_eq!(s.cutoff(), 8);
    assert_eq!(s.amplitude(0, 0), Complex64::new(1.0, 0.0));
    assert_eq!(s.norm_sqr(), 1.0);
    assert_eq!(s.norm_leak(), 0.0);
    for na in 0..=8 {
        for nb in 0..=8 {
            if (na, nb) != (0, 0) {
                assert_eq!(s.amplitude(na, nb), Complex64::new(0.0, 0.0));
            }
        }
    }
}

#[test]
fn coherent_amplitudes_follow_poisson_weights() {
    let s = state(1.0, 0.0, 0.4, 0.0, 0);
    let c00 = s.amplitude(0, 0).norm_sqr();
    assert!((s.amplitude(1, 0).norm_sqr() / c00 - 1.0).abs() < 1e-14);
    let s = state(6.0, 2.5, 0.3, -1.2, 0);
    for na in [0, 1, 5, 12] {
        for nb in [0, 3, 7] {
            let want = poisson(6.0, na) * poisson(2.5, nb);
            let got = s.amplitude(na, nb).norm_sqr();
            assert!((got - want).abs() < 1e-14 * want.max(1e-3), "({na}, {nb})");
        }
    }
    let phase = s.amplitude(2, 1).arg();
    let want = kerrqc::phasespace::wrap_angle(2.0 * 0.3 - 1.2);
    assert!((phase - want).abs() < 1e-12);
}

#[test]
fn truncation_leak_is_the_poisson_tail() {
    let s = state(25.0, 0.0, 0.0, 0.0, 0);
    assert_eq!(s.cutoff(), 85);
    let tail: f64 = (86..400).map(|n| poisson(25.0, n)).sum();
    assert!(s.norm_leak() < MAX_NORM_LEAK);
    assert!((s.norm_leak() - tail).abs() < 1e-12 * tail);
    assert!((1.0 - s.norm_sqr() - tail).abs() < 1e-13);
}

#[test]
fn small_cutoff_is_rejected() {
    let init = TwoModeCoherentInit::new(25.0, 0.0, 0.0, 0.0).unwrap();
    match coherent_fock(&init, 84) {
        Err(Error::CutoffTooSmall {
            cutoff, required, ..
        }) => {
            assert_eq!((cutoff, required), (84, 85));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn evolution_is_unitary_with_exact_revival() {
    let s = state(9.0, 16.0, 0.3, -1.1, 0);
    assert_eq!(s.evolve(tau(0.0)), s);
    let revived = s.evolve(tau(PI));
    let half = s.evolve(tau(0.5 * PI));
    for (na, nb) in [(0, 0), (3, 5), (7, 2), (11, 20)] {
        assert!((revived.amplitude(na, nb) - s.amplitude(na, nb)).norm() < 1e-12);
        let sign = if (na * nb) % 2 == 0 { 1.0 } else { -1.0 };
        assert!((half.amplitude(na, nb) - sign * s.amplitude(na, nb)).norm() < 1e-12);
    }
    let n0 = s.norm_sqr();
    let mut chained = s.clone();
    for _ in 0..100 {
        chained = chained.evolve(tau(0.0137));
        assert!((chained.norm_sqr() - n0).abs() < 1e-13);
    }
    let direct = s.evolve(tau(1.37));
    let gap: f64 = chained
        .amplitudes()
        .iter()
        .zip(direct.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(gap < 1e-12);
}

#[test]
fn stokes_means_match_exact_coherence() {
    let init = TwoModeCoherentInit::new(9.0, 16.0, 0.3, -1.1).unwrap();
    let s = coherent_fock(&init, minimal_cutoff(16.0) + 10).unwrap();
    for t in [0.0, 1e-3, 0.05, 0.3, 1.0, 2.5] {
        let e = s.evolve(tau(t));
        let c = exact_coherence(&init, t);
        let sx = e.stokes_mean(StokesAxis::X).value;
        let sy = e.stokes_mean(StokesAxis::Y).value;
        assert!(
            (sx - 2.0 * c.re).abs() < 1e-9,
            "tau={t}: {sx} vs {}",
            2.0 * c.re
        );
        assert!(
            (sy - 2.0 * c.im).abs() < 1e-9,
            "tau={t}: {sy} vs {}",
            2.0 * c.im
        );
        assert!((e.stokes_mean(StokesAxis::Z).value + 7.0).abs() < 1e-9);
        assert!((e.stokes_mean(StokesAxis::N).value - 25.0).abs() < 1e-12 * 25.0);
        assert!((e.stokes_var(StokesAxis::Z).value - 25.0).abs() < 1e-9);
        assert!((e.stokes_var(StokesAxis::N).value - 25.0).abs() < 1e-9);
    }
}

#[test]
fn circular_state_moments() {
    let i0 = 25.0;
    let init = TwoModeCoherentInit::circular(i0).unwrap();
    let s = coherent_fock(&init, minimal_cutoff(i0) + 10).unwrap();
    assert!((s.stokes_mean(StokesAxis::Y).value + i0).abs() < 1e-10);
    assert!(s.stokes_mean(StokesAxis::X).value.abs() < 1e-10);
    assert!(s.stokes_mean(StokesAxis::Z).value.abs() < 1e-10);
    for theta in [0.0, 0.4, 1.3] {
        assert!((s.stokes_var(StokesAxis::Perp(theta)).value - i0).abs() < 1e-9);
    }
    for t in [1e-3, 0.1] {
        let sy = s.evolve(tau(t)).stokes_mean(StokesAxis::Y).value;
        let want = -i0 * (-2.0 * i0 * t.sin().powi(2)).exp();
        assert!((sy - want).abs() < 1e-10);
    }
}

#[test]
fn stokes_operators_satisfy_su2_commutator() {
    let s = state(4.0, 4.0, 0.0, 0.0, 0);
    let n = s.cutoff();
    let d = n + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let mut psi = vec![Complex64::new(0.0, 0.0); d * d];
        for na in 0..n - 1 {
            for nb in 0..n - 1 {
                psi[na * d + nb] =
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let xy = s.apply(StokesAxis::X, &s.apply(StokesAxis::Y, &psi));
        let yx = s.apply(StokesAxis::Y, &s.apply(StokesAxis::X, &psi));
        let z = s.apply(StokesAxis::Z, &psi);
        let residual = xy
            .iter()
            .zip(&yx)
            .zip(&z)
            .map(|((a, b), c)| (a - b - 2.0 * Complex64::i() * c).norm())
            .fold(0.0, f64::max);
        assert!(residual < 1e-10, "{residual}");
    }
}

#[test]
fn reduced_states_are_consistent() {
    let s = state(9.0, 16.0, 0.3, -1.1, 0);
    assert!((s.reduced_purity(Mode::A).value - 1.0).abs() < 1e-12);
    for t in [0.01, 0.2, 1.0] {
        let e = s.evolve(tau(t));
        let rho = e.reduced_density(Mode::A);
        let trace: Complex64 = rho.diagonal().iter().sum();
        assert!((trace - 1.0).norm() < 1e-13);
        assert!((&rho - rho.adjoint()).iter().all(|c| c.norm() < 1e-14));
        let pa = e.reduced_purity(Mode::A).value;
        let pb = e.reduced_purity(Mode::B).value;
        assert!((pa - pb).abs() < 1e-10, "tau={t}");
        assert!(pa > 0.0 && pa < 1.0);
    }
}

#[test]
fn boundary_weight_is_flagged() {
    let tight = state(1.0, 1.0, 0.0, 0.0, 0);
    assert_eq!(tight.cutoff(), 13);
    let est = tight.stokes_mean(StokesAxis::N);
    assert!(est.boundary_occupancy > BOUNDARY_WARNING);
    assert!(est.truncation_warning);
    let roomy = state(1.0, 1.0, 0.0, 0.0, 10);
    assert!(!roomy.stokes_mean(StokesAxis::N).truncation_warning);
}
