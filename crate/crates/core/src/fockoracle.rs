//! Truncated two-mode Fock-space reference for the exact quantum dynamics.
//!
//! The evolution operator `exp(-2 i tau n_a n_b)` is diagonal in the number
//! basis, so a product of coherent states evolves by a phase per basis
//! state. Intended for moderate intensities (tens of photons).

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::correlations::{PurityMethod, PurityResult};
use crate::error::{Error, Result};
use crate::phasespace::{Tau, TwoModeCoherentInit};

/// Largest acceptable probability outside the truncated space.
pub const MAX_NORM_LEAK: f64 = 1e-10;

/// Occupancy of the outermost number states above which results are flagged.
pub const BOUNDARY_WARNING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    B,
}

/// Stokes operators built from the ladder operators:
/// `S_x = a^dag b + a b^dag`, `S_y = i (a b^dag - a^dag b)`,
/// `S_z = a^dag a - b^dag b`, `N = a^dag a + b^dag b`, and the dark-plane
/// combination `S_perp(theta) = S_z cos theta + S_x sin theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StokesAxis {
    X,
    Y,
    Z,
    N,
    Perp(f64),
}

/// An expectation value together with how much weight sits on the
/// truncation boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesEstimate {
    pub value: f64,
    pub boundary_occupancy: f64,
    pub truncation_warning: bool,
}

/// Two-mode state vector on `{0..=cutoff}^2`, indexed `n_a * (cutoff + 1) + n_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    cutoff: usize,
    amplitudes: Vec<Complex64>,
    norm_leak: f64,
}

/// Per-mode cutoff `ceil(I + 12 sqrt(I))`, at least 8.
pub fn minimal_cutoff(intensity: f64) -> usize {
    ((intensity + 12.0 * intensity.sqrt()).ceil() as usize).max(8)
}

/// Poisson tail `P(n > cutoff)` for mean `lambda`.
pub fn poisson_tail(lambda: f64, cutoff: usize) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let first = cutoff + 1;
    let mut term = (-lambda + first as f64 * lambda.ln() - ln_factorial(first)).exp();
    let mut sum = 0.0;
    let mut n = first as f64;
    while term > 1e-300 {
        sum += term;
        n += 1.0;
        term *= lambda / n;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn coherent_amplitudes(amplitude: Complex64, cutoff: usize) -> Vec<Complex64> {
    let lambda = amplitude.norm_sqr();
    if lambda == 0.0 {
        let mut v = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        v[0] = Complex64::new(1.0, 0.0);
        return v;
    }
    let (r, phase) = amplitude.to_polar();
    let ln_r = r.ln();
    let mut ln_fact = 0.0;
    (0..=cutoff)
        .map(|n| {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            let magnitude = (-0.5 * lambda + n as f64 * ln_r - 0.5 * ln_fact).exp();
            Complex64::from_polar(magnitude, n as f64 * phase)
        })
        .collect()
}

/// Product coherent state `|alpha_0> |beta_0>` truncated at `cutoff` photons
/// per mode.
pub fn coherent_fock(init: &TwoModeCoherentInit, cutoff: usize) -> Result<FockState> {
    let largest = init.i0a().max(init.i0b());
    let required = minimal_cutoff(largest);
    let tail_a = poisson_tail(init.i0a(), cutoff);
    let tail_b = poisson_tail(init.i0b(), cutoff);
    let norm_leak = tail_a + tail_b;
    if cutoff < required || norm_leak >= MAX_NORM_LEAK {
        return Err(Error::CutoffTooSmall {
            cutoff,
            intensity: largest,
            required,
            tail: norm_leak,
        });
    }
    let ca = coherent_amplitudes(init.alpha0(), cutoff);
    let cb = coherent_amplitudes(init.beta0(), cutoff);
    let amplitudes = ca
        .iter()
        .flat_map(|a| cb.iter().map(move |b| a * b))
        .collect();
    Ok(FockState {
        cutoff,
        amplitudes,
        norm_leak,
    })
}

impl FockState {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Probability of the untruncated state lying outside the basis.
    pub fn norm_leak(&self) -> f64 {
        self.norm_leak
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    fn dim(&self) -> usize {
        self.cutoff + 1
    }

    fn index(&self, na: usize, nb: usize) -> usize {
        na * self.dim() + nb
    }

    pub fn amplitude(&self, na: usize, nb: usize) -> Complex64 {
        self.amplitudes[self.index(na, nb)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Applies `exp(-2 i tau n_a n_b)`. The phase is reduced in units of
    /// whole turns so that `tau = pi` is an exact revival.
    pub fn evolve(&self, tau: Tau) -> FockState {
        let turns_per_quantum = tau.value() / PI;
        let d = self.dim();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let k = ((idx / d) * (idx % d)) as f64;
                let turns = (turns_per_quantum * k).fract();
                c * Complex64::from_polar(1.0, -2.0 * PI * turns)
            })
            .collect();
        FockState {
            cutoff: self.cutoff,
            amplitudes,
            norm_leak: self.norm_leak,
        }
    }

    /// Reduced density matrix of one mode, normalised to unit trace.
    pub fn reduced_density(&self, mode: Mode) -> DMatrix<Complex64> {
        let d = self.dim();
        let norm = self.norm_sqr();
        DMatrix::from_fn(d, d, |m, n| {
            let s: Complex64 = (0..d)
                .map(|k| match mode {
                    Mode::A => self.amplitude(m, k) * self.amplitude(n, k).conj(),
                    Mode::B => self.amplitude(k, m) * self.amplitude(k, n).conj(),
                })
                .sum();
            s / norm
        })
    }

    /// `Tr rho^2` of the reduced state of `mode`.
    pub fn reduced_purity(&self, mode: Mode) -> PurityResult {
        let rho = self.reduced_density(mode);
        PurityResult {
            value: rho.iter().map(|c| c.norm_sqr()).sum(),
            method: PurityMethod::FockOracle,
            window: Some(self.cutoff),
            error_estimate: Some(self.norm_leak),
        }
    }

    /// Applies a Stokes operator, dropping components that would leave the
    /// truncated space.
    pub fn apply(&self, axis: StokesAxis, psi: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        let n_max = self.cutoff;
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        let i = Complex64::i();
        let (cz, cx) = match axis {
            StokesAxis::Perp(theta) => (theta.cos(), theta.sin()),
            _ => (0.0, 0.0),
        };
        for na in 0..d {
            for nb in 0..d {
                let c = psi[na * d + nb];
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let (fa, fb) = (na as f64, nb as f64);
                // a^dag b |na, nb> and a b^dag |na, nb>
                let raise_a = (nb > 0 && na < n_max)
                    .then(|| ((na + 1) * d + nb - 1, ((fa + 1.0) * fb).sqrt()));
                let lower_a = (na > 0 && nb < n_max)
                    .then(|| ((na - 1) * d + nb + 1, (fa * (fb + 1.0)).sqrt()));
                let diag = na * d + nb;
                match axis {
                    StokesAxis::X => {
                        if let Some((j, f)) = raise_a {
                            out[j] += c * f;
                        }
                        if let Some((j, f)) = lower_a {
                            out[j] += c * f;
                        }
                    }
                    StokesAxis::Y => {
                        if let Some((j, f)) = lower_a {
                            out[j] += i * c * f;
                        }
                        if let Some((j, f)) = raise_a {
                            out[j] -= i * c * f;
                        }
                    }
                    StokesAxis::Z => out[diag] += c * (fa - fb),
                    StokesAxis::N => out[diag] += c * (fa + fb),
                    StokesAxis::Perp(_) => {
                        out[diag] += c * (cz * (fa - fb));
                        if let Some((j, f)) = raise_a {
                            out[j] += c * (cx * f);
                        }
                        if let Some((j, f)) = lower_a {
                            out[j] += c * (cx * f);
                        }
                    }
                }
            }
        }
        out
    }

    /// Probability on states with `n_a = cutoff` or `n_b = cutoff`.
    pub fn boundary_occupancy(&self) -> f64 {
        let d = self.dim();
        let edge: f64 = (0..d)
            .flat_map(|na| (0..d).map(move |nb| (na, nb)))
            .filter(|&(na, nb)| na == self.cutoff || nb == self.cutoff)
            .map(|(na, nb)| self.amplitude(na, nb).norm_sqr())
            .sum();
        edge / self.norm_sqr()
    }

    fn estimate(&self, value: f64) -> StokesEstimate {
        let boundary_occupancy = self.boundary_occupancy();
        StokesEstimate {
            value,
            boundary_occupancy,
            truncation_warning: boundary_occupancy > BOUNDARY_WARNING,
        }
    }

    fn inner(&self, lhs: &[Complex64], rhs: &[Complex64]) -> Complex64 {
        lhs.iter().zip(rhs).map(|(l, r)| l.conj() * r).sum()
    }

    /// `<S>` for the given axis.
    pub fn stokes_mean(&self, axis: StokesAxis) -> StokesEstimate {
        let s_psi = self.apply(axis, &self.amplitudes);
        let value = self.inner(&self.amplitudes, &s_psi).re / self.norm_sqr();
        self.estimate(value)
    }

    /// `<S^2> - <S>^2` for the given axis.
    pub fn stokes_var(&self, axis: StokesAxis) -> StokesEstimate {
        let s_psi = self.apply(axis, &self.amplitudes);
        let ss_psi = self.apply(axis, &s_psi);
        let norm = self.norm_sqr();
        let mean = self.inner(&self.amplitudes, &s_psi).re / norm;
        let second = self.inner(&self.amplitudes, &ss_psi).re / norm;
        self.estimate(second - mean * mean)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_tail_matches_direct_sum() {
        let lambda: f64 = 4.0;
        let direct: f64 = (11..200)
            .map(|n| (-lambda + n as f64 * lambda.ln() - ln_factorial(n)).exp())
            .sum();
        assert!((poisson_tail(lambda, 10) - direct).abs() < 1e-15);
    }

    #[test]
    fn cutoff_rule_is_enforced() {
        let init = TwoModeCoherentInit::new(25.0, 1.0, 0.0, 0.0).unwrap();
        let err = coherent_fock(&init, 40).unwrap_err();
        assert!(matches!(err, Error::CutoffTooSmall { required: 85, .. }));
        assert!(coherent_fock(&init, 85).is_ok());
    }
}
