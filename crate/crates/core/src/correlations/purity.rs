//! Purity `Tr rho_a^2` of the reduced single-mode state.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phasespace::{Tau, TwoModeCoherentInit};
use crate::quadrature::integrate_adaptive;
use crate::specfun::bessel_i_scaled_table;
use crate::sum::CompensatedSum;

/// Smallest intensity for which the integral replacement of the sum is used.
pub const QC_INTEGRAL_MIN_INTENSITY: f64 = 1e3;

/// How a purity value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PurityMethod {
    /// Bessel series from the quasiclassical Wigner function.
    QuasiclassicalSeries,
    /// Integral replacement of the quasiclassical series.
    QuasiclassicalIntegral,
    /// `1 / sqrt(1 + 16 I_a I_b tau^2)`.
    Asymptotic,
    /// Exact quantum purity.
    ExactSeries,
    /// Partial trace of a truncated Fock-space state.
    FockOracle,
}

impl PurityMethod {
    pub fn label(self) -> &'static str {
        match self {
            Self::QuasiclassicalSeries => "qc-series",
            Self::QuasiclassicalIntegral => "qc-integral",
            Self::Asymptotic => "asymptotic",
            Self::ExactSeries => "exact-series",
            Self::FockOracle => "fock-oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityResult {
    pub value: f64,
    pub method: PurityMethod,
    /// Largest `|n|` kept in a Bessel series, if one was summed.
    pub window: Option<usize>,
    /// Quadrature error estimate, if an integral was evaluated.
    pub error_estimate: Option<f64>,
}

/// Terms kept in a series weighted by `e^{-z} I_n(z)`: the Gaussian envelope
/// `exp(-n^2 / 2z)` is below `e^{-33}` beyond `n^2 = 66 z`, and the extra
/// margin covers small `z` where the envelope is not yet Gaussian.
fn bessel_window(z: f64) -> usize {
    (66.0 * z).sqrt().ceil() as usize + 40
}

/// Sums `w_0 f(0) + 2 sum_{n >= 1} w_n f(n)`, smallest terms first.
fn symmetric_sum(weights: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let mut acc = CompensatedSum::default();
    for (n, &w) in weights.iter().enumerate().skip(1).rev() {
        acc.add(2.0 * w * f(n as f64));
    }
    acc.add(weights[0] * f(0.0));
    acc.value()
}

/// Quasiclassical purity series with the Bessel weights tabulated once, for
/// sweeps over many `tau`.
#[derive(Debug, Clone)]
pub struct QcPuritySeries {
    i0b: f64,
    weights: Vec<f64>,
}

impl QcPuritySeries {
    pub fn new(init: &TwoModeCoherentInit) -> Result<Self> {
        let z = 2.0 * init.i0a();
        Ok(Self {
            i0b: init.i0b(),
            weights: bessel_i_scaled_table(bessel_window(z), z)?,
        })
    }

    pub fn window(&self) -> usize {
        self.weights.len() - 1
    }

    /// `sum_n e^{-2I_a} I_n(2 I_a) exp(-4 I_b u_n) / (1 + tau^2 n^2)`, with
    /// `u_n = tau^2 n^2 / (1 + tau^2 n^2)`.
    pub fn eval(&self, tau: Tau) -> PurityResult {
        let t2 = tau.value() * tau.value();
        let i0b = self.i0b;
        let value = symmetric_sum(&self.weights, |n| {
            let d = 1.0 + t2 * n * n;
            (-4.0 * i0b * (t2 * n * n) / d).exp() / d
        });
        PurityResult {
            value,
            method: PurityMethod::QuasiclassicalSeries,
            window: Some(self.window()),
            error_estimate: None,
        }
    }
}

/// Quasiclassical purity from the Bessel series.
pub fn purity_qc_series(init: &TwoModeCoherentInit, tau: Tau) -> Result<PurityResult> {
    Ok(QcPuritySeries::new(init)?.eval(tau))
}

/// Quasiclassical purity with the sum replaced by an integral, valid for
/// `I_0a >= 1e3`.
pub fn purity_qc_integral(init: &TwoModeCoherentInit, tau: Tau) -> Result<PurityResult> {
    if init.i0a() < QC_INTEGRAL_MIN_INTENSITY {
        return Err(Error::Regime {
            what: "integral form of the purity",
            requirement: "I_0a >= 1e3",
            value: init.i0a(),
        });
    }
    // With x = 2 sqrt(I_a) y the Gaussian factor becomes exp(-y^2).
    let scale = 2.0 * init.i0a().sqrt();
    let t2 = tau.value() * tau.value();
    let i0b = init.i0b();
    let integrand = |y: f64| {
        let x = scale * y;
        let d = 1.0 + t2 * x * x;
        (-y * y - 4.0 * i0b * t2 * x * x / d).exp() / d
    };
    // The coupling factor confines the integrand to y below roughly
    // 1 / (2 sqrt(I_b) tau scale); geometric breakpoints from there keep the
    // peak from slipping between quadrature nodes.
    const UPPER: f64 = 9.0;
    let mut breaks = vec![0.0];
    if tau.value() > 0.0 {
        let mut y = 1.0 / (2.0 * (i0b.max(1.0)).sqrt() * tau.value() * scale);
        while y < UPPER {
            breaks.push(y);
            y *= 2.0;
        }
    }
    breaks.push(UPPER);
    let (mut value, mut error) = (0.0, 0.0);
    for w in breaks.windows(2) {
        let r = integrate_adaptive(integrand, w[0], w[1], 1e-15, 1e-12)?;
        value += r.value;
        error += r.error_estimate;
    }
    Ok(PurityResult {
        value: 2.0 * value / PI.sqrt(),
        method: PurityMethod::QuasiclassicalIntegral,
        window: None,
        error_estimate: Some(2.0 * error / PI.sqrt()),
    })
}

/// Short-time estimate `1 / sqrt(1 + 16 I_a I_b tau^2)`, meaningful while
/// `I_0b tau` stays below about 1.
pub fn purity_asymptotic(init: &TwoModeCoherentInit, tau: Tau) -> PurityResult {
    let t = tau.value();
    PurityResult {
        value: 1.0 / (1.0 + 16.0 * init.i0a() * init.i0b() * t * t).sqrt(),
        method: PurityMethod::Asymptotic,
        window: None,
        error_estimate: None,
    }
}

/// Exact quantum purity with the Bessel weights tabulated once.
///
/// The double series `sum_{m,n} I_m(2 I_a) I_n(2 I_b) e^{2 i m n tau}` is
/// summed over `m` in closed form by the generating function
/// `sum_m I_m(z) e^{i m x} = e^{z cos x}`, leaving
/// `sum_n e^{-2 I_b} I_n(2 I_b) exp(-4 I_a sin^2(n tau))`.
#[derive(Debug, Clone)]
pub struct ExactPurity {
    i0a: f64,
    weights: Vec<f64>,
}

impl ExactPurity {
    pub fn new(init: &TwoModeCoherentInit) -> Result<Self> {
        let z = 2.0 * init.i0b();
        Ok(Self {
            i0a: init.i0a(),
            weights: bessel_i_scaled_table(bessel_window(z), z)?,
        })
    }

    pub fn eval(&self, tau: Tau) -> PurityResult {
        let t = tau.value();
        let i0a = self.i0a;
        let value = symmetric_sum(&self.weights, |n| {
            let s = (n * t).sin();
            (-4.0 * i0a * s * s).exp()
        });
        PurityResult {
            value,
            method: PurityMethod::ExactSeries,
            window: Some(self.weights.len() - 1),
            error_estimate: None,
        }
    }
}

/// Exact quantum purity of either reduced state (they coincide).
pub fn purity_exact(init: &TwoModeCoherentInit, tau: Tau) -> Result<PurityResult> {
    Ok(ExactPurity::new(init)?.eval(tau))
}

/// The exact purity as the explicit double series, with compensated sums for
/// both the real and imaginary parts. The imaginary part vanishes
/// analytically. Cost is the product of the two Bessel windows, so this is
/// meant for moderate intensities.
pub fn purity_exact_double_series(init: &TwoModeCoherentInit, tau: Tau) -> Result<Complex64> {
    let za = 2.0 * init.i0a();
    let zb = 2.0 * init.i0b();
    let wa = bessel_i_scaled_table(bessel_window(za), za)?;
    let wb = bessel_i_scaled_table(bessel_window(zb), zb)?;
    let t = tau.value();
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    let signed = |w: &[f64]| -> Vec<(i64, f64)> {
        let n = w.len() as i64 - 1;
        (-n..=n)
            .map(|k| (k, w[k.unsigned_abs() as usize]))
            .collect()
    };
    let sa = signed(&wa);
    let sb = signed(&wb);
    for &(m, wm) in &sa {
        for &(n, wn) in &sb {
            let (s, c) = (2.0 * (m * n) as f64 * t).sin_cos();
            let w = wm * wn;
            re.add(w * c);
            im.add(w * s);
        }
    }
    Ok(Complex64::new(re.value(), im.value()))
}
