//! Stokes-parameter moments of initially circularly polarised light and
//! polarization squeezing in the dark plane.
//!
//! Stokes vectors are reported in the Poincaré chart of
//! [`crate::phasespace`], where the circular state points along `+S_y`. The
//! ladder-operator `S_y = i (a b^dag - a^dag b)` is the mirror image of that
//! axis, so its expectation value on the same state is `-|<S_y>|`; the
//! dark-plane operators `S_perp(theta) = S_z cos theta + S_x sin theta` are
//! unaffected.

use std::f64::consts::FRAC_PI_2;

use crate::error::{non_negative, Result};
use crate::phasespace::{KerrConfig, Tau};

/// Which closed form to use for the dark-plane variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum VarianceForm {
    /// Second moments of the transported Wigner function with symmetric
    /// ordering undone:
    /// `I0 [1 + (I0/2) sin^2 t] - sin^2 t (I0^2/2) (1+4 tau^2)^-3 E8 e^{-g}
    ///  - sin 2t 2 I0 tau (1+tau^2)^-3 (1 + I0/(1+tau^2)) E2 e^{-g/4}`,
    /// with `E2 = exp(-2 I0 tau^2/(1+tau^2))`, `E8 = exp(-8 I0 tau^2/(1+4 tau^2))`
    /// and `g = gamma t`. Matches the Fock-space oracle.
    #[default]
    Derived,
    /// `sin^2(t/2)` in the static term and a prefactor `2 I0^2` (lossless)
    /// or `I0^2` (dephased) on the decaying term. Goes negative away from
    /// `t = 0`.
    HalfAngle,
    /// As [`VarianceForm::HalfAngle`] with `sin^2 t` in the static term.
    FullAngle,
}

impl VarianceForm {
    pub fn label(self) -> &'static str {
        match self {
            Self::Derived => "derived",
            Self::HalfAngle => "half-angle",
            Self::FullAngle => "full-angle",
        }
    }
}

/// First and second moments of the Stokes operators for circular initial
/// polarization of total intensity `i0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesMoments {
    i0: f64,
    tau: Tau,
    gamma_over_chi: f64,
    form: VarianceForm,
}

impl StokesMoments {
    pub fn new(i0: f64, tau: Tau, gamma_over_chi: f64) -> Result<Self> {
        Ok(Self {
            i0: non_negative("I_0", i0)?,
            tau,
            gamma_over_chi: non_negative("gamma / chi", gamma_over_chi)?,
            form: VarianceForm::default(),
        })
    }

    pub fn with_form(self, form: VarianceForm) -> Self {
        Self { form, ..self }
    }

    pub fn tau(&self) -> Tau {
        self.tau
    }

    pub fn gamma_over_chi(&self) -> f64 {
        self.gamma_over_chi
    }

    pub fn form(&self) -> VarianceForm {
        self.form
    }

    /// `gamma t`, using `t = 2 tau / chi`.
    fn gamma_t(&self) -> f64 {
        2.0 * self.gamma_over_chi * self.tau.value()
    }

    /// Mean photon number, conserved by the evolution.
    pub fn mean_n(&self) -> f64 {
        self.i0
    }

    /// `<S> = (0, I0 (1+tau^2)^-2 exp(-2 I0 tau^2/(1+tau^2) - gamma t/4), 0)`.
    pub fn mean_s(&self) -> [f64; 3] {
        let t2 = self.tau.value().powi(2);
        let d = 1.0 + t2;
        let sy = self.i0 / (d * d) * (-2.0 * self.i0 * t2 / d - 0.25 * self.gamma_t()).exp();
        [0.0, sy, 0.0]
    }

    /// Variance of `S_perp(theta) = S_z cos theta + S_x sin theta`.
    pub fn var_perp(&self, theta: f64) -> f64 {
        let i0 = self.i0;
        let tau = self.tau.value();
        let t2 = tau * tau;
        let g = self.gamma_t();
        let d1 = 1.0 + t2;
        let d4 = 1.0 + 4.0 * t2;
        let e2 = (-2.0 * i0 * t2 / d1 - 0.25 * g).exp();
        let sin2 = theta.sin().powi(2);
        let cross = (2.0 * theta).sin() * 2.0 * i0 * tau / d1.powi(3) * (1.0 + i0 / d1) * e2;
        // ln of E8 (1+4 tau^2)^-3 e^{-g}
        let ln_decay = -8.0 * i0 * t2 / d4 - g - 3.0 * (4.0 * t2).ln_1p();
        let decay_coeff = if self.gamma_over_chi > 0.0 {
            i0 * i0
        } else {
            2.0 * i0 * i0
        };
        match self.form {
            VarianceForm::Derived => i0 - 0.5 * i0 * i0 * sin2 * ln_decay.exp_m1() - cross,
            VarianceForm::HalfAngle => {
                let half = (0.5 * theta).sin().powi(2);
                i0 * (1.0 + 0.5 * i0 * half) - sin2 * decay_coeff * ln_decay.exp() - cross
            }
            VarianceForm::FullAngle => {
                i0 * (1.0 + 0.5 * i0 * sin2) - sin2 * decay_coeff * ln_decay.exp() - cross
            }
        }
    }
}

/// Mean Stokes vector for lossless evolution.
pub fn stokes_mean(i0: f64, tau: Tau) -> Result<[f64; 3]> {
    Ok(StokesMoments::new(i0, tau, 0.0)?.mean_s())
}

/// Dark-plane variance for lossless evolution, [`VarianceForm::Derived`].
pub fn stokes_var_perp(i0: f64, theta: f64, tau: Tau) -> Result<f64> {
    Ok(StokesMoments::new(i0, tau, 0.0)?.var_perp(theta))
}

/// Approximate squeezing angle `(1/2) arccot(I0 tau + gamma / 4 chi)`, with
/// arccot taking values in `(0, pi)`.
pub fn optimal_angle(i0: f64, tau: Tau, gamma_over_chi: f64) -> Result<f64> {
    non_negative("I_0", i0)?;
    non_negative("gamma / chi", gamma_over_chi)?;
    let x = i0 * tau.value() + 0.25 * gamma_over_chi;
    Ok(0.5 * 1.0_f64.atan2(x))
}

/// Closed-form optimal squeezing
/// `2 I0^2 tau [x - sqrt(1 + x^2)]` with `x = I0 tau + gamma / 4 chi`.
pub fn optimal_amount_closed_form(i0: f64, tau: Tau, gamma_over_chi: f64) -> f64 {
    let x = i0 * tau.value() + 0.25 * gamma_over_chi;
    2.0 * i0 * i0 * tau.value() * (x - x.hypot(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingReport {
    pub i0: f64,
    pub tau: Tau,
    pub gamma_over_chi: f64,
    pub form: VarianceForm,
    pub mean_sy: f64,
    pub theta_sq: f64,
    pub var_sq: f64,
    pub var_antisq: f64,
    /// `var_sq < <N> < var_antisq`.
    pub squeezing_certified: bool,
    /// `var_sq - |<S_y>|` from the moments.
    pub optimal_amount: f64,
    /// The same quantity from the short-time closed form.
    pub optimal_amount_closed_form: f64,
    /// `var_sq` evaluated with [`VarianceForm::HalfAngle`].
    pub var_sq_half_angle: f64,
}

/// Squeezing diagnostics at physical time `t` for circular light of
/// intensity `i0`, with the dark-plane variance in the given form.
pub fn squeezing_report_with(
    i0: f64,
    cfg: &KerrConfig,
    t: f64,
    form: VarianceForm,
) -> Result<SqueezingReport> {
    let tau = Tau::from_time(cfg.chi(), t)?;
    let gamma_over_chi = cfg.gamma() / cfg.chi();
    let moments = StokesMoments::new(i0, tau, gamma_over_chi)?.with_form(form);
    let theta_sq = optimal_angle(i0, tau, gamma_over_chi)?;
    let mean_sy = moments.mean_s()[1];
    let var_sq = moments.var_perp(theta_sq);
    let var_antisq = moments.var_perp(theta_sq + FRAC_PI_2);
    let n = moments.mean_n();
    Ok(SqueezingReport {
        i0,
        tau,
        gamma_over_chi,
        form,
        mean_sy,
        theta_sq,
        var_sq,
        var_antisq,
        squeezing_certified: var_sq < n && n < var_antisq,
        optimal_amount: var_sq - mean_sy.abs(),
        optimal_amount_closed_form: optimal_amount_closed_form(i0, tau, gamma_over_chi),
        var_sq_half_angle: moments
            .with_form(VarianceForm::HalfAngle)
            .var_perp(theta_sq),
    })
}

/// [`squeezing_report_with`] using [`VarianceForm::Derived`].
pub fn squeezing_report(i0: f64, cfg: &KerrConfig, t: f64) -> Result<SqueezingReport> {
    squeezing_report_with(i0, cfg, t, VarianceForm::Derived)
}
