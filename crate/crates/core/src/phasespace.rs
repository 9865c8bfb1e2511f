//! Two-mode phase space: charts, the classical cross-Kerr flow and the
//! Wigner function transported along it.
//!
//! Conventions. Mode amplitudes are `alpha = sqrt(I_a) e^{i phi_a}` and
//! `beta = sqrt(I_b) e^{i phi_b}`. The Poincaré chart uses the total
//! intensity `I = I_a + I_b`, the polar angle `theta` with
//! `I_a = I cos^2(theta/2)`, the relative phase `phi = phi_a - phi_b` and the
//! Stokes vector `S = I (sin theta cos phi, sin theta sin phi, cos theta)`.
//! The global phase `phi_a` is carried along so that charts convert both
//! ways. At the poles (`I_a = 0` or `I_b = 0`) the relative phase is set to 0.
//!
//! The Wigner function is normalised to 1 over `d^2 alpha d^2 beta`; on the
//! Poincaré space the relevant measure is `d^3 S / (8 I)` after integrating
//! out the global phase.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{domain, finite, non_negative, Error, Result};
use crate::specfun::{bessel_i_scaled, ThetaKernel};

/// Distance from a pole below which dephased evaluation is refused.
pub const POLE_EXCLUSION: f64 = 1e-6;

/// Wraps an angle to `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Dimensionless interaction time `tau = chi t / 2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Tau(f64);

impl Tau {
    pub fn new(tau: f64) -> Result<Self> {
        non_negative("tau", tau).map(Self)
    }

    /// `tau = chi t / 2`.
    pub fn from_time(chi: f64, t: f64) -> Result<Self> {
        Self::new(0.5 * finite("chi", chi)? * non_negative("t", t)?)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Physical time for a given coupling `chi`.
    pub fn time(self, chi: f64) -> f64 {
        2.0 * self.0 / chi
    }
}

/// Coupling strength and per-mode dephasing rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrConfig {
    chi: f64,
    gamma_a: f64,
    gamma_b: f64,
}

impl KerrConfig {
    pub fn new(chi: f64, gamma_a: f64, gamma_b: f64) -> Result<Self> {
        if !chi.is_finite() || chi <= 0.0 {
            return Err(domain("chi", format!("need chi > 0, got {chi}")));
        }
        Ok(Self {
            chi,
            gamma_a: non_negative("gamma_a", gamma_a)?,
            gamma_b: non_negative("gamma_b", gamma_b)?,
        })
    }

    /// Lossless coupling.
    pub fn unitary(chi: f64) -> Result<Self> {
        Self::new(chi, 0.0, 0.0)
    }

    /// Total dephasing `gamma` split equally between the modes.
    pub fn dephased(chi: f64, gamma: f64) -> Result<Self> {
        Self::new(chi, 0.5 * gamma, 0.5 * gamma)
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn gamma_a(&self) -> f64 {
        self.gamma_a
    }

    pub fn gamma_b(&self) -> f64 {
        self.gamma_b
    }

    /// Total dephasing rate `gamma = gamma_a + gamma_b`, the diffusion
    /// constant (times 4) of the relative phase.
    pub fn gamma(&self) -> f64 {
        self.gamma_a + self.gamma_b
    }
}

/// Product of two coherent states `|alpha_0> |beta_0>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCoherentInit {
    i0a: f64,
    i0b: f64,
    phi0a: f64,
    phi0b: f64,
}

impl TwoModeCoherentInit {
    pub fn new(i0a: f64, i0b: f64, phi0a: f64, phi0b: f64) -> Result<Self> {
        Ok(Self {
            i0a: non_negative("I_0a", i0a)?,
            i0b: non_negative("I_0b", i0b)?,
            phi0a: finite("phi_0a", phi0a)?,
            phi0b: finite("phi_0b", phi0b)?,
        })
    }

    /// Circularly polarised light of total intensity `i0`: equal intensities
    /// with `alpha_0 = i beta_0`, so the Stokes vector points along `+S_y`.
    pub fn circular(i0: f64) -> Result<Self> {
        non_negative("I_0", i0)?;
        Self::new(0.5 * i0, 0.5 * i0, FRAC_PI_2, 0.0)
    }

    pub fn i0a(&self) -> f64 {
        self.i0a
    }

    pub fn i0b(&self) -> f64 {
        self.i0b
    }

    pub fn phi0a(&self) -> f64 {
        self.phi0a
    }

    pub fn phi0b(&self) -> f64 {
        self.phi0b
    }

    pub fn total_intensity(&self) -> f64 {
        self.i0a + self.i0b
    }

    pub fn alpha0(&self) -> Complex64 {
        Complex64::from_polar(self.i0a.sqrt(), self.phi0a)
    }

    pub fn beta0(&self) -> Complex64 {
        Complex64::from_polar(self.i0b.sqrt(), self.phi0b)
    }

    /// The initial amplitudes as a phase-space point.
    pub fn center(&self) -> PhasePoint {
        PhasePoint::ActionAngle {
            ia: self.i0a,
            phi_a: wrap_angle(self.phi0a),
            ib: self.i0b,
            phi_b: wrap_angle(self.phi0b),
        }
    }

    /// Initial Stokes vector in the Poincaré chart.
    pub fn stokes0(&self) -> [f64; 3] {
        stokes_of(self.i0a, self.i0b, self.phi0a - self.phi0b)
    }

    /// Initial `(I_0, theta_0, phi_0)`.
    pub fn spherical0(&self) -> (f64, f64, f64) {
        let (theta, phi) = polar_angles(self.i0a, self.i0b, self.phi0a - self.phi0b);
        (self.total_intensity(), theta, phi)
    }
}

/// Which coordinates a [`PhasePoint`] is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    Amplitude,
    ActionAngle,
    PoincareSpherical,
    PoincareCartesian,
}

/// A point of the four-dimensional two-mode phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhasePoint {
    Amplitude {
        alpha: Complex64,
        beta: Complex64,
    },
    ActionAngle {
        ia: f64,
        phi_a: f64,
        ib: f64,
        phi_b: f64,
    },
    PoincareSpherical {
        intensity: f64,
        theta: f64,
        phi: f64,
        global_phase: f64,
    },
    PoincareCartesian {
        stokes: [f64; 3],
        global_phase: f64,
    },
}

impl PhasePoint {
    pub fn chart(&self) -> Chart {
        match self {
            Self::Amplitude { .. } => Chart::Amplitude,
            Self::ActionAngle { .. } => Chart::ActionAngle,
            Self::PoincareSpherical { .. } => Chart::PoincareSpherical,
            Self::PoincareCartesian { .. } => Chart::PoincareCartesian,
        }
    }

    /// `(I_a, phi_a, I_b, phi_b)` with phases in `(-pi, pi]`.
    pub fn action_angle(&self) -> (f64, f64, f64, f64) {
        match *self {
            Self::Amplitude { alpha, beta } => (
                alpha.norm_sqr(),
                wrap_angle(alpha.arg()),
                beta.norm_sqr(),
                wrap_angle(beta.arg()),
            ),
            Self::ActionAngle {
                ia,
                phi_a,
                ib,
                phi_b,
            } => (ia, wrap_angle(phi_a), ib, wrap_angle(phi_b)),
            Self::PoincareSpherical {
                intensity,
                theta,
                phi,
                global_phase,
            } => {
                let half = 0.5 * theta;
                (
                    intensity * half.cos().powi(2),
                    wrap_angle(global_phase),
                    intensity * half.sin().powi(2),
                    wrap_angle(global_phase - phi),
                )
            }
            Self::PoincareCartesian {
                stokes,
                global_phase,
            } => {
                let intensity = norm3(stokes);
                let ia = 0.5 * (intensity + stokes[2]);
                let ib = 0.5 * (intensity - stokes[2]);
                let phi = relative_phase_of(stokes);
                (
                    ia.max(0.0),
                    wrap_angle(global_phase),
                    ib.max(0.0),
                    wrap_angle(global_phase - phi),
                )
            }
        }
    }

    /// `(I, theta, phi)` on the Poincaré sphere.
    pub fn spherical(&self) -> (f64, f64, f64) {
        match *self {
            Self::PoincareSpherical {
                intensity,
                theta,
                phi,
                ..
            } => (intensity, theta, wrap_angle(phi)),
            Self::PoincareCartesian { stokes, .. } => {
                let intensity = norm3(stokes);
                let theta = stokes[0].hypot(stokes[1]).atan2(stokes[2]);
                (intensity, theta, relative_phase_of(stokes))
            }
            _ => {
                let (ia, pa, ib, pb) = self.action_angle();
                let (theta, phi) = polar_angles(ia, ib, pa - pb);
                (ia + ib, theta, phi)
            }
        }
    }

    /// Stokes vector in the Poincaré chart.
    pub fn stokes(&self) -> [f64; 3] {
        match *self {
            Self::PoincareCartesian { stokes, .. } => stokes,
            Self::PoincareSpherical {
                intensity,
                theta,
                phi,
                ..
            } => [
                intensity * theta.sin() * phi.cos(),
                intensity * theta.sin() * phi.sin(),
                intensity * theta.cos(),
            ],
            _ => {
                let (ia, pa, ib, pb) = self.action_angle();
                stokes_of(ia, ib, pa - pb)
            }
        }
    }

    pub fn global_phase(&self) -> f64 {
        match *self {
            Self::PoincareSpherical { global_phase, .. }
            | Self::PoincareCartesian { global_phase, .. } => wrap_angle(global_phase),
            _ => self.action_angle().1,
        }
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        match *self {
            Self::Amplitude { alpha, beta } => (alpha, beta),
            _ => {
                let (ia, pa, ib, pb) = self.action_angle();
                (
                    Complex64::from_polar(ia.sqrt(), pa),
                    Complex64::from_polar(ib.sqrt(), pb),
                )
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Amplitude { alpha, beta } => {
                alpha.re.is_finite()
                    && alpha.im.is_finite()
                    && beta.re.is_finite()
                    && beta.im.is_finite()
            }
            Self::ActionAngle {
                ia,
                phi_a,
                ib,
                phi_b,
            } => ia >= 0.0 && ib >= 0.0 && [ia, phi_a, ib, phi_b].iter().all(|x| x.is_finite()),
            Self::PoincareSpherical {
                intensity,
                theta,
                phi,
                global_phase,
            } => {
                intensity >= 0.0
                    && (0.0..=PI).contains(&theta)
                    && [intensity, phi, global_phase].iter().all(|x| x.is_finite())
            }
            Self::PoincareCartesian {
                stokes,
                global_phase,
            } => stokes.iter().all(|x| x.is_finite()) && global_phase.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(domain("phase-space point", format!("{self:?}")))
        }
    }
}

/// Re-expresses a point in another chart.
pub fn convert_chart(point: &PhasePoint, target: Chart) -> Result<PhasePoint> {
    point.validate()?;
    let converted = match target {
        Chart::Amplitude => {
            let (alpha, beta) = point.amplitudes();
            PhasePoint::Amplitude { alpha, beta }
        }
        Chart::ActionAngle => {
            let (ia, phi_a, ib, phi_b) = point.action_angle();
            PhasePoint::ActionAngle {
                ia,
                phi_a,
                ib,
                phi_b,
            }
        }
        Chart::PoincareSpherical => {
            let (intensity, theta, phi) = point.spherical();
            PhasePoint::PoincareSpherical {
                intensity,
                theta,
                phi,
                global_phase: point.global_phase(),
            }
        }
        Chart::PoincareCartesian => PhasePoint::PoincareCartesian {
            stokes: point.stokes(),
            global_phase: point.global_phase(),
        },
    };
    Ok(converted)
}

/// Pulls a point at time `tau` back to the point it started from: the value
/// of the evolved Wigner function at `point` equals the initial value at the
/// returned point. Intensities are conserved, phases shift by `2 I tau` of
/// the other mode.
pub fn evolve_point(point: &PhasePoint, tau: Tau) -> Result<PhasePoint> {
    point.validate()?;
    let (ia, pa, ib, pb) = point.action_angle();
    let t = tau.value();
    Ok(PhasePoint::ActionAngle {
        ia,
        phi_a: wrap_angle(pa + 2.0 * ib * t),
        ib,
        phi_b: wrap_angle(pb + 2.0 * ia * t),
    })
}

/// Classical trajectory: `alpha(tau) = alpha e^{-2 i tau |beta|^2}` and
/// `beta(tau) = beta e^{-2 i tau |alpha|^2}`.
pub fn trajectory(alpha: Complex64, beta: Complex64, tau: f64) -> (Complex64, Complex64) {
    let ia = alpha.norm_sqr();
    let ib = beta.norm_sqr();
    (
        alpha * Complex64::from_polar(1.0, -2.0 * tau * ib),
        beta * Complex64::from_polar(1.0, -2.0 * tau * ia),
    )
}

/// Wigner function of the initial coherent product state.
pub fn wigner_initial(init: &TwoModeCoherentInit, point: &PhasePoint) -> Result<f64> {
    point.validate()?;
    let (alpha, beta) = point.amplitudes();
    let da = (alpha - init.alpha0()).norm_sqr();
    let db = (beta - init.beta0()).norm_sqr();
    Ok(4.0 / (PI * PI) * (-2.0 * da - 2.0 * db).exp())
}

/// Wigner function at time `tau` under the lossless coupling:
/// `(4/pi^2) exp(-2 |sqrt(I_a) e^{i(phi_a + 2 I_b tau)} - alpha_0|^2 - 2 |sqrt(I_b) e^{i(phi_b + 2 I_a tau)} - beta_0|^2)`.
pub fn wigner_evolved(init: &TwoModeCoherentInit, point: &PhasePoint, tau: Tau) -> Result<f64> {
    point.validate()?;
    let (ia, pa, ib, pb) = point.action_angle();
    let t = tau.value();
    let alpha = Complex64::from_polar(ia.sqrt(), pa + 2.0 * ib * t);
    let beta = Complex64::from_polar(ib.sqrt(), pb + 2.0 * ia * t);
    let da = (alpha - init.alpha0()).norm_sqr();
    let db = (beta - init.beta0()).norm_sqr();
    Ok(4.0 / (PI * PI) * (-2.0 * da - 2.0 * db).exp())
}

/// Wigner function on the Poincaré space (global phase integrated out) at
/// time `tau` under the lossless coupling.
pub fn wigner_poincare(init: &TwoModeCoherentInit, point: &PhasePoint, tau: Tau) -> Result<f64> {
    point.validate()?;
    Ok(poincare_density(
        init.total_intensity(),
        init.stokes0(),
        point.stokes(),
        tau.value(),
    ))
}

/// `(8/pi) e^{-2I-2I_0} I_0(2 sqrt(sigma))` with
/// `sigma = 2 (I I_0 + S' . S_0)`, `S'` being `S` rotated about the z axis by
/// `-2 tau S_z`. Evaluated in scaled form so that large intensities are safe.
pub(crate) fn poincare_density(i0: f64, s0: [f64; 3], s: [f64; 3], tau: f64) -> f64 {
    let intensity = norm3(s);
    let (sin, cos) = (2.0 * tau * s[2]).sin_cos();
    let rotated = [s[0] * cos + s[1] * sin, s[1] * cos - s[0] * sin, s[2]];
    let dot = rotated[0] * s0[0] + rotated[1] * s0[1] + rotated[2] * s0[2];
    let sigma = (2.0 * (intensity * i0 + dot)).max(0.0);
    let arg = 2.0 * sigma.sqrt();
    let scaled = bessel_i_scaled(0, arg).expect("argument is finite and non-negative");
    8.0 / PI * (arg - 2.0 * intensity - 2.0 * i0).exp() * scaled
}

/// Width contributed by the coherent state itself to the phase kernel of the
/// dephased Wigner function: `cos((theta - theta_0)/2) / (2 sqrt(I I_0) sin theta sin theta_0)`.
///
/// This is the single place to change if a different reading of the
/// intensity factor is wanted.
pub fn dephasing_saddle_width(i: f64, i0: f64, theta: f64, theta0: f64) -> f64 {
    (0.5 * (theta - theta0)).cos() / (2.0 * (i * i0).sqrt() * theta.sin() * theta0.sin())
}

/// Large-intensity closed form of the Wigner function on the Poincaré space
/// with phase dephasing, at physical time `t`.
///
/// Refuses points within [`POLE_EXCLUSION`] of a pole, where the closed form
/// is singular.
pub fn wigner_dephased(
    init: &TwoModeCoherentInit,
    point: &PhasePoint,
    t: f64,
    cfg: &KerrConfig,
) -> Result<f64> {
    point.validate()?;
    non_negative("t", t)?;
    let gamma = cfg.gamma();
    if gamma <= 0.0 {
        return Err(Error::Regime {
            what: "dephased Wigner function",
            requirement: "gamma > 0 (use wigner_poincare for lossless evolution)",
            value: gamma,
        });
    }
    let (i0, theta0, phi0) = init.spherical0();
    let (i, theta, phi) = point.spherical();
    for (name, th) in [("evaluation point", theta), ("initial state", theta0)] {
        if th < POLE_EXCLUSION || PI - th < POLE_EXCLUSION {
            return Err(domain(
                "dephased Wigner function",
                format!("{name} lies within {POLE_EXCLUSION} of a pole (theta = {th})"),
            ));
        }
    }
    if i <= 0.0 || i0 <= 0.0 {
        return Err(domain(
            "dephased Wigner function",
            "needs I > 0 and I_0 > 0",
        ));
    }
    let width = 0.25 * gamma * t + dephasing_saddle_width(i, i0, theta, theta0);
    let drift = cfg.chi() * t * i * theta.cos();
    let kernel = ThetaKernel::new(width)?.eval(phi - phi0 - drift);
    let exponent = -2.0 * i - 2.0 * i0 + 4.0 * (i * i0).sqrt() * (0.5 * (theta - theta0)).cos();
    Ok(2.0 / (PI * PI) * exponent.exp() / (i * i0 * theta.sin() * theta0.sin()).sqrt() * kernel)
}

/// Exact Poincaré-space Wigner function with dephasing, from the
/// Fourier expansion in the relative phase:
/// `(8/pi) e^{-2I-2I_0} sum_k I_k(a) I_k(b) cos(k (phi - phi_0 - chi t I cos theta)) e^{-k^2 gamma t / 4}`
/// with `a = 4 sqrt(I_a I_0a)` and `b = 4 sqrt(I_b I_0b)`. Valid for any
/// `gamma >= 0`; cost grows like the square root of the intensities.
pub fn wigner_dephased_series(
    init: &TwoModeCoherentInit,
    point: &PhasePoint,
    t: f64,
    cfg: &KerrConfig,
) -> Result<f64> {
    point.validate()?;
    non_negative("t", t)?;
    let gamma = cfg.gamma();
    let (ia, _, ib, _) = point.action_angle();
    let (i, theta, phi) = point.spherical();
    let (i0, _, phi0) = init.spherical0();
    let a = 4.0 * (ia * init.i0a()).sqrt();
    let b = 4.0 * (ib * init.i0b()).sqrt();
    let angle = phi - phi0 - cfg.chi() * t * i * theta.cos();
    let diffusion = 0.25 * gamma * t;
    let prefactor = 8.0 / PI * (a + b - 2.0 * i - 2.0 * i0).exp();
    // Each scaled Bessel factor decays like exp(-k^2 / 2z) once k exceeds sqrt(z).
    let terms = (12.0 * a.min(b).sqrt() + 40.0).ceil() as i64;
    let mut acc = crate::sum::CompensatedSum::default();
    for k in (1..=terms).rev() {
        let kf = k as f64;
        let term = bessel_i_scaled(k, a)? * bessel_i_scaled(k, b)?;
        acc.add(2.0 * term * (kf * angle).cos() * (-kf * kf * diffusion).exp());
    }
    acc.add(bessel_i_scaled(0, a)? * bessel_i_scaled(0, b)?);
    Ok(prefactor * acc.value())
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn stokes_of(ia: f64, ib: f64, phi: f64) -> [f64; 3] {
    let cross = 2.0 * (ia * ib).sqrt();
    [cross * phi.cos(), cross * phi.sin(), ia - ib]
}

fn polar_angles(ia: f64, ib: f64, phi: f64) -> (f64, f64) {
    let theta = 2.0 * ib.sqrt().atan2(ia.sqrt());
    let phi = if ia == 0.0 || ib == 0.0 {
        0.0
    } else {
        wrap_angle(phi)
    };
    (theta, phi)
}

fn relative_phase_of(s: [f64; 3]) -> f64 {
    if s[0] == 0.0 && s[1] == 0.0 {
        0.0
    } else {
        wrap_angle(s[1].atan2(s[0]))
    }
}
