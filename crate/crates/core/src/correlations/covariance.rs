//! Quadrature covariance matrix of the evolved state and its symplectic
//! invariants.
//!
//! Quadratures are `x = (a + a^dag) / sqrt 2`, `p = (a - a^dag) / (i sqrt 2)`,
//! ordered `(x_a, p_a, x_b, p_b)`; the vacuum has covariance `I / 2`.
//! Second moments are symmetrically ordered, so they are exact Wigner
//! moments.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phasespace::{trajectory, Tau, TwoModeCoherentInit};
use crate::quadrature::GaussHermite;

/// Margin below 1/2 required before `nu_tilde_minus` counts as entangled.
pub const ENTANGLEMENT_MARGIN: f64 = 1e-9;

/// Smallest Gauss-Hermite order accepted for covariance moments.
pub const MIN_COVARIANCE_ORDER: usize = 20;

/// Gauss-Hermite order per real phase-space coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { order: 40 }
    }
}

/// Symmetric 4x4 covariance matrix `gamma = [[A, C], [C^T, B]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(pub Matrix4<f64>);

impl CovarianceMatrix {
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn block_a(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn block_b(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn block_c(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// Checks `gamma + (i/2) Omega >= 0` up to `tol` times the spectral scale.
    pub fn is_physical(&self, tol: f64) -> bool {
        let omega = symplectic_form();
        let h = self.0.map(Complex64::from) + omega.map(|x| Complex64::new(0.0, 0.5 * x));
        let eig = h.symmetric_eigenvalues();
        let scale = eig.iter().fold(1.0_f64, |m, e| m.max(e.abs()));
        eig.iter().all(|&e| e >= -tol * scale)
    }
}

fn symplectic_form() -> Matrix4<f64> {
    let mut omega = Matrix4::zeros();
    omega[(0, 1)] = 1.0;
    omega[(1, 0)] = -1.0;
    omega[(2, 3)] = 1.0;
    omega[(3, 2)] = -1.0;
    omega
}

/// Symplectic eigenvalues of a covariance matrix and of its partial transpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticSpectrum {
    pub nu_plus: f64,
    pub nu_minus: f64,
    /// Smaller symplectic eigenvalue of the partially transposed state.
    pub nu_tilde_minus: f64,
}

/// Covariance matrix of the state evolved to `tau`, by transporting a tensor
/// Gauss-Hermite rule for the initial Gaussian along the classical flow.
pub fn covariance_matrix(
    init: &TwoModeCoherentInit,
    tau: Tau,
    quad: QuadratureSpec,
) -> Result<CovarianceMatrix> {
    if quad.order < MIN_COVARIANCE_ORDER {
        return Err(Error::Regime {
            what: "covariance quadrature",
            requirement: "order >= 20 per coordinate",
            value: quad.order as f64,
        });
    }
    let rule = GaussHermite::new(quad.order)?;
    let alpha0 = init.alpha0();
    let beta0 = init.beta0();
    let t = tau.value();
    let n = rule.order();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let sqrt2 = std::f64::consts::SQRT_2;

    // The initial Wigner function is a product of Gaussians with variance
    // 1/4 per real component, i.e. alpha = alpha0 + (x1 + i x2) / sqrt 2
    // under the weight exp(-x1^2 - x2^2).
    let point = |i: usize, j: usize, k: usize, l: usize| -> [f64; 4] {
        let alpha = alpha0 + Complex64::new(rule.nodes[i], rule.nodes[j]) * s;
        let beta = beta0 + Complex64::new(rule.nodes[k], rule.nodes[l]) * s;
        let (a, b) = trajectory(alpha, beta, t);
        [sqrt2 * a.re, sqrt2 * a.im, sqrt2 * b.re, sqrt2 * b.im]
    };
    let weight = |i: usize, j: usize, k: usize, l: usize| {
        rule.weights[i] * rule.weights[j] * rule.weights[k] * rule.weights[l]
    };

    // Partial sums are formed per leading index and combined in order so the
    // result does not depend on the thread count.
    let partial_means: Vec<([f64; 4], f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut m = [0.0; 4];
            let mut wsum = 0.0;
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let w = weight(i, j, k, l);
                        let v = point(i, j, k, l);
                        for (mc, vc) in m.iter_mut().zip(v) {
                            *mc += w * vc;
                        }
                        wsum += w;
                    }
                }
            }
            (m, wsum)
        })
        .collect();
    let mut mean = [0.0; 4];
    let mut total = 0.0;
    for (m, w) in &partial_means {
        for (acc, x) in mean.iter_mut().zip(m) {
            *acc += x;
        }
        total += w;
    }
    for x in &mut mean {
        *x /= total;
    }

    let partial_cov: Vec<Matrix4<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut c = Matrix4::zeros();
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let w = weight(i, j, k, l);
                        let v = point(i, j, k, l);
                        let d = nalgebra::Vector4::new(
                            v[0] - mean[0],
                            v[1] - mean[1],
                            v[2] - mean[2],
                            v[3] - mean[3],
                        );
                        c += w * d * d.transpose();
                    }
                }
            }
            c
        })
        .collect();
    let cov = partial_cov.iter().fold(Matrix4::zeros(), |acc, c| acc + c) / total;
    Ok(CovarianceMatrix(0.5 * (cov + cov.transpose())))
}

/// Symplectic eigenvalues `nu_pm` and the partially transposed `nu_tilde_minus`,
/// from `nu^2 = [Delta -+ sqrt(Delta^2 - 4 det gamma)] / 2` with
/// `Delta = det A + det B +- 2 det C`.
pub fn symplectic_spectrum(gamma: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    let det_a = gamma.block_a().determinant();
    let det_b = gamma.block_b().determinant();
    let det_c = gamma.block_c().determinant();
    let det = gamma.0.determinant();
    if !det.is_finite() || det < 0.0 {
        return Err(Error::Unphysical(format!(
            "determinant {det} is not positive"
        )));
    }
    let roots = |delta: f64| -> Result<(f64, f64)> {
        let disc = delta * delta - 4.0 * det;
        if disc < -1e-10 * delta * delta || delta < 0.0 {
            return Err(Error::Unphysical(format!(
                "negative discriminant {disc:e} for Delta = {delta}"
            )));
        }
        let root = disc.max(0.0).sqrt();
        let plus = 0.5 * (delta + root);
        // The smaller root from det / plus avoids cancellation.
        let minus = if plus > 0.0 { det / plus } else { 0.0 };
        Ok((plus.sqrt(), minus.sqrt()))
    };
    let (nu_plus, nu_minus) = roots(det_a + det_b + 2.0 * det_c)?;
    let (_, nu_tilde_minus) = roots(det_a + det_b - 2.0 * det_c)?;
    Ok(SymplecticSpectrum {
        nu_plus,
        nu_minus,
        nu_tilde_minus,
    })
}

/// PPT criterion: entangled when `nu_tilde_minus < 1/2` by more than
/// [`ENTANGLEMENT_MARGIN`].
pub fn entanglement_witness(spectrum: &SymplecticSpectrum) -> bool {
    spectrum.nu_tilde_minus < 0.5 - ENTANGLEMENT_MARGIN
}
