//! Quasiclassical phase-space description of two optical modes coupled by a
//! cross-Kerr interaction.
//!
//! The crate covers the scaled special functions the dynamics reduce to, the
//! exact transport of the initial Wigner function along classical
//! trajectories, single-mode purity and Gaussian entanglement measures,
//! Stokes-parameter squeezing, a truncated Fock-space oracle used to check
//! all of the above, and Wigner sampling on the Poincaré space with
//! isosurface extraction.

pub mod correlations;
pub mod error;
pub mod fockoracle;
pub mod phasespace;
pub mod poincare;
pub mod polarization;
pub mod quadrature;
pub mod specfun;
mod sum;

pub use correlations::{
    covariance_matrix, entanglement_witness, purity_asymptotic, purity_exact, purity_qc_integral,
    purity_qc_series, symplectic_spectrum, CovarianceMatrix, PurityMethod, PurityResult,
    QuadratureSpec, SymplecticSpectrum,
};
pub use error::{Error, Result};
pub use fockoracle::{coherent_fock, FockState, Mode, StokesAxis};
pub use phasespace::{
    convert_chart, evolve_point, wigner_dephased, wigner_evolved, wigner_poincare, Chart,
    KerrConfig, PhasePoint, Tau, TwoModeCoherentInit,
};
pub use poincare::{
    dephasing_shrink_metric, extract_isosurface, sample_grid, Box3, IsoMesh, ScalarGrid3D,
};
pub use polarization::{optimal_angle, squeezing_report, SqueezingReport, VarianceForm};
pub use specfun::{bessel_i_gaussian_approx, bessel_i_scaled, theta_kernel, ScaledBessel};
