//! Intermodal correlations: reduced purity and Gaussian entanglement measures.

mod covariance;
mod purity;

pub use covariance::{
    covariance_matrix, entanglement_witness, symplectic_spectrum, CovarianceMatrix, QuadratureSpec,
    SymplecticSpectrum, ENTANGLEMENT_MARGIN, MIN_COVARIANCE_ORDER,
};
pub use purity::{
    purity_asymptotic, purity_exact, purity_exact_double_series, purity_qc_integral,
    purity_qc_series, ExactPurity, PurityMethod, PurityResult, QcPuritySeries,
    QC_INTEGRAL_MIN_INTENSITY,
};
