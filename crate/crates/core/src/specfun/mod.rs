//! Exponentially scaled modified Bessel functions and the periodic heat kernel.

mod bessel;
mod theta;

pub use bessel::{
    bessel_i_gaussian_approx, bessel_i_scaled, bessel_i_scaled_table, ScaledBessel,
    GAUSSIAN_APPROX_MIN_ARGUMENT,
};
pub use theta::{theta_kernel, theta_kernel_images, theta_kernel_series, ThetaKernel};
