//! Periodic heat kernel `Theta(phi | w) = sum_k exp(-w k^2 + i k phi)`.
//!
//! Normalised so that `(1 / 2 pi) * integral over a period = 1`. Wide kernels
//! use the Fourier series; narrow ones the Poisson-resummed image sum.

use std::f64::consts::PI;

use crate::error::{domain, Result};

// Below this width the series cancels to rounding noise near phi = pi; the
// image sum is positive by construction and its omitted images stay below
// exp(-49 pi^2 / 4w) relative.
const IMAGE_SWITCH: f64 = 1.0;
const SERIES_EXPONENT_CUTOFF: f64 = 33.0;

/// Kernel of fixed width, reusable across angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaKernel {
    width: f64,
}

impl ThetaKernel {
    pub fn new(width: f64) -> Result<Self> {
        if !width.is_finite() || width <= 0.0 {
            return Err(domain(
                "theta kernel width",
                format!("need w > 0, got {width}"),
            ));
        }
        Ok(Self { width })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Value at `phi`, wrapped to `(-pi, pi]` first.
    pub fn eval(&self, phi: f64) -> f64 {
        if self.width < IMAGE_SWITCH {
            images(phi, self.width)
        } else {
            series(phi, self.width)
        }
    }
}

/// Evaluates the kernel, picking the representation by width.
pub fn theta_kernel(phi: f64, width: f64) -> Result<f64> {
    if !phi.is_finite() {
        return Err(domain(
            "theta kernel angle",
            format!("non-finite phi {phi}"),
        ));
    }
    Ok(ThetaKernel::new(width)?.eval(phi))
}

/// Fourier-series representation, truncated where `w k^2 > 33`.
pub fn theta_kernel_series(phi: f64, width: f64) -> Result<f64> {
    ThetaKernel::new(width)?;
    Ok(series(phi, width))
}

/// Image-sum (wrapped Gaussian) representation.
pub fn theta_kernel_images(phi: f64, width: f64) -> Result<f64> {
    ThetaKernel::new(width)?;
    Ok(images(phi, width))
}

fn series(phi: f64, w: f64) -> f64 {
    let phi = crate::phasespace::wrap_angle(phi);
    let terms = (SERIES_EXPONENT_CUTOFF / w).sqrt().ceil() as usize;
    let mut sum = 0.0;
    for k in (1..=terms).rev() {
        let k = k as f64;
        sum += (-w * k * k).exp() * (k * phi).cos();
    }
    1.0 + 2.0 * sum
}

fn images(phi: f64, w: f64) -> f64 {
    let phi = crate::phasespace::wrap_angle(phi);
    let amp = (PI / w).sqrt();
    // Images beyond |m| = 3 contribute less than exp(-25 pi^2 / 4w) relative.
    (-3..=3)
        .map(|m| {
            let d = phi - 2.0 * PI * m as f64;
            amp * (-d * d / (4.0 * w)).exp()
        })
        .sum()
}
