//! `e^{-z} I_n(z)` for integer order and non-negative argument.
//!
//! Four regimes, chosen by order and argument:
//!
//! * `|n| < 50`, `z < 30`: ascending power series.
//! * `|n| < 50`, `30 <= z < 1e4`: Miller backward recurrence normalised by
//!   `I_0 + 2 sum I_k = e^z`.
//! * `|n| < 50`, `z >= 1e4`: Hankel large-argument expansion.
//! * `|n| >= 50`: Debye uniform expansion, polynomials generated on first use.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};

const SMALL_ORDER_LIMIT: u64 = 50;
const SERIES_LIMIT: f64 = 30.0;
const HANKEL_LIMIT: f64 = 1e4;
const MAX_ORDER: u64 = 100_000_000;
const DEBYE_TERMS: usize = 14;

/// Below this argument the Gaussian envelope is not a usable stand-in.
pub const GAUSSIAN_APPROX_MIN_ARGUMENT: f64 = 1e3;

/// A tabulated value of `e^{-z} I_n(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBessel {
    pub order: i64,
    pub argument: f64,
    pub scaled_value: f64,
}

impl ScaledBessel {
    pub fn new(order: i64, argument: f64) -> Result<Self> {
        Ok(Self {
            order,
            argument,
            scaled_value: bessel_i_scaled(order, argument)?,
        })
    }
}

/// `e^{-z} I_n(z)`. Symmetric in `n`; lies in `[0, 1]`.
pub fn bessel_i_scaled(n: i64, z: f64) -> Result<f64> {
    if !z.is_finite() || z < 0.0 {
        return Err(domain(
            "bessel argument",
            format!("need finite z >= 0, got {z}"),
        ));
    }
    let n = n.unsigned_abs();
    if n > MAX_ORDER {
        return Err(domain(
            "bessel order",
            format!("|n| = {n} exceeds {MAX_ORDER}"),
        ));
    }
    if z == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let value = if n >= SMALL_ORDER_LIMIT {
        debye(n as f64, z)
    } else if z < SERIES_LIMIT {
        power_series(n, z)
    } else if z < HANKEL_LIMIT {
        miller(n, z)
    } else {
        hankel(n as f64, z)
    };
    Ok(value)
}

/// `e^{-z} I_n(z)` for `n = 0..=n_max`, evaluated in parallel.
pub fn bessel_i_scaled_table(n_max: usize, z: f64) -> Result<Vec<f64>> {
    (0..=n_max)
        .into_par_iter()
        .map(|n| bessel_i_scaled(n as i64, z))
        .collect()
}

/// Large-argument Gaussian envelope `(2 pi z)^{-1/2} exp(-n^2 / 2z)`.
pub fn bessel_i_gaussian_approx(n: i64, z: f64) -> Result<f64> {
    if !z.is_finite() || z < GAUSSIAN_APPROX_MIN_ARGUMENT {
        return Err(Error::Regime {
            what: "Gaussian Bessel approximation",
            requirement: "argument z >= 1e3",
            value: z,
        });
    }
    let n = n as f64;
    Ok((-n * n / (2.0 * z)).exp() / (2.0 * PI * z).sqrt())
}

fn power_series(n: u64, z: f64) -> f64 {
    let half = 0.5 * z;
    let mut lead = 1.0;
    for j in 1..=n {
        lead *= half / j as f64;
    }
    let q = half * half;
    let mut term = lead;
    let mut sum = lead;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + n as f64));
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    sum * (-z).exp()
}

fn miller(n: u64, z: f64) -> f64 {
    const BIG: f64 = 1e250;
    let start = n as usize + (10.0 * z.sqrt()).ceil() as usize + 30;
    let mut above = 0.0_f64;
    let mut current = 1e-30_f64;
    let mut norm = 0.0_f64;
    let mut wanted = 0.0_f64;
    for k in (1..=start).rev() {
        if k as u64 == n {
            wanted = current;
        }
        norm += 2.0 * current;
        let below = above + 2.0 * k as f64 / z * current;
        above = current;
        current = below;
        if current > BIG {
            current /= BIG;
            above /= BIG;
            norm /= BIG;
            wanted /= BIG;
        }
    }
    if n == 0 {
        wanted = current;
    }
    norm += current;
    wanted / norm
}

fn hankel(nu: f64, z: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (8.0 * k as f64 * z);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * z).sqrt()
}

fn debye(nu: f64, x: f64) -> f64 {
    // With t = nu / x: p = t / sqrt(1 + t^2), and the scaled exponent
    // nu * eta(x / nu) - x collapses to nu * (t / (1 + sqrt(1 + t^2)) - asinh t).
    let t = nu / x;
    let root = t.hypot(1.0);
    let p = t / root;
    let exponent = nu * (t / (1.0 + root) - t.asinh());
    let mut series = 0.0;
    let mut scale = 1.0;
    for poly in debye_polynomials() {
        let term = eval_poly(poly, p) * scale;
        series += term;
        if term.abs() < 1e-17 * series.abs() {
            break;
        }
        scale /= nu;
    }
    (p / (2.0 * PI * nu)).sqrt() * exponent.exp() * series
}

fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Coefficients (ascending powers of p) of the Debye polynomials u_k(p),
/// from u_{k+1} = p^2 (1 - p^2) u_k' / 2 + (1/8) int_0^p (1 - 5 s^2) u_k(s) ds.
fn debye_polynomials() -> &'static [Vec<f64>] {
    static POLYS: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    POLYS.get_or_init(|| {
        let mut polys = vec![vec![1.0]];
        for _ in 1..DEBYE_TERMS {
            let u = polys.last().unwrap();
            let mut next = vec![0.0; u.len() + 3];
            for (j, &c) in u.iter().enumerate() {
                if j >= 1 {
                    let d = 0.5 * j as f64 * c;
                    next[j + 1] += d;
                    next[j + 3] -= d;
                }
                next[j + 1] += c / (8.0 * (j + 1) as f64);
                next[j + 3] -= 5.0 * c / (8.0 * (j + 3) as f64);
            }
            polys.push(next);
        }
        polys
    })
}
