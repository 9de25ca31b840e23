use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{GhmError, Result};

use super::density::GridDensity;

/// Discrete `|u|_mu = sum (1 + |xi|^2)^mu |u_hat(xi)|^2` over the `m x m`
/// frequency lattice, with `u_hat = DFT(u) / m^2` and `xi = 2 pi k` for
/// signed integer wave numbers `k`.
///
/// Accepts any `mu >= 0`; see [`sobolev_seminorm`] for the checked variant.
pub fn sobolev_seminorm_values(m: usize, values: &[f64], mu: f64) -> Result<f64> {
    if values.len() != m * m || m == 0 {
        return Err(GhmError::InvalidParameter(format!(
            "expected {} values, got {}",
            m * m,
            values.len()
        )));
    }
    if !(mu >= 0.0) {
        return Err(GhmError::InvalidParameter(format!("mu = {mu} must be nonnegative")));
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    let mut grid: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    for row in grid.chunks_mut(m) {
        fft.process(row);
    }
    let mut column = vec![Complex::new(0.0, 0.0); m];
    for ix in 0..m {
        for iy in 0..m {
            column[iy] = grid[iy * m + ix];
        }
        fft.process(&mut column);
        for iy in 0..m {
            grid[iy * m + ix] = column[iy];
        }
    }
    let signed = |k: usize| if k <= m / 2 { k as f64 } else { k as f64 - m as f64 };
    let scale = 1.0 / (m * m) as f64;
    let mut total = 0.0;
    for ky in 0..m {
        for kx in 0..m {
            let xi2 = (2.0 * PI).powi(2) * (signed(kx).powi(2) + signed(ky).powi(2));
            let coeff = grid[ky * m + kx] * scale;
            total += (1.0 + xi2).powf(mu) * coeff.norm_sqr();
        }
    }
    Ok(total)
}

/// [`sobolev_seminorm_values`] restricted to `0 < mu < 1/2`.
pub fn sobolev_seminorm(h: &GridDensity, mu: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < 0.5) {
        return Err(GhmError::InvalidParameter(format!(
            "mu = {mu} outside (0, 1/2); use sobolev_diagnostic for other exponents"
        )));
    }
    sobolev_seminorm_values(h.resolution(), h.values(), mu)
}

/// Unchecked exponent variant used to probe the `mu < 1/2` threshold.
pub fn sobolev_diagnostic(h: &GridDensity, mu: f64) -> Result<f64> {
    sobolev_seminorm_values(h.resolution(), h.values(), mu)
}
