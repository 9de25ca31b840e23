use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{GhmError, Result};
use crate::map::GhmMap;

use super::observable::Observable;
use super::orbit::{OrbitOptions, Stepper};

const VARIANCE_FLOOR: f64 = 1e-12;
const MIN_FIT_POINTS: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSeries {
    pub n: Vec<usize>,
    /// `C(n)`; `C(0)` is the empirical covariance of `f` and `g` over the window.
    pub c: Vec<f64>,
    /// `-slope` of the least-squares line through `(n, ln |C(n)|)` over
    /// `n = 1..` up to the first value below the noise floor.
    pub fitted_rate: Option<f64>,
    pub fit_points: usize,
    /// `3 / sqrt(orbit_len)`.
    pub noise_floor: f64,
}

/// Time-averaged correlations along one orbit after `burn_in` discarded steps.
///
/// With `W = orbit_len - n_max`, `C(n) = (1/W) sum_{t<W} f_t g_{t+n} - mean(f_0..W) mean(g_n..n+W)`.
pub fn correlation_series(
    map: &GhmMap,
    f: &Observable,
    g: &Observable,
    n_max: usize,
    orbit_len: usize,
    burn_in: usize,
    seed: u64,
) -> Result<CorrelationSeries> {
    if orbit_len <= n_max + 1 {
        return Err(GhmError::InvalidParameter(format!(
            "orbit_len = {orbit_len} must exceed n_max = {n_max}"
        )));
    }
    let options = OrbitOptions {
        seed,
        ..OrbitOptions::default()
    };
    let mut stepper = Stepper::new(map, options, 0);
    let mut z = stepper.uniform_point();
    for _ in 0..burn_in {
        z = stepper.step(z);
    }
    let window = orbit_len - n_max;
    let ring_len = n_max + 1;
    let mut ring = vec![0.0; ring_len];
    let mut cross = vec![0.0; ring_len];
    let mut sum_g = vec![0.0; ring_len];
    let (mut sum_f, mut sum_ff, mut sum_gg) = (0.0, 0.0, 0.0);
    for s in 0..orbit_len {
        let (fv, gv) = (f.eval(z), g.eval(z));
        if s < window {
            ring[s % ring_len] = fv;
            sum_f += fv;
            sum_ff += fv * fv;
            sum_gg += gv * gv;
        }
        for n in 0..=n_max.min(s) {
            let t = s - n;
            if t < window {
                cross[n] += ring[t % ring_len] * gv;
                sum_g[n] += gv;
            }
        }
        z = stepper.step(z);
    }
    let w = window as f64;
    let mean_f = sum_f / w;
    let var_f = sum_ff / w - mean_f * mean_f;
    let var_g = sum_gg / w - (sum_g[0] / w).powi(2);
    if var_f < VARIANCE_FLOOR || var_g < VARIANCE_FLOOR {
        return Err(GhmError::DegenerateObservable(var_f.min(var_g)));
    }
    let c: Vec<f64> = (0..=n_max).map(|n| cross[n] / w - mean_f * sum_g[n] / w).collect();
    let noise_floor = 3.0 / (orbit_len as f64).sqrt();
    let fit: Vec<(f64, f64)> = (1..=n_max)
        .map(|n| (n as f64, c[n]))
        .take_while(|(_, v)| v.abs() > noise_floor)
        .map(|(n, v)| (n, v.abs().ln()))
        .collect();
    let fitted_rate = (fit.len() >= MIN_FIT_POINTS).then(|| -least_squares_slope(&fit));
    Ok(CorrelationSeries {
        n: (0..=n_max).collect(),
        c,
        fitted_rate,
        fit_points: fit.len(),
        noise_floor,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CltReport {
    /// Kolmogorov-Smirnov distance between the normalized sums and the
    /// normal law with their sample mean and variance.
    pub ks_statistic: f64,
    /// Grand mean of `f` over all blocks.
    pub mean: f64,
    /// Sample variance of `(S - block_len * mean) / sqrt(block_len)`.
    pub variance: f64,
}

/// Normalized Birkhoff sums over `samples` independent uniform starts.
pub fn clt_diagnostic(map: &GhmMap, f: &Observable, block_len: usize, samples: usize, seed: u64) -> Result<CltReport> {
    if block_len == 0 || samples < 2 {
        return Err(GhmError::InvalidParameter(
            "need block_len >= 1 and samples >= 2".into(),
        ));
    }
    let options = OrbitOptions {
        seed,
        ..OrbitOptions::default()
    };
    let sums: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut stepper = Stepper::new(map, options, i as u64);
            let mut z = stepper.uniform_point();
            let mut s = 0.0;
            for _ in 0..block_len {
                s += f.eval(z);
                z = stepper.step(z);
            }
            s
        })
        .collect();
    let l = block_len as f64;
    let mean = sums.iter().sum::<f64>() / (samples as f64 * l);
    let mut normalized: Vec<f64> = sums.iter().map(|s| (s - l * mean) / l.sqrt()).collect();
    let center = normalized.iter().sum::<f64>() / samples as f64;
    let variance = normalized.iter().map(|v| (v - center).powi(2)).sum::<f64>() / (samples - 1) as f64;
    if variance < VARIANCE_FLOOR {
        return Err(GhmError::DegenerateObservable(variance));
    }
    let normal = Normal::new(center, variance.sqrt()).map_err(|e| GhmError::InvalidParameter(e.to_string()))?;
    normalized.sort_by(f64::total_cmp);
    let n = samples as f64;
    let ks_statistic = normalized
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let cdf = normal.cdf(v);
            (cdf - i as f64 / n).max((i + 1) as f64 / n - cdf)
        })
        .fold(0.0, f64::max);
    Ok(CltReport {
        ks_statistic,
        mean,
        variance,
    })
}
