use nalgebra::{Complex, DMatrix, Schur};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};

use super::ulam::UlamMatrix;

const MAX_ITERATIONS: usize = 20_000;
const RITZ_TOL: f64 = 1e-10;
const STATIONARY_TOL: f64 = 1e-14;
/// Largest state count for the dense cross-check.
pub const DENSE_LIMIT: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub leading_eigenvalue: f64,
    pub second_modulus: f64,
    pub gap: f64,
    pub iterations: usize,
    /// Change of the leading Ritz modulus over the last sweep.
    pub residual: f64,
    /// Moduli of all Ritz values of the deflated operator, descending.
    pub ritz_moduli: Vec<f64>,
    /// Second modulus from a dense eigensolve, when the matrix is small enough.
    pub dense_second_modulus: Option<f64>,
    /// False when subspace iteration stalled and `second_modulus` was taken
    /// from the dense solve instead.
    pub converged: bool,
}

fn normalize_l1(x: &mut [f64]) {
    let s: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= s);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Modified Gram-Schmidt on rows; rows that collapse are re-randomized.
fn orthonormalize(rows: &mut [Vec<f64>], rng: &mut ChaCha8Rng) {
    for i in 0..rows.len() {
        for _attempt in 0..3 {
            for j in 0..i {
                let (head, tail) = rows.split_at_mut(i);
                let c = dot(&tail[0], &head[j]);
                tail[0].iter_mut().zip(&head[j]).for_each(|(v, w)| *v -= c * w);
            }
            let norm = dot(&rows[i], &rows[i]).sqrt();
            if norm > 1e-300 {
                rows[i].iter_mut().for_each(|v| *v /= norm);
                break;
            }
            rows[i].iter_mut().for_each(|v| *v = rng.random::<f64>() - 0.5);
        }
    }
}

/// Row-vector action of the deflated operator `x -> x P - (x . 1) p`.
fn deflated(p: &UlamMatrix, stationary: &[f64], x: &[f64]) -> Vec<f64> {
    let s: f64 = x.iter().sum();
    let mut y = p.left_mul(x);
    y.iter_mut().zip(stationary).for_each(|(v, q)| *v -= s * q);
    y
}

fn sorted_moduli(eigenvalues: &[Complex<f64>]) -> Vec<f64> {
    let mut moduli: Vec<f64> = eigenvalues.iter().map(|c| c.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    moduli
}

/// Eigenvalue moduli, descending. Shifted QR can cycle on matrices with
/// exact symmetries (permutations); a random orthogonal similarity breaks them.
fn ritz_moduli(h: DMatrix<f64>) -> Result<Vec<f64>> {
    let n = h.nrows();
    let max_iter = 200 * n.max(1);
    if let Some(schur) = Schur::try_new(h.clone(), f64::EPSILON, max_iter) {
        return Ok(sorted_moduli(schur.complex_eigenvalues().as_slice()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c4);
    let q = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5).qr().q();
    let rotated = q.transpose() * h * &q;
    Schur::try_new(rotated, f64::EPSILON, max_iter)
        .map(|s| sorted_moduli(s.complex_eigenvalues().as_slice()))
        .ok_or(GhmError::NoConvergence {
            iterations: max_iter,
            residual: f64::NAN,
        })
}

/// Leading eigenvalue and second-largest eigenvalue modulus of `P`.
///
/// The stationary vector `p` comes from power iteration; the rest of the
/// spectrum from block power (subspace) iteration on the deflated operator
/// `x -> x P - (x . 1) p` with `num_eigs + 4` vectors and Rayleigh-Ritz
/// extraction. Matrices with at most [`DENSE_LIMIT`] states are also solved
/// densely as a cross-check, and the dense value is reported when the
/// iteration stalls (clusters of equal-modulus eigenvalues, nearly nilpotent
/// deflated operators).
pub fn spectral_gap(p: &UlamMatrix, num_eigs: usize) -> Result<SpectralReport> {
    if num_eigs < 2 {
        return Err(GhmError::InvalidParameter("num_eigs must be at least 2".into()));
    }
    let n = p.size();
    let mut stationary = vec![1.0 / n as f64; n];
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut next = p.left_mul(&stationary);
        normalize_l1(&mut next);
        let change: f64 = next.iter().zip(&stationary).map(|(a, b)| (a - b).abs()).sum();
        stationary = next;
        if change <= STATIONARY_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(GhmError::NoConvergence {
            iterations: MAX_ITERATIONS,
            residual: f64::NAN,
        });
    }
    let image = p.left_mul(&stationary);
    let leading_eigenvalue = image.iter().sum::<f64>() / stationary.iter().sum::<f64>();

    let block = (num_eigs + 4).min(n.saturating_sub(1)).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(0x9a9);
    let mut x: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect();
    orthonormalize(&mut x, &mut rng);
    let mut previous = f64::NAN;
    let mut residual = f64::INFINITY;
    let mut moduli = Vec::new();
    let mut iterations = 0;
    for it in 1..=MAX_ITERATIONS {
        iterations = it;
        let ax: Vec<Vec<f64>> = x.iter().map(|row| deflated(p, &stationary, row)).collect();
        let h = DMatrix::from_fn(block, block, |a, b| dot(&ax[a], &x[b]));
        moduli = ritz_moduli(h)?;
        let lead = moduli.first().copied().unwrap_or(0.0);
        residual = (lead - previous).abs();
        previous = lead;
        x = ax;
        orthonormalize(&mut x, &mut rng);
        if it > 5 && residual <= RITZ_TOL * lead.max(1e-3) {
            break;
        }
    }
    let dense_second_modulus = if n <= DENSE_LIMIT {
        Some(dense_spectrum(p)?.get(1).copied().unwrap_or(0.0))
    } else {
        None
    };
    let converged = residual <= 1e-6;
    let second_modulus = match (converged, dense_second_modulus) {
        (true, _) => moduli.first().copied().unwrap_or(0.0),
        (false, Some(d)) => d,
        (false, None) => return Err(GhmError::NoConvergence { iterations, residual }),
    };
    Ok(SpectralReport {
        leading_eigenvalue,
        second_modulus,
        gap: 1.0 - second_modulus,
        iterations,
        residual,
        ritz_moduli: moduli,
        dense_second_modulus,
        converged,
    })
}

/// Eigenvalue moduli of `P` in descending order from a dense Schur
/// decomposition. Limited to [`DENSE_LIMIT`] states.
pub fn dense_spectrum(p: &UlamMatrix) -> Result<Vec<f64>> {
    let n = p.size();
    if n > DENSE_LIMIT {
        return Err(GhmError::InvalidParameter(format!(
            "dense eigensolve limited to {DENSE_LIMIT} states (got {n})"
        )));
    }
    let mut dense = DMatrix::zeros(n, n);
    for (i, j, v) in p.triplets() {
        dense[(i, j)] = v;
    }
    ritz_moduli(dense)
}
