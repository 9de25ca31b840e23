use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};

use super::density::GridDensity;
use super::ulam::UlamMatrix;

const MAX_ITERATIONS: usize = 100_000;
const EXTRA_STARTS: usize = 3;

/// Fixed density of an Ulam matrix plus the uniqueness check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryDensity {
    pub density: GridDensity,
    /// `||h P - h||_1` in density units.
    pub residual: f64,
    pub iterations: usize,
    /// Largest L1 distance between the fixed density and those reached
    /// from random starts.
    pub start_spread: f64,
    pub unique: bool,
}

/// Iterates `p <- p P` from `start` until `||p P - p||_1 <= tol`.
fn power_iterate(p: &UlamMatrix, start: Vec<f64>, tol: f64) -> Result<(Vec<f64>, f64, usize)> {
    let mut x = start;
    for it in 1..=MAX_ITERATIONS {
        let y = p.left_mul(&x);
        let residual: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        x = y;
        if residual <= tol {
            return Ok((x, residual, it));
        }
        if it == MAX_ITERATIONS {
            return Err(GhmError::NoConvergence {
                iterations: it,
                residual,
            });
        }
    }
    unreachable!()
}

/// Left fixed vector of `P` by power iteration from the uniform density.
///
/// Uniqueness is judged from three extra random starts: the fixed density is
/// declared unique when all of them land within `1000 * tol` of it in L1.
pub fn stationary_density(p: &UlamMatrix, tol: f64) -> Result<StationaryDensity> {
    if !(tol > 0.0) {
        return Err(GhmError::InvalidParameter(format!("tol = {tol} must be positive")));
    }
    let n = p.size();
    let m = p.resolution();
    let (x, residual, iterations) = power_iterate(p, vec![1.0 / n as f64; n], tol)?;
    let density = GridDensity::from_probabilities(m, &x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut start_spread: f64 = 0.0;
    for _ in 0..EXTRA_STARTS {
        let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let total: f64 = w.iter().sum();
        let start = w.into_iter().map(|v| v / total).collect();
        let (y, _, _) = power_iterate(p, start, tol)?;
        let other = GridDensity::from_probabilities(m, &y)?;
        start_spread = start_spread.max(density.l1_distance(&other));
    }
    Ok(StationaryDensity {
        unique: start_spread <= 1e3 * tol,
        density,
        residual,
        iterations,
        start_spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::baker_map;
    use crate::transfer::ulam_matrix;

    #[test]
    fn baker_density_is_uniform() {
        let p = ulam_matrix(&baker_map(), 16, 16, 0).unwrap();
        let s = stationary_density(&p, 1e-12).unwrap();
        assert!(s.density.l1_distance(&GridDensity::uniform(16)) < 1e-12);
        assert!(s.unique);
    }

    /// Two interleaved invariant blocks (even and odd cells), uniform inside each.
    fn two_blocks(m: usize) -> UlamMatrix {
        let n = m * m;
        let half = (n / 2) as f64;
        let mut t = Vec::new();
        for i in 0..n {
            for j in (i % 2..n).step_by(2) {
                t.push((i, j, 1.0 / half));
            }
        }
        UlamMatrix::from_triplets(m, &t).unwrap()
    }

    #[test]
    fn reducible_chain_is_not_unique() {
        let s = stationary_density(&two_blocks(4), 1e-10).unwrap();
        assert!(!s.unique);
        assert!(s.start_spread > 1e-3);
    }
}
