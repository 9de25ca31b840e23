use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};
use crate::geometry::point;
use crate::map::GhmMap;

const ROW_SUM_TOL: f64 = 1e-9;

/// Sparse Ulam transition matrix in compressed-row form, with its transpose.
///
/// `P[i][j]` is the fraction of cell `i`'s mass that lands in cell `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UlamMatrix {
    m: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    t_ptr: Vec<usize>,
    t_rows: Vec<usize>,
    t_vals: Vec<f64>,
}

impl UlamMatrix {
    /// Builds a matrix from `(row, col, value)` triplets over `m^2` states.
    /// Duplicate entries are summed; every row must sum to one.
    pub fn from_triplets(m: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let n = m * m;
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in triplets {
            if i >= n || j >= n || !(0.0..=1.0 + ROW_SUM_TOL).contains(&v) {
                return Err(GhmError::InvalidParameter(format!(
                    "bad transition entry ({i}, {j}, {v})"
                )));
            }
            rows[i].push((j, v));
        }
        for row in &mut rows {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for &(j, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += v,
                    _ => merged.push((j, v)),
                }
            }
            *row = merged;
        }
        Self::from_rows(m, rows)
    }

    fn from_rows(m: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n = m * m;
        for (i, row) in rows.iter().enumerate() {
            let sum: f64 = row.iter().map(|e| e.1).sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(GhmError::RowSum { row: i, sum });
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in &rows {
            for &(j, v) in row {
                cols.push(j);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        let mut counts = vec![0usize; n + 1];
        for &j in &cols {
            counts[j + 1] += 1;
        }
        for j in 0..n {
            counts[j + 1] += counts[j];
        }
        let t_ptr = counts.clone();
        let mut fill = counts;
        let mut t_rows = vec![0; cols.len()];
        let mut t_vals = vec![0.0; cols.len()];
        for i in 0..n {
            for k in row_ptr[i]..row_ptr[i + 1] {
                let j = cols[k];
                t_rows[fill[j]] = i;
                t_vals[fill[j]] = vals[k];
                fill[j] += 1;
            }
        }
        Ok(Self {
            m,
            row_ptr,
            cols,
            vals,
            t_ptr,
            t_rows,
            t_vals,
        })
    }

    pub fn resolution(&self) -> usize {
        self.m
    }

    /// Number of states, `m^2`.
    pub fn size(&self) -> usize {
        self.m * self.m
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Nonzero entries of row `i` as `(col, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.cols[k], self.vals[k]))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|e| e.0 == j).map_or(0.0, |e| e.1)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.size()).map(|i| self.row(i).map(|e| e.1).sum()).collect()
    }

    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        (0..self.size())
            .flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v)))
            .collect()
    }

    /// Row-vector product `x P`, parallel over destination cells.
    pub fn left_mul(&self, x: &[f64]) -> Vec<f64> {
        (0..self.size())
            .into_par_iter()
            .map(|j| {
                (self.t_ptr[j]..self.t_ptr[j + 1])
                    .map(|k| x[self.t_rows[k]] * self.t_vals[k])
                    .sum()
            })
            .collect()
    }

    /// Column-vector product `P x`.
    pub fn right_mul(&self, x: &[f64]) -> Vec<f64> {
        (0..self.size())
            .into_par_iter()
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    /// Largest entrywise difference with another matrix of the same size.
    pub fn sup_difference(&self, other: &UlamMatrix) -> f64 {
        assert_eq!(self.size(), other.size());
        (0..self.size())
            .map(|i| {
                let mut worst: f64 = 0.0;
                for (j, v) in self.row(i) {
                    worst = worst.max((v - other.get(i, j)).abs());
                }
                for (j, v) in other.row(i) {
                    worst = worst.max((v - self.get(i, j)).abs());
                }
                worst
            })
            .fold(0.0, f64::max)
    }
}

/// Ulam matrix on the `m x m` grid from `samples_per_cell` jittered-stratified
/// samples per cell (`ceil(sqrt(s))^2` strata, one point each).
///
/// Every cell draws from its own stream of the seeded generator, so the
/// result does not depend on the number of threads.
pub fn ulam_matrix(map: &GhmMap, m: usize, samples_per_cell: usize, seed: u64) -> Result<UlamMatrix> {
    if m < 2 || samples_per_cell == 0 {
        return Err(GhmError::InvalidParameter(format!(
            "ulam needs m >= 2 and samples >= 1 (got m {m}, samples {samples_per_cell})"
        )));
    }
    let k = (samples_per_cell as f64).sqrt().ceil() as usize;
    let mf = m as f64;
    let rows: Vec<Vec<(usize, f64)>> = (0..m * m)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let (ix, iy) = ((c % m) as f64, (c / m) as f64);
            let mut hits: Vec<usize> = Vec::with_capacity(k * k);
            for a in 0..k {
                for b in 0..k {
                    let u = (a as f64 + rng.random::<f64>()) / k as f64;
                    let v = (b as f64 + rng.random::<f64>()) / k as f64;
                    let z = point((ix + u) / mf, (iy + v) / mf);
                    let w = map.apply(z).ok_or(GhmError::EscapedMass { cell: c })?;
                    if !(w.x > -1e-9 && w.x < 1.0 + 1e-9 && w.y > -1e-9 && w.y < 1.0 + 1e-9) {
                        return Err(GhmError::EscapedMass { cell: c });
                    }
                    let jx = ((w.x * mf).floor().max(0.0) as usize).min(m - 1);
                    let jy = ((w.y * mf).floor().max(0.0) as usize).min(m - 1);
                    hits.push(jy * m + jx);
                }
            }
            hits.sort_unstable();
            let total = hits.len() as f64;
            let mut row: Vec<(usize, f64)> = Vec::new();
            for h in hits {
                match row.last_mut() {
                    Some(last) if last.0 == h => last.1 += 1.0,
                    _ => row.push((h, 1.0)),
                }
            }
            for e in &mut row {
                e.1 /= total;
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    UlamMatrix::from_rows(m, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{baker_map, three_strip_map};

    #[test]
    fn baker_two_by_two_by_hand() {
        let p = ulam_matrix(&baker_map(), 2, 16, 0).unwrap();
        // Cell (0,0) = [0,1/2]^2 maps onto the bottom quarter-row.
        assert_eq!(p.get(0, 0), 0.5);
        assert_eq!(p.get(0, 1), 0.5);
        // Cell (1,1) goes to the top row.
        assert_eq!(p.get(3, 2), 0.5);
        assert_eq!(p.get(3, 3), 0.5);
        assert_eq!(p.row(0).count(), 2);
    }

    #[test]
    fn rows_sum_to_one() {
        let p = ulam_matrix(&three_strip_map(), 16, 64, 3).unwrap();
        assert!(p.row_sums().iter().all(|s| (s - 1.0).abs() < 1e-12));
        let x: Vec<f64> = vec![1.0; p.size()];
        assert!(p.right_mul(&x).iter().all(|s| (s - 1.0).abs() < 1e-12));
    }

    #[test]
    fn transpose_product_matches() {
        let p = ulam_matrix(&three_strip_map(), 8, 16, 1).unwrap();
        let x: Vec<f64> = (0..64).map(|i| (i as f64).sin().abs()).collect();
        let y = p.left_mul(&x);
        let mut direct = vec![0.0; 64];
        for (i, j, v) in p.triplets() {
            direct[j] += x[i] * v;
        }
        for (a, b) in y.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn triplets_validate_rows() {
        assert!(matches!(
            UlamMatrix::from_triplets(1, &[(0, 0, 0.5)]),
            Err(GhmError::RowSum { row: 0, .. })
        ));
        let p = UlamMatrix::from_triplets(1, &[(0, 0, 0.5), (0, 0, 0.5)]).unwrap();
        assert_eq!(p.get(0, 0), 1.0);
    }
}
