use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};
use crate::geometry::{point, Mat2, Point};
use crate::map::GhmMap;

/// Largest admissible preimage tree, `n_branches^n_max`.
pub const TREE_BUDGET: f64 = 1e6;

/// Half-length of the projection of `D (unit disk)` onto `v`, i.e. `|D^T v|`.
pub fn eta_of(d: &Mat2, v: Point) -> f64 {
    (d.transpose() * v).norm()
}

/// `eta(y, v)` for the branch containing `y` in its interior.
pub fn eta(map: &GhmMap, y: Point, v: Point) -> Result<f64> {
    if (v.norm() - 1.0).abs() > 1e-12 {
        return Err(GhmError::InvalidParameter(format!(
            "direction must be a unit vector (|v| = {})",
            v.norm()
        )));
    }
    Ok(eta_of(&map.differential(y)?.matrix, v))
}

/// Sampled `b_mu` data for iterates `1..=n_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub mu: f64,
    pub x_res: usize,
    pub angle_res: usize,
    pub n_max: usize,
    /// `b_mu(F)(x, v)` at base point `(ix + 1/2, iy + 1/2) / x_res` and angle
    /// `j pi / angle_res`, stored at `(iy * x_res + ix) * angle_res + j`.
    pub field: Vec<f64>,
    /// `sup b_mu(F^n)` for `n = 1..=n_max`.
    pub sup_per_n: Vec<f64>,
    /// `sup_per_n[n]^(1/n)`.
    pub beta_sequence: Vec<f64>,
    /// True when the last entry of `beta_sequence` is below one.
    pub verdict: bool,
    /// Relative change of `sup b_mu(F)` when both resolutions are doubled.
    pub refinement_change: Option<f64>,
}

impl ExpansionReport {
    pub fn base_point(&self, ix: usize, iy: usize) -> Point {
        grid_point(self.x_res, ix, iy)
    }

    pub fn direction(&self, j: usize) -> Point {
        direction(self.angle_res, j)
    }

    /// Largest violation of `sup_{m+n} <= sup_m * sup_n`, relative to the bound.
    pub fn submultiplicativity_defect(&self) -> f64 {
        let s = &self.sup_per_n;
        let mut worst = f64::NEG_INFINITY;
        for a in 1..=s.len() {
            for b in 1..=s.len() - a {
                let bound = s[a - 1] * s[b - 1];
                worst = worst.max(s[a + b - 1] - bound);
            }
        }
        worst
    }
}

/// Base point inside cell `(ix, iy)` at an irrational offset, so that no
/// base point lies on a rational line shared by two image boundaries.
fn grid_point(x_res: usize, ix: usize, iy: usize) -> Point {
    const OFFSET: (f64, f64) = (0.618_033_988_749_894_9, 0.414_213_562_373_095_1);
    let r = x_res as f64;
    point((ix as f64 + OFFSET.0) / r, (iy as f64 + OFFSET.1) / r)
}

fn direction(angle_res: usize, j: usize) -> Point {
    let t = j as f64 * PI / angle_res as f64;
    point(t.cos(), t.sin())
}

/// Adds `1 / (Jac F^d(y) eta_d(y, v)^(2 mu))` over the depth-`d` preimage
/// tree of `x` into `acc[d - 1][j]`.
fn accumulate(map: &GhmMap, mu: f64, x: Point, dirs: &[Point], n_max: usize, acc: &mut [Vec<f64>]) {
    let mut stack: Vec<(Point, Mat2, usize)> = vec![(x, Mat2::identity(), 0)];
    while let Some((w, m, depth)) = stack.pop() {
        if depth == n_max {
            continue;
        }
        for b in map.branches() {
            let Some(y) = b.pullback(w) else { continue };
            let mm = m * b.differential(y);
            let jac = mm.determinant().abs();
            let row = &mut acc[depth];
            for (j, &v) in dirs.iter().enumerate() {
                row[j] += 1.0 / (jac * eta_of(&mm, v).powf(2.0 * mu));
            }
            stack.push((y, mm, depth + 1));
        }
    }
}

fn check(map: &GhmMap, mu: f64, n_max: usize, x_res: usize, angle_res: usize) -> Result<()> {
    if !(mu >= 0.0) {
        return Err(GhmError::InvalidParameter(format!("mu = {mu} must be nonnegative")));
    }
    if n_max == 0 || x_res == 0 || angle_res == 0 {
        return Err(GhmError::InvalidParameter(
            "n_max and resolutions must be positive".into(),
        ));
    }
    let size = (map.len() as f64).powi(n_max as i32);
    if size > TREE_BUDGET {
        return Err(GhmError::TreeBudgetExceeded {
            size,
            budget: TREE_BUDGET,
        });
    }
    Ok(())
}

/// `b_mu(F^n)(x, v)` at a single point and direction.
pub fn b_mu_at(map: &GhmMap, mu: f64, x: Point, v: Point, n: usize) -> Result<f64> {
    check(map, mu, n, 1, 1)?;
    let mut acc = vec![vec![0.0]; n];
    accumulate(map, mu, x, &[v], n, &mut acc);
    Ok(acc[n - 1][0])
}

/// Sup of `b_mu(F^n)` for `n = 1..=n_max` over `x_res^2` base points, one per
/// cell, and `angle_res` equispaced directions in `[0, pi)`.
pub fn beta_mu_estimate(
    map: &GhmMap,
    mu: f64,
    n_max: usize,
    x_res: usize,
    angle_res: usize,
) -> Result<ExpansionReport> {
    check(map, mu, n_max, x_res, angle_res)?;
    let dirs: Vec<Point> = (0..angle_res).map(|j| direction(angle_res, j)).collect();
    let per_point: Vec<Vec<Vec<f64>>> = (0..x_res * x_res)
        .into_par_iter()
        .map(|c| {
            let x = grid_point(x_res, c % x_res, c / x_res);
            let mut acc = vec![vec![0.0; angle_res]; n_max];
            accumulate(map, mu, x, &dirs, n_max, &mut acc);
            acc
        })
        .collect();
    let sup_per_n: Vec<f64> = (0..n_max)
        .map(|d| {
            per_point
                .iter()
                .flat_map(|acc| acc[d].iter().copied())
                .fold(0.0, f64::max)
        })
        .collect();
    let field = per_point.iter().flat_map(|acc| acc[0].iter().copied()).collect();
    let beta_sequence: Vec<f64> = sup_per_n
        .iter()
        .enumerate()
        .map(|(i, s)| s.powf(1.0 / (i + 1) as f64))
        .collect();
    Ok(ExpansionReport {
        mu,
        x_res,
        angle_res,
        n_max,
        field,
        verdict: beta_sequence.last().is_some_and(|&b| b < 1.0),
        sup_per_n,
        beta_sequence,
        refinement_change: None,
    })
}

/// The `n = 1` slice of [`beta_mu_estimate`].
pub fn b_mu_field(map: &GhmMap, mu: f64, x_res: usize, angle_res: usize) -> Result<ExpansionReport> {
    beta_mu_estimate(map, mu, 1, x_res, angle_res)
}

/// Relative change of `sup b_mu(F)` between the `(x_res, angle_res)` grid and
/// the doubled grid.
pub fn refinement_change(map: &GhmMap, mu: f64, x_res: usize, angle_res: usize) -> Result<f64> {
    let coarse = b_mu_field(map, mu, x_res, angle_res)?.sup_per_n[0];
    let fine = b_mu_field(map, mu, 2 * x_res, 2 * angle_res)?.sup_per_n[0];
    Ok((fine - coarse).abs() / coarse.abs().max(f64::MIN_POSITIVE))
}
