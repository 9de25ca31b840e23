use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{point, Mat2, Point};

use super::ghm::GhmMap;

/// Relative slack allowed before a cone or expansion check counts as violated.
const CHECK_TOL: f64 = 1e-12;
const FAN: usize = 9;
const FD_STEP: f64 = 1e-5;

/// Outcome of sampling the cone conditions over every branch.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConeReport {
    pub samples_checked: usize,
    /// `DF(C^u_k)` not inside `C^u_k`, or `DF^{-1}(C^s_k)` not inside `C^s_k`.
    pub h1_violations: usize,
    /// Max-norm expansion below the declared `lambda`.
    pub h2_violations: usize,
    pub ratio_violations: usize,
    /// Finite-difference estimate of `sup |D^2 F_i|` (entrywise max).
    pub rc1_bound: f64,
    /// Smallest relative slack over all checks; negative means a violation.
    pub worst_margin: f64,
}

impl ConeReport {
    pub fn is_valid(&self) -> bool {
        self.h1_violations == 0 && self.h2_violations == 0 && self.ratio_violations == 0 && self.rc1_bound.is_finite()
    }

    fn empty() -> Self {
        Self {
            worst_margin: f64::INFINITY,
            ..Self::default()
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.samples_checked += other.samples_checked;
        self.h1_violations += other.h1_violations;
        self.h2_violations += other.h2_violations;
        self.ratio_violations += other.ratio_violations;
        self.rc1_bound = self.rc1_bound.max(other.rc1_bound);
        self.worst_margin = self.worst_margin.min(other.worst_margin);
        self
    }

    fn record(&mut self, margin: f64) -> bool {
        self.worst_margin = self.worst_margin.min(margin);
        margin < -CHECK_TOL
    }
}

/// Point `j` of the R2 low-discrepancy sequence, shifted by the seed.
fn r2_point(seed: u64, j: usize) -> (f64, f64) {
    const G: f64 = 1.324_717_957_244_746;
    let shift = (seed as f64 * 0.618_033_988_749_895).fract();
    let u = (shift + (j as f64 + 1.0) / G).fract();
    let v = (shift + (j as f64 + 1.0) / (G * G)).fract();
    (u, v)
}

fn sup_norm(v: Point) -> f64 {
    v.x.abs().max(v.y.abs())
}

/// Samples the cone conditions H1 and H2 (maximum norm), the three derivative
/// ratio bounds and the second-derivative bound on `samples` points per
/// branch. Violations are counted, never raised.
pub fn validate_hyperbolicity(map: &GhmMap, samples: usize, seed: u64) -> ConeReport {
    let k = map.k();
    let lambda = map.lambda();
    let fan: Vec<f64> = (0..FAN).map(|i| -k + 2.0 * k * i as f64 / (FAN - 1) as f64).collect();
    map.branches()
        .par_iter()
        .flat_map(|b| (0..samples.max(1)).into_par_iter().map(move |j| (b, j)))
        .map(|(b, j)| {
            let (u, v) = r2_point(seed, j);
            let theta = 1e-9 + (1.0 - 2e-9) * u;
            let z = b.domain().point_at(v, theta);
            let d = b.differential(z);
            let mut report = ConeReport::empty();
            report.samples_checked = 1;
            check_point(&mut report, d, k, lambda, &fan);
            report.rc1_bound = second_derivative_bound(b, z);
            report
        })
        .reduce(ConeReport::empty, ConeReport::merge)
}

fn check_point(report: &mut ConeReport, d: Mat2, k: f64, lambda: f64, fan: &[f64]) {
    let inv = d.try_inverse();
    for &s in fan {
        let vu = point(1.0, s);
        let w = d * vu;
        let slope_margin = if w.x == 0.0 { -1.0 } else { k - (w.y / w.x).abs() };
        if report.record(slope_margin / k) {
            report.h1_violations += 1;
        }
        if report.record(sup_norm(w) / (lambda * sup_norm(vu)) - 1.0) {
            report.h2_violations += 1;
        }

        let vs = point(s, 1.0);
        match inv {
            Some(inv) => {
                let w = inv * vs;
                let slope_margin = if w.y == 0.0 { -1.0 } else { k - (w.x / w.y).abs() };
                if report.record(slope_margin / k) {
                    report.h1_violations += 1;
                }
                if report.record(sup_norm(w) / (lambda * sup_norm(vs)) - 1.0) {
                    report.h2_violations += 1;
                }
            }
            None => {
                report.h1_violations += 1;
                report.h2_violations += 1;
                report.worst_margin = f64::NEG_INFINITY;
            }
        }
    }

    let dx1 = d[(0, 0)].abs();
    let bounds = [
        (d[(0, 1)].abs(), k),
        (d[(1, 0)].abs(), k),
        (d[(1, 1)].abs(), 1.0 / (lambda * lambda) + k * k),
    ];
    for (num, bound) in bounds {
        let margin = if dx1 == 0.0 { -1.0 } else { 1.0 - num / (dx1 * bound) };
        if report.record(margin) {
            report.ratio_violations += 1;
        }
    }
}

/// Central differences of `DF`, falling back to one-sided steps near the
/// domain boundary.
fn second_derivative_bound(b: &super::Branch, z: Point) -> f64 {
    let mut bound: f64 = 0.0;
    for e in [point(FD_STEP, 0.0), point(0.0, FD_STEP)] {
        let fwd = z + e;
        let bwd = z - e;
        let inside = |p: Point| b.domain().contains(p, 0.0);
        let diff = match (inside(fwd), inside(bwd)) {
            (true, true) => (b.differential(fwd) - b.differential(bwd)) / (2.0 * FD_STEP),
            (true, false) => (b.differential(fwd) - b.differential(z)) / FD_STEP,
            (false, true) => (b.differential(z) - b.differential(bwd)) / FD_STEP,
            (false, false) => continue,
        };
        bound = bound.max(diff.amax());
    }
    bound
}
