use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};
use crate::geometry::{clip_to_rows, clip_to_slab, point, GraphPolyline, Point};
use crate::map::{Branch, GhmMap};

/// A set of cells of the uniform `m x m` grid; cell `(ix, iy)` has index
/// `iy * m + ix`, row 0 at the bottom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSet {
    m: usize,
    cells: Vec<bool>,
}

impl CellSet {
    pub fn full(m: usize) -> Self {
        Self {
            m,
            cells: vec![true; m * m],
        }
    }

    pub fn from_mask(m: usize, cells: Vec<bool>) -> Self {
        assert_eq!(cells.len(), m * m);
        Self { m, cells }
    }

    pub fn resolution(&self) -> usize {
        self.m
    }

    pub fn mask(&self) -> &[bool] {
        &self.cells
    }

    pub fn contains(&self, ix: usize, iy: usize) -> bool {
        self.cells[iy * self.m + ix]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn area_fraction(&self) -> f64 {
        self.count() as f64 / self.cells.len() as f64
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i]).collect()
    }

    pub fn is_subset_of(&self, other: &CellSet) -> bool {
        self.m == other.m && self.cells.iter().zip(&other.cells).all(|(&a, &b)| !a || b)
    }

    /// Cells of a grid `factor` times coarser that contain a marked cell.
    pub fn coarsen(&self, factor: usize) -> CellSet {
        let mc = self.m / factor;
        let mut out = vec![false; mc * mc];
        for iy in 0..self.m {
            for ix in 0..self.m {
                if self.contains(ix, iy) {
                    out[(iy / factor) * mc + ix / factor] = true;
                }
            }
        }
        CellSet { m: mc, cells: out }
    }
}

const EDGE_TOL: f64 = 1e-12;

/// Rows `r` whose open band `(r/m, (r+1)/m)` meets `[y0, y1]`.
fn row_range(y0: f64, y1: f64, m: usize) -> std::ops::Range<usize> {
    let mf = m as f64;
    let lo = ((y0 * mf + EDGE_TOL).floor().max(0.0) as usize).min(m);
    let hi = ((y1 * mf - EDGE_TOL).ceil().max(0.0) as usize).min(m);
    lo..hi.max(lo)
}

fn graph_range(g: &GraphPolyline, x0: f64, x1: f64) -> (f64, f64) {
    let mut lo = g.eval(x0).min(g.eval(x1));
    let mut hi = g.eval(x0).max(g.eval(x1));
    for (&s, &v) in g.params().iter().zip(g.values()) {
        if s > x0 && s < x1 {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo, hi)
}

fn depth_one(map: &GhmMap, m: usize) -> Vec<bool> {
    let mut cells = vec![false; m * m];
    let mf = m as f64;
    for b in map.branches() {
        let img = b.image();
        for ix in 0..m {
            let (x0, x1) = (ix as f64 / mf, (ix + 1) as f64 / mf);
            let (lo, _) = graph_range(img.lower(), x0, x1);
            let (_, hi) = graph_range(img.upper(), x0, x1);
            for iy in row_range(lo, hi, m) {
                cells[iy * m + ix] = true;
            }
        }
    }
    cells
}

/// Preimage of a cell under `branch`, clipped to the domain's bounding slab.
fn cell_preimage(branch: &Branch, corners: &[Point; 4]) -> Option<Vec<Point>> {
    let poly: Option<Vec<Point>> = corners.iter().map(|&c| branch.inverse_unchecked(c)).collect();
    let d = branch.domain();
    let clipped = clip_to_slab(&poly?, d.lower().min_value(), d.upper().max_value());
    let clipped = clip_to_rows(&clipped, 0.0, 1.0);
    (clipped.len() >= 3).then_some(clipped)
}

fn meets(poly: &[Point], prev: &[bool], m: usize) -> bool {
    let mf = m as f64;
    let (xmin, xmax) = poly
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.x), b.max(p.x)));
    for ix in row_range(xmin, xmax, m) {
        let slab = clip_to_slab(poly, ix as f64 / mf, (ix + 1) as f64 / mf);
        if slab.is_empty() {
            continue;
        }
        let (ylo, yhi) = slab
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.y), b.max(p.y)));
        if row_range(ylo, yhi, m).any(|iy| prev[iy * m + ix]) {
            return true;
        }
    }
    false
}

/// Grid cells meeting the depth-`n` approximation `∪ U_[a]_n` of the attractor.
///
/// Depth 1 is exact. Deeper levels keep a cell of the previous level when
/// the preimage of the cell under some branch meets a previous-level cell,
/// which is an outer approximation and antitone in depth by construction.
pub fn attractor_cells(map: &GhmMap, depth: usize, m: usize) -> Result<CellSet> {
    if depth == 0 || m < 8 {
        return Err(GhmError::InvalidParameter(format!(
            "attractor needs depth >= 1 and m >= 8 (got depth {depth}, m {m})"
        )));
    }
    let mut cells = depth_one(map, m);
    let mf = m as f64;
    for _ in 1..depth {
        let prev = cells;
        cells = (0..m * m)
            .into_par_iter()
            .map(|c| {
                if !prev[c] {
                    return false;
                }
                let (ix, iy) = ((c % m) as f64, (c / m) as f64);
                let corners = [
                    point(ix / mf, iy / mf),
                    point((ix + 1.0) / mf, iy / mf),
                    point((ix + 1.0) / mf, (iy + 1.0) / mf),
                    point(ix / mf, (iy + 1.0) / mf),
                ];
                map.branches()
                    .iter()
                    .any(|b| cell_preimage(b, &corners).is_some_and(|poly| meets(&poly, &prev, m)))
            })
            .collect();
    }
    Ok(CellSet::from_mask(m, cells))
}
