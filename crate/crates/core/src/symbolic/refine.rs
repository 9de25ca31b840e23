use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};
use crate::geometry::{
    graph_points, interpolate_monotone, point, uniform_grid, GraphPolyline, Point, StripOrientation, StripRegion,
};
use crate::map::{Branch, GhmMap};

use super::word::{Orientation, Word};

/// Vertices closer than this to a chord are dropped after each refinement.
const SIMPLIFY_TOL: f64 = 1e-15;
const MAX_LOG2_POINTS: usize = 14;

/// Boundary sample count at refinement level `level >= 1`: `2^(5 + level)`
/// segments, capped at `2^14`.
pub fn refinement_resolution(level: usize) -> usize {
    (1usize << (5 + level.max(1)).min(MAX_LOG2_POINTS)) + 1
}

/// `S_[a]_n` (stable words) or `U_[a]_n` (unstable words).
///
/// Stable strips are pulled back, `S_[a]_n = F_{a_1}^{-1}(S_[sigma a]_{n-1})`;
/// unstable strips are pushed forward,
/// `U_[a]_n = F_{a_1}(U_[sigma a]_{n-1} ∩ S_{a_1})`.
pub fn refine_strip(map: &GhmMap, word: &Word) -> Result<StripRegion> {
    let idx = word.indices(map)?;
    let n = idx.len();
    let last = &map.branches()[idx[n - 1]];
    let mut strip = match word.orientation() {
        Orientation::Stable => last.domain().clone(),
        Orientation::Unstable => last.image().clone(),
    };
    for (level, &i) in idx[..n - 1].iter().rev().enumerate() {
        let branch = &map.branches()[i];
        let count = refinement_resolution(level + 2);
        strip = match word.orientation() {
            Orientation::Stable => pull_back(branch, &strip, count)?,
            Orientation::Unstable => push_forward(branch, &strip, count)?,
        };
        if strip.min_width() <= 0.0 {
            return Err(GhmError::EmptyStrip(word.symbols().to_vec()));
        }
    }
    Ok(strip)
}

/// Root of an increasing function on `[lo, hi]` by bisection to machine precision.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    if f(lo) >= 0.0 {
        return lo;
    }
    if f(hi) <= 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Pulls the graph `x' = g(y')` back through `branch` to a graph `x = h(y)`
/// inside the branch domain.
fn pull_back_graph(branch: &Branch, g: &GraphPolyline, count: usize) -> Result<GraphPolyline> {
    let count = if branch.is_affine() && g.is_segment() { 2 } else { count };
    let params = uniform_grid(count);
    let values = params
        .iter()
        .map(|&y| {
            let (xl, xr) = branch.domain().span_at(y);
            bisect(xl, xr, |x| {
                let w = branch.forward(point(x, y));
                w.x - g.eval(w.y)
            })
        })
        .collect();
    Ok(GraphPolyline::new(params, values)?.simplified(SIMPLIFY_TOL))
}

fn pull_back(branch: &Branch, strip: &StripRegion, count: usize) -> Result<StripRegion> {
    Ok(StripRegion::new(
        StripOrientation::Vertical,
        pull_back_graph(branch, strip.lower(), count)?,
        pull_back_graph(branch, strip.upper(), count)?,
    ))
}

/// Abscissa where the graph `y = g(x)` meets the domain edge `x = h(y)`.
fn crossing(g: &GraphPolyline, h: &GraphPolyline) -> f64 {
    bisect(0.0, 1.0, |x| x - h.eval(g.eval(x)))
}

/// Pushes the part of `y = g(x)` inside the branch domain forward.
fn push_forward_graph(branch: &Branch, g: &GraphPolyline, count: usize) -> Result<GraphPolyline> {
    let xa = crossing(g, branch.domain().lower());
    let xb = crossing(g, branch.domain().upper());
    let count = if branch.is_affine() && g.is_segment() { 2 } else { count };
    let mut samples: Vec<(f64, f64)> = (0..count)
        .map(|i| {
            let x = xa + (xb - xa) * i as f64 / (count - 1) as f64;
            let w = branch.forward(point(x, g.eval(x)));
            (w.x.clamp(0.0, 1.0), w.y)
        })
        .collect();
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    samples.dedup_by(|a, b| a.0 == b.0);
    let graph = if count == 2 && samples.len() == 2 {
        let (a, b) = (samples[0], samples[1]);
        let slope = (b.1 - a.1) / (b.0 - a.0);
        GraphPolyline::segment(a.1 - slope * a.0, a.1 + slope * (1.0 - a.0))
    } else {
        let grid = uniform_grid(count.max(2));
        let values = interpolate_monotone(&samples, &grid);
        GraphPolyline::new(grid, values)?
    };
    Ok(graph.simplified(SIMPLIFY_TOL))
}

fn push_forward(branch: &Branch, strip: &StripRegion, count: usize) -> Result<StripRegion> {
    let a = push_forward_graph(branch, strip.lower(), count)?;
    let b = push_forward_graph(branch, strip.upper(), count)?;
    let (lower, upper) = if a.eval(0.5) <= b.eval(0.5) { (a, b) } else { (b, a) };
    Ok(StripRegion::new(StripOrientation::Horizontal, lower, upper))
}

/// Midline of a refined strip, standing in for a stable or unstable manifold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldApprox {
    pub word: Word,
    pub depth: usize,
    /// True when the supplied word was shorter than `depth` and was repeated.
    pub periodic_extension: bool,
    pub orientation: StripOrientation,
    pub polyline: GraphPolyline,
    /// Width of the refined strip the midline was taken from.
    pub strip_width: f64,
}

impl ManifoldApprox {
    pub fn points(&self) -> Vec<Point> {
        graph_points(&self.polyline, self.orientation)
    }
}

pub fn manifold_approx(map: &GhmMap, word: &Word, depth: usize) -> Result<ManifoldApprox> {
    if depth == 0 {
        return Err(GhmError::InvalidParameter("depth must be at least 1".into()));
    }
    let periodic_extension = word.len() < depth;
    let word = word.periodic_extension(depth)?;
    let strip = refine_strip(map, &word)?;
    Ok(ManifoldApprox {
        periodic_extension,
        depth,
        orientation: strip.orientation(),
        polyline: strip.midline(),
        strip_width: strip.width(),
        word,
    })
}
