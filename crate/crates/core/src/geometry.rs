//! Planar primitives: points, graph polylines and curvilinear strips of the
//! unit square.

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};

pub type Point = Vector2<f64>;
pub type Mat2 = Matrix2<f64>;

/// Geometric membership tolerance.
pub const GEOM_TOL: f64 = 1e-12;
/// Area tolerance for the cover/overlap axioms.
pub const AREA_TOL: f64 = 1e-9;

pub fn point(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

pub fn in_square(p: Point, tol: f64) -> bool {
    p.x >= -tol && p.x <= 1.0 + tol && p.y >= -tol && p.y <= 1.0 + tol
}

/// A piecewise-linear graph `s -> g(s)` over strictly increasing parameters.
///
/// Vertical strips use `s = y`, `g = x`; horizontal strips use `s = x`, `g = y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphPolyline {
    params: Vec<f64>,
    values: Vec<f64>,
}

impl GraphPolyline {
    pub fn new(params: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if params.len() < 2 || params.len() != values.len() {
            return Err(GhmError::InvalidParameter(format!(
                "polyline needs >= 2 matching vertices (got {} params, {} values)",
                params.len(),
                values.len()
            )));
        }
        if params.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(GhmError::InvalidParameter(
                "polyline parameters must be strictly increasing".into(),
            ));
        }
        if params.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(GhmError::InvalidParameter("polyline has non-finite vertex".into()));
        }
        Ok(Self { params, values })
    }

    /// Constant graph over `[0, 1]`.
    pub fn constant(value: f64) -> Self {
        Self {
            params: vec![0.0, 1.0],
            values: vec![value, value],
        }
    }

    /// Straight graph over `[0, 1]` from `v0` to `v1`.
    pub fn segment(v0: f64, v1: f64) -> Self {
        Self {
            params: vec![0.0, 1.0],
            values: vec![v0, v1],
        }
    }

    /// Samples `f` at `count` equispaced parameters in `[0, 1]`.
    pub fn sample(count: usize, f: impl Fn(f64) -> f64) -> Self {
        let count = count.max(2);
        let params: Vec<f64> = (0..count).map(|i| i as f64 / (count - 1) as f64).collect();
        let values = params.iter().map(|&s| f(s)).collect();
        Self { params, values }
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn first_param(&self) -> f64 {
        self.params[0]
    }

    pub fn last_param(&self) -> f64 {
        self.params[self.params.len() - 1]
    }

    /// Linear interpolation; constant extrapolation outside the parameter range.
    pub fn eval(&self, s: f64) -> f64 {
        let p = &self.params;
        let n = p.len();
        if s <= p[0] {
            return self.values[0];
        }
        if s >= p[n - 1] {
            return self.values[n - 1];
        }
        let hi = p.partition_point(|&q| q <= s).min(n - 1);
        let lo = hi - 1;
        let t = (s - p[lo]) / (p[hi] - p[lo]);
        self.values[lo] + t * (self.values[hi] - self.values[lo])
    }

    /// Slope of the segment containing `s`.
    pub fn slope_at(&self, s: f64) -> f64 {
        let p = &self.params;
        let n = p.len();
        let hi = p.partition_point(|&q| q <= s).clamp(1, n - 1);
        let lo = hi - 1;
        (self.values[hi] - self.values[lo]) / (p[hi] - p[lo])
    }

    /// Largest absolute segment slope.
    pub fn max_abs_slope(&self) -> f64 {
        self.params
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(p, v)| ((v[1] - v[0]) / (p[1] - p[0])).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Re-evaluates on new parameters.
    pub fn resample(&self, params: &[f64]) -> Self {
        Self {
            params: params.to_vec(),
            values: params.iter().map(|&s| self.eval(s)).collect(),
        }
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            params: self.params.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Sup-norm distance between two graphs over the union of their vertices.
    ///
    /// Both graphs are piecewise linear, so the sup is attained at a vertex of
    /// one of them. This bounds the Hausdorff distance of the curves.
    pub fn sup_distance(&self, other: &GraphPolyline) -> f64 {
        merged_params(self, other)
            .into_iter()
            .map(|s| (self.eval(s) - other.eval(s)).abs())
            .fold(0.0, f64::max)
    }

    /// Integral over the parameter range (exact trapezoid).
    pub fn integral(&self) -> f64 {
        self.params
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(p, v)| 0.5 * (p[1] - p[0]) * (v[0] + v[1]))
            .sum()
    }

    /// True for a single segment over `[0, 1]`.
    pub fn is_segment(&self) -> bool {
        self.params.len() == 2 && self.params[0] == 0.0 && self.params[1] == 1.0
    }

    /// Drops vertices that lie within `tol` of the chord through their
    /// neighbours (slope-corridor sweep, linear time).
    pub fn simplified(&self, tol: f64) -> Self {
        let n = self.params.len();
        if n <= 2 {
            return self.clone();
        }
        let (p, v) = (&self.params, &self.values);
        let mut keep = vec![0usize];
        let mut anchor = 0;
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        let mut j = 1;
        while j < n {
            let dp = p[j] - p[anchor];
            let s_lo = (v[j] - tol - v[anchor]) / dp;
            let s_hi = (v[j] + tol - v[anchor]) / dp;
            let (nlo, nhi) = (lo.max(s_lo), hi.min(s_hi));
            if nlo > nhi {
                anchor = j - 1;
                keep.push(anchor);
                lo = f64::NEG_INFINITY;
                hi = f64::INFINITY;
                continue;
            }
            lo = nlo;
            hi = nhi;
            j += 1;
        }
        keep.push(n - 1);
        Self {
            params: keep.iter().map(|&i| p[i]).collect(),
            values: keep.iter().map(|&i| v[i]).collect(),
        }
    }
}

/// Sorted union of the vertex parameters of two graphs.
pub fn merged_params(a: &GraphPolyline, b: &GraphPolyline) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (pa, pb) = (a.params(), b.params());
    let (mut i, mut j) = (0, 0);
    while i < pa.len() || j < pb.len() {
        let next = if j >= pb.len() || (i < pa.len() && pa[i] <= pb[j]) {
            i += 1;
            pa[i - 1]
        } else {
            j += 1;
            pb[j - 1]
        };
        if out.last().is_none_or(|&last: &f64| next > last) {
            out.push(next);
        }
    }
    out
}

/// Sorted, deduplicated union of the vertex parameters of several graphs.
pub fn union_params(graphs: &[&GraphPolyline]) -> Vec<f64> {
    let mut out: Vec<f64> = graphs.iter().flat_map(|g| g.params().iter().copied()).collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Resamples monotone samples `(s_i, v_i)` (non-decreasing `s`) onto `grid`.
pub fn interpolate_monotone(samples: &[(f64, f64)], grid: &[f64]) -> Vec<f64> {
    let n = samples.len();
    grid.iter()
        .map(|&s| {
            if s <= samples[0].0 {
                return samples[0].1;
            }
            if s >= samples[n - 1].0 {
                return samples[n - 1].1;
            }
            let hi = samples.partition_point(|q| q.0 <= s).min(n - 1);
            let lo = hi - 1;
            let ds = samples[hi].0 - samples[lo].0;
            if ds <= 0.0 {
                return samples[hi].1;
            }
            let t = (s - samples[lo].0) / ds;
            samples[lo].1 + t * (samples[hi].1 - samples[lo].1)
        })
        .collect()
}

pub fn uniform_grid(count: usize) -> Vec<f64> {
    let count = count.max(2);
    (0..count).map(|i| i as f64 / (count - 1) as f64).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StripOrientation {
    /// Spans the full height; boundaries are graphs `x = g(y)`.
    Vertical,
    /// Spans the full width; boundaries are graphs `y = g(x)`.
    Horizontal,
}

/// A curvilinear strip bounded by two graph polylines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripRegion {
    orientation: StripOrientation,
    lower: GraphPolyline,
    upper: GraphPolyline,
}

impl StripRegion {
    pub fn new(orientation: StripOrientation, lower: GraphPolyline, upper: GraphPolyline) -> Self {
        Self {
            orientation,
            lower,
            upper,
        }
    }

    /// `[x0, x1] x [0, 1]`.
    pub fn vertical_band(x0: f64, x1: f64) -> Self {
        Self::new(
            StripOrientation::Vertical,
            GraphPolyline::constant(x0),
            GraphPolyline::constant(x1),
        )
    }

    /// `[0, 1] x [y0, y1]`.
    pub fn horizontal_band(y0: f64, y1: f64) -> Self {
        Self::new(
            StripOrientation::Horizontal,
            GraphPolyline::constant(y0),
            GraphPolyline::constant(y1),
        )
    }

    pub fn orientation(&self) -> StripOrientation {
        self.orientation
    }

    /// Left boundary (vertical) or bottom boundary (horizontal).
    pub fn lower(&self) -> &GraphPolyline {
        &self.lower
    }

    /// Right boundary (vertical) or top boundary (horizontal).
    pub fn upper(&self) -> &GraphPolyline {
        &self.upper
    }

    /// Largest transverse extent.
    pub fn width(&self) -> f64 {
        merged_params(&self.lower, &self.upper)
            .into_iter()
            .map(|s| self.upper.eval(s) - self.lower.eval(s))
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0)
    }

    /// Smallest transverse extent; negative when the boundaries cross.
    pub fn min_width(&self) -> f64 {
        merged_params(&self.lower, &self.upper)
            .into_iter()
            .map(|s| self.upper.eval(s) - self.lower.eval(s))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_empty(&self) -> bool {
        self.width() <= 0.0
    }

    pub fn area(&self) -> f64 {
        let params = merged_params(&self.lower, &self.upper);
        params
            .windows(2)
            .map(|w| {
                let a = self.upper.eval(w[0]) - self.lower.eval(w[0]);
                let b = self.upper.eval(w[1]) - self.lower.eval(w[1]);
                0.5 * (w[1] - w[0]) * (a + b)
            })
            .sum()
    }

    /// `(along, across)` coordinates of a point relative to this strip.
    fn split(&self, p: Point) -> (f64, f64) {
        match self.orientation {
            StripOrientation::Vertical => (p.y, p.x),
            StripOrientation::Horizontal => (p.x, p.y),
        }
    }

    fn join(&self, along: f64, across: f64) -> Point {
        match self.orientation {
            StripOrientation::Vertical => point(across, along),
            StripOrientation::Horizontal => point(along, across),
        }
    }

    /// Closed membership with tolerance.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let (s, t) = self.split(p);
        s >= -tol && s <= 1.0 + tol && t >= self.lower.eval(s) - tol && t <= self.upper.eval(s) + tol
    }

    /// Distance (transverse) from `p` to the nearer boundary graph.
    pub fn boundary_gap(&self, p: Point) -> f64 {
        let (s, t) = self.split(p);
        (t - self.lower.eval(s)).abs().min((self.upper.eval(s) - t).abs())
    }

    /// Transverse extent at parameter `s`.
    pub fn span_at(&self, s: f64) -> (f64, f64) {
        (self.lower.eval(s), self.upper.eval(s))
    }

    /// Point at parameter `along`, fraction `theta` of the way from lower to upper.
    pub fn point_at(&self, along: f64, theta: f64) -> Point {
        let (lo, hi) = self.span_at(along);
        self.join(along, lo + theta * (hi - lo))
    }

    /// Strip midline as a graph over the shared parameters.
    pub fn midline(&self) -> GraphPolyline {
        let params = merged_params(&self.lower, &self.upper);
        let values = params
            .iter()
            .map(|&s| 0.5 * (self.lower.eval(s) + self.upper.eval(s)))
            .collect();
        GraphPolyline { params, values }
    }

    pub fn max_abs_slope(&self) -> f64 {
        self.lower.max_abs_slope().max(self.upper.max_abs_slope())
    }

    /// Closed polygon outline in `(x, y)` coordinates.
    pub fn outline(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self
            .lower
            .params()
            .iter()
            .zip(self.lower.values())
            .map(|(&s, &t)| self.join(s, t))
            .collect();
        pts.extend(
            self.upper
                .params()
                .iter()
                .zip(self.upper.values())
                .rev()
                .map(|(&s, &t)| self.join(s, t)),
        );
        pts
    }

    /// True when `inner` lies inside `self` up to `tol`.
    pub fn contains_region(&self, inner: &StripRegion, tol: f64) -> bool {
        merged_params(&self.lower, &inner.lower)
            .into_iter()
            .chain(merged_params(&self.upper, &inner.upper))
            .all(|s| inner.lower.eval(s) >= self.lower.eval(s) - tol && inner.upper.eval(s) <= self.upper.eval(s) + tol)
    }
}

/// Converts a graph into `(x, y)` points for the given strip orientation.
pub fn graph_points(graph: &GraphPolyline, orientation: StripOrientation) -> Vec<Point> {
    graph
        .params()
        .iter()
        .zip(graph.values())
        .map(|(&s, &t)| match orientation {
            StripOrientation::Vertical => point(t, s),
            StripOrientation::Horizontal => point(s, t),
        })
        .collect()
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn directed_hausdorff(a: &[Point], b: &[Point]) -> f64 {
    a.iter()
        .map(|&p| {
            if b.len() == 1 {
                return (p - b[0]).norm();
            }
            b.windows(2)
                .map(|w| point_segment_distance(p, w[0], w[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance between two polylines, measured from the vertices of
/// each to the segments of the other. Quadratic cost; meant for moderate sizes.
pub fn hausdorff_distance(a: &[Point], b: &[Point]) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Clips a convex polygon to the slab `x0 <= x <= x1`.
pub fn clip_to_slab(poly: &[Point], x0: f64, x1: f64) -> Vec<Point> {
    let left = clip_half_plane(poly, |p| p.x - x0);
    clip_half_plane(&left, |p| x1 - p.x)
}

/// Clips a convex polygon to `y0 <= y <= y1`.
pub fn clip_to_rows(poly: &[Point], y0: f64, y1: f64) -> Vec<Point> {
    let lower = clip_half_plane(poly, |p| p.y - y0);
    clip_half_plane(&lower, |p| y1 - p.y)
}

/// Sutherland-Hodgman against `{p : f(p) >= 0}` for an affine `f`.
fn clip_half_plane(poly: &[Point], f: impl Fn(Point) -> f64) -> Vec<Point> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let cur = poly[i];
        let next = poly[(i + 1) % n];
        let (fc, fn_) = (f(cur), f(next));
        if fc >= 0.0 {
            out.push(cur);
        }
        if (fc >= 0.0) != (fn_ >= 0.0) {
            let t = fc / (fc - fn_);
            out.push(cur + (next - cur) * t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_interpolates_and_clamps() {
        let g = GraphPolyline::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(g.eval(0.25), 0.5);
        assert_eq!(g.eval(-1.0), 0.0);
        assert_eq!(g.eval(0.5), 1.0);
        assert_eq!(g.max_abs_slope(), 2.0);
    }

    #[test]
    fn rejects_non_monotone_params() {
        assert!(GraphPolyline::new(vec![0.0, 0.0, 1.0], vec![0.0; 3]).is_err());
        assert!(GraphPolyline::new(vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn strip_width_area_and_membership() {
        let s = StripRegion::vertical_band(0.25, 0.5);
        assert_eq!(s.width(), 0.25);
        assert!((s.area() - 0.25).abs() < 1e-15);
        assert!(s.contains(point(0.3, 0.9), 0.0));
        assert!(!s.contains(point(0.6, 0.9), 1e-12));
        let h = StripRegion::new(
            StripOrientation::Horizontal,
            GraphPolyline::segment(0.0, 0.5),
            GraphPolyline::segment(0.25, 0.75),
        );
        assert!(h.contains(point(1.0, 0.6), 0.0));
        assert!(!h.contains(point(0.0, 0.3), 0.0));
        assert!((h.area() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn sup_distance_sees_interior_vertices() {
        let a = GraphPolyline::segment(0.0, 0.0);
        let b = GraphPolyline::new(vec![0.0, 0.5, 1.0], vec![0.0, 0.3, 0.0]).unwrap();
        assert!((a.sup_distance(&b) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn hausdorff_of_parallel_segments() {
        let a = [point(0.0, 0.0), point(0.0, 1.0)];
        let b = [point(0.1, 0.0), point(0.1, 1.0)];
        assert!((hausdorff_distance(&a, &b) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn slab_clip_of_unit_square() {
        let sq = [point(0.0, 0.0), point(1.0, 0.0), point(1.0, 1.0), point(0.0, 1.0)];
        let c = clip_to_slab(&sq, 0.25, 0.5);
        let xmin = c.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
        let xmax = c.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!((xmin, xmax), (0.25, 0.5));
    }
}
