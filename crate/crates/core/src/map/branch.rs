use std::fmt;
use std::sync::Arc;

use crate::error::{GhmError, Result};
use crate::geometry::{
    interpolate_monotone, point, uniform_grid, GraphPolyline, Mat2, Point, StripOrientation, StripRegion, GEOM_TOL,
};

/// A non-affine branch supplied as callables.
///
/// `inverse` may extrapolate outside the image; membership is checked by the
/// caller against the branch domain.
pub trait SmoothBranchMap: Send + Sync + fmt::Debug {
    fn forward(&self, z: Point) -> Point;
    fn differential(&self, z: Point) -> Mat2;
    fn inverse(&self, w: Point) -> Option<Point>;
}

#[derive(Clone, Debug)]
pub enum BranchKind {
    /// `z -> linear * z + translation`.
    Affine {
        linear: Mat2,
        translation: Point,
    },
    Smooth(Arc<dyn SmoothBranchMap>),
}

/// One branch `F_i : S_i -> U_i` of a horseshoe map.
#[derive(Clone, Debug)]
pub struct Branch {
    id: usize,
    domain: StripRegion,
    kind: BranchKind,
    image: StripRegion,
    inverse_linear: Option<Mat2>,
}

const IMAGE_SAMPLES: usize = 257;
const SPAN_TOL: f64 = 1e-9;

impl Branch {
    pub fn affine(id: usize, domain: StripRegion, linear: Mat2, translation: Point) -> Result<Self> {
        let inv = linear.try_inverse().ok_or_else(|| GhmError::InvalidBranch {
            id,
            reason: "singular linear part".into(),
        })?;
        Self::build(id, domain, BranchKind::Affine { linear, translation }, Some(inv))
    }

    pub fn smooth(id: usize, domain: StripRegion, map: Arc<dyn SmoothBranchMap>) -> Result<Self> {
        Self::build(id, domain, BranchKind::Smooth(map), None)
    }

    fn build(id: usize, domain: StripRegion, kind: BranchKind, inverse_linear: Option<Mat2>) -> Result<Self> {
        if id == 0 {
            return Err(GhmError::InvalidBranch {
                id,
                reason: "branch ids are positive".into(),
            });
        }
        if domain.orientation() != StripOrientation::Vertical {
            return Err(GhmError::InvalidBranch {
                id,
                reason: "domain must be a vertical strip".into(),
            });
        }
        if domain.min_width() <= 0.0 {
            return Err(GhmError::InvalidBranch {
                id,
                reason: "domain boundaries touch or cross".into(),
            });
        }
        let mut branch = Self {
            id,
            domain,
            kind,
            image: StripRegion::horizontal_band(0.0, 1.0),
            inverse_linear,
        };
        branch.image = branch.compute_image()?;
        branch.check_injective()?;
        Ok(branch)
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn domain(&self) -> &StripRegion {
        &self.domain
    }

    pub fn image(&self) -> &StripRegion {
        &self.image
    }

    pub fn kind(&self) -> &BranchKind {
        &self.kind
    }

    pub fn is_affine(&self) -> bool {
        matches!(self.kind, BranchKind::Affine { .. })
    }

    pub fn forward(&self, z: Point) -> Point {
        match &self.kind {
            BranchKind::Affine { linear, translation } => linear * z + translation,
            BranchKind::Smooth(m) => m.forward(z),
        }
    }

    pub fn differential(&self, z: Point) -> Mat2 {
        match &self.kind {
            BranchKind::Affine { linear, .. } => *linear,
            BranchKind::Smooth(m) => m.differential(z),
        }
    }

    /// `|det DF(z)|`.
    pub fn jacobian(&self, z: Point) -> f64 {
        self.differential(z).determinant().abs()
    }

    /// Inverse branch evaluated without a domain check.
    pub fn inverse_unchecked(&self, w: Point) -> Option<Point> {
        match &self.kind {
            BranchKind::Affine { translation, .. } => {
                Some(self.inverse_linear.expect("affine inverse") * (w - translation))
            }
            BranchKind::Smooth(m) => m.inverse(w),
        }
    }

    /// The preimage of `w` in the (closed) domain, if any.
    pub fn pullback(&self, w: Point) -> Option<Point> {
        if !self.image.contains(w, GEOM_TOL) {
            return None;
        }
        let y = self.inverse_unchecked(w)?;
        self.domain.contains(y, GEOM_TOL).then_some(y)
    }

    /// Distance from `z` to the left/right domain boundary.
    pub fn boundary_gap(&self, z: Point) -> f64 {
        self.domain.boundary_gap(z)
    }

    /// Pushes the bottom and top edges of the domain forward and checks that
    /// the result is a horizontal strip spanning the full width.
    fn compute_image(&self) -> Result<StripRegion> {
        let bottom = self.push_edge(0.0)?;
        let top = self.push_edge(1.0)?;
        let (lower, upper) = if bottom.eval(0.5) <= top.eval(0.5) {
            (bottom, top)
        } else {
            (top, bottom)
        };
        let image = StripRegion::new(StripOrientation::Horizontal, lower, upper);
        if image.min_width() <= 0.0 {
            return Err(self.invalid("image boundaries touch or cross"));
        }
        if image.lower().min_value() < -SPAN_TOL || image.upper().max_value() > 1.0 + SPAN_TOL {
            return Err(GhmError::GeometryInfeasible {
                branch: self.id,
                top: image.upper().max_value().max(1.0 - image.lower().min_value()),
            });
        }
        // Left/right domain boundaries must land on x = 0 and x = 1.
        for (graph, target) in [(self.domain.lower(), 0.0), (self.domain.upper(), 1.0)] {
            for &y in graph.params().iter().chain(&[0.0, 0.5, 1.0]) {
                let w = self.forward(point(graph.eval(y), y));
                if (w.x - target).abs() > SPAN_TOL {
                    return Err(self.invalid(
                        "image does not span the full width (left/right domain edges must map to x = 0 and x = 1)",
                    ));
                }
            }
        }
        Ok(image)
    }

    fn push_edge(&self, y: f64) -> Result<GraphPolyline> {
        let (x0, x1) = self.domain.span_at(y);
        let count = if self.is_affine() { 2 } else { IMAGE_SAMPLES };
        let mut samples: Vec<(f64, f64)> = (0..count)
            .map(|i| {
                let x = x0 + (x1 - x0) * i as f64 / (count - 1) as f64;
                let w = self.forward(point(x, y));
                (w.x, w.y)
            })
            .collect();
        if samples[0].0 > samples[count - 1].0 {
            samples.reverse();
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(self.invalid("image edge is not a graph over x"));
        }
        if samples[0].0.abs() > SPAN_TOL || (samples[count - 1].0 - 1.0).abs() > SPAN_TOL {
            return Err(self.invalid("image does not span the full width"));
        }
        if self.is_affine() {
            let v0 = samples[0].1 - samples[0].0 * (samples[1].1 - samples[0].1) / (samples[1].0 - samples[0].0);
            let slope = (samples[1].1 - samples[0].1) / (samples[1].0 - samples[0].0);
            return Ok(GraphPolyline::segment(v0, v0 + slope));
        }
        let grid = uniform_grid(count);
        let values = interpolate_monotone(&samples, &grid);
        GraphPolyline::new(grid, values)
    }

    fn check_injective(&self) -> Result<()> {
        for i in 0..9 {
            for j in 0..9 {
                let y = j as f64 / 8.0;
                let z = self.domain.point_at(y, (i as f64 + 0.5) / 9.0);
                let back = self
                    .inverse_unchecked(self.forward(z))
                    .ok_or_else(|| self.invalid("inverse undefined on the image"))?;
                if (back - z).norm() > 1e-12 * (1.0 + z.norm()) {
                    return Err(self.invalid("inverse does not undo the forward map"));
                }
            }
        }
        Ok(())
    }

    fn invalid(&self, reason: &str) -> GhmError {
        GhmError::InvalidBranch {
            id: self.id,
            reason: reason.into(),
        }
    }
}
