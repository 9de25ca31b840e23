use crate::error::{GhmError, Result};
use crate::geometry::{in_square, uniform_grid, union_params, GraphPolyline, Mat2, Point, AREA_TOL, GEOM_TOL};

use super::branch::Branch;

/// A finite generalized horseshoe map: ordered branches plus the cone
/// aperture `k` and the expansion constant `lambda`.
///
/// Immutable after construction and safe to share across threads.
#[derive(Clone, Debug)]
pub struct GhmMap {
    branches: Vec<Branch>,
    k: f64,
    lambda: f64,
    overlapping: bool,
}

/// Differential of the map at an interior point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Differential {
    pub branch_id: usize,
    pub matrix: Mat2,
    /// `|det DF(z)|`.
    pub det: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Preimage {
    pub branch_id: usize,
    pub point: Point,
    pub det: f64,
}

impl GhmMap {
    /// Validates the branch geometry (GHM1, GHM2, slope bounds) and computes
    /// the overlap flag. Hyperbolicity is checked separately by
    /// [`validate_hyperbolicity`](super::validate_hyperbolicity).
    pub fn new(branches: Vec<Branch>, k: f64, lambda: f64) -> Result<Self> {
        Self::build(branches, k, lambda, true)
    }

    /// Like [`GhmMap::new`] but without the full-cover axiom. Meant for
    /// synthetic fixtures whose branches do not tile the square.
    pub fn synthetic(branches: Vec<Branch>, k: f64, lambda: f64) -> Result<Self> {
        Self::build(branches, k, lambda, false)
    }

    fn build(branches: Vec<Branch>, k: f64, lambda: f64, require_cover: bool) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(GhmError::InvalidParameter(format!(
                "cone aperture k = {k} must lie in (0, 1)"
            )));
        }
        if !(lambda > 1.0) || !lambda.is_finite() {
            return Err(GhmError::InvalidParameter(format!(
                "expansion lambda = {lambda} must exceed 1"
            )));
        }
        if branches.is_empty() {
            return Err(GhmError::InvalidParameter("a map needs at least one branch".into()));
        }
        for (i, a) in branches.iter().enumerate() {
            if branches[..i].iter().any(|b| b.id() == a.id()) {
                return Err(GhmError::InvalidBranch {
                    id: a.id(),
                    reason: "duplicate branch id".into(),
                });
            }
        }
        for b in &branches {
            check_slopes(b, k)?;
            let d = b.domain();
            if d.lower().min_value() < -GEOM_TOL || d.upper().max_value() > 1.0 + GEOM_TOL {
                return Err(GhmError::InvalidBranch {
                    id: b.id(),
                    reason: "domain leaves the unit square".into(),
                });
            }
        }
        check_disjoint_domains(&branches)?;
        if require_cover {
            let covered: f64 = branches.iter().map(|b| b.domain().area()).sum();
            let uncovered = 1.0 - covered;
            if uncovered.abs() > AREA_TOL {
                return Err(GhmError::Ghm2 { area: uncovered });
            }
        }
        let overlapping = images_overlap(&branches);
        Ok(Self {
            branches,
            k,
            lambda,
            overlapping,
        })
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// True iff some pair of images intersects with positive area.
    pub fn is_overlapping(&self) -> bool {
        self.overlapping
    }

    pub fn ids(&self) -> Vec<usize> {
        self.branches.iter().map(Branch::id).collect()
    }

    pub fn index_of(&self, id: usize) -> Option<usize> {
        self.branches.iter().position(|b| b.id() == id)
    }

    pub fn branch(&self, id: usize) -> Option<&Branch> {
        self.branches.iter().find(|b| b.id() == id)
    }

    /// A copy with a different declared expansion constant.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 1.0) {
            return Err(GhmError::InvalidParameter(format!(
                "expansion lambda = {lambda} must exceed 1"
            )));
        }
        Ok(Self { lambda, ..self.clone() })
    }

    /// Index of the branch whose closed domain contains `z`; shared
    /// boundaries go to the lower-indexed branch.
    pub fn locate(&self, z: Point) -> Option<usize> {
        if !in_square(z, GEOM_TOL) {
            return None;
        }
        self.branches.iter().position(|b| b.domain().contains(z, GEOM_TOL))
    }

    /// Like [`locate`](Self::locate) but rejects points on the singular set.
    pub fn locate_interior(&self, z: Point) -> Result<usize> {
        if !in_square(z, GEOM_TOL) {
            return Err(GhmError::OutsideSquare { x: z.x, y: z.y });
        }
        let idx = self.locate(z).ok_or(GhmError::OutsideSquare { x: z.x, y: z.y })?;
        if self.branches[idx].boundary_gap(z) <= GEOM_TOL {
            return Err(GhmError::Singular { x: z.x, y: z.y });
        }
        Ok(idx)
    }

    /// `F(z)` under the boundary tie rule; `None` outside every domain.
    pub fn apply(&self, z: Point) -> Option<Point> {
        self.locate(z).map(|i| self.branches[i].forward(z))
    }

    pub fn differential(&self, z: Point) -> Result<Differential> {
        let idx = self.locate_interior(z)?;
        let b = &self.branches[idx];
        let matrix = b.differential(z);
        Ok(Differential {
            branch_id: b.id(),
            matrix,
            det: matrix.determinant().abs(),
        })
    }

    /// All `y` with `F(y) = z`, one per branch whose closed image contains `z`.
    pub fn preimages(&self, z: Point) -> Vec<Preimage> {
        self.branches
            .iter()
            .filter_map(|b| {
                b.pullback(z).map(|y| Preimage {
                    branch_id: b.id(),
                    point: y,
                    det: b.jacobian(y),
                })
            })
            .collect()
    }
}

fn check_slopes(b: &Branch, k: f64) -> Result<()> {
    let checks = [
        ("domain", b.domain().max_abs_slope()),
        ("image", b.image().max_abs_slope()),
    ];
    for (which, slope) in checks {
        if slope >= k {
            return Err(GhmError::SlopeBound {
                id: b.id(),
                which,
                slope,
                k,
            });
        }
    }
    Ok(())
}

fn overlap_profile(
    a_lo: &GraphPolyline,
    a_hi: &GraphPolyline,
    b_lo: &GraphPolyline,
    b_hi: &GraphPolyline,
) -> Vec<(f64, f64)> {
    let mut params = union_params(&[a_lo, a_hi, b_lo, b_hi]);
    params.extend(uniform_grid(1025));
    params.sort_by(f64::total_cmp);
    params.dedup();
    params
        .into_iter()
        .map(|s| {
            let lo = a_lo.eval(s).max(b_lo.eval(s));
            let hi = a_hi.eval(s).min(b_hi.eval(s));
            (s, (hi - lo).max(0.0))
        })
        .collect()
}

fn check_disjoint_domains(branches: &[Branch]) -> Result<()> {
    for (i, a) in branches.iter().enumerate() {
        for b in &branches[i + 1..] {
            let profile = overlap_profile(
                a.domain().lower(),
                a.domain().upper(),
                b.domain().lower(),
                b.domain().upper(),
            );
            if profile.iter().any(|&(_, w)| w > GEOM_TOL) {
                return Err(GhmError::Ghm1 { a: a.id(), b: b.id() });
            }
        }
    }
    Ok(())
}

fn images_overlap(branches: &[Branch]) -> bool {
    branches.iter().enumerate().any(|(i, a)| {
        branches[i + 1..].iter().any(|b| {
            let profile = overlap_profile(
                a.image().lower(),
                a.image().upper(),
                b.image().lower(),
                b.image().upper(),
            );
            let area: f64 = profile
                .windows(2)
                .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
                .sum();
            area > AREA_TOL
        })
    })
}
