//! Small synthetic maps used by tests, examples and the acceptance suite.

use std::sync::Arc;

use crate::geometry::{point, Mat2, Point, StripRegion};

use super::branch::{Branch, SmoothBranchMap};
use super::ghm::GhmMap;

/// One branch, `F = id`, declared with `lambda = 1.5` so that H2 fails.
pub fn identity_map() -> GhmMap {
    let b = Branch::affine(
        1,
        StripRegion::vertical_band(0.0, 1.0),
        Mat2::identity(),
        point(0.0, 0.0),
    )
    .expect("identity branch");
    GhmMap::new(vec![b], 0.5, 1.5).expect("identity map")
}

/// One branch `diag(2, 1/2)` on `[0, 1/2] x [0, 1]`; its image is the lower half.
/// The domain does not cover the square.
pub fn diagonal_map() -> GhmMap {
    let b = Branch::affine(
        1,
        StripRegion::vertical_band(0.0, 0.5),
        Mat2::new(2.0, 0.0, 0.0, 0.5),
        point(0.0, 0.0),
    )
    .expect("diagonal branch");
    GhmMap::synthetic(vec![b], 0.5, 2.0).expect("diagonal map")
}

/// Two branches with images `[0,1] x [0,0.6]` and `[0,1] x [0.4,1]`.
pub fn overlap_pair() -> GhmMap {
    let linear = Mat2::new(2.0, 0.0, 0.0, 0.6);
    let b1 = Branch::affine(1, StripRegion::vertical_band(0.0, 0.5), linear, point(0.0, 0.0)).expect("branch 1");
    let b2 = Branch::affine(2, StripRegion::vertical_band(0.5, 1.0), linear, point(-1.0, 0.4)).expect("branch 2");
    GhmMap::new(vec![b1, b2], 0.5, 1.6).expect("overlap pair")
}

/// `(x, y) -> (n (x - x0), tau + t n (x - x0) + lambda_c y + eps y^2)`.
#[derive(Clone, Copy, Debug)]
pub struct ShearBump {
    pub n: f64,
    pub x0: f64,
    pub tau: f64,
    pub t: f64,
    pub lambda_c: f64,
    pub eps: f64,
}

impl SmoothBranchMap for ShearBump {
    fn forward(&self, z: Point) -> Point {
        let u = self.n * (z.x - self.x0);
        point(u, self.tau + self.t * u + self.lambda_c * z.y + self.eps * z.y * z.y)
    }

    fn differential(&self, z: Point) -> Mat2 {
        Mat2::new(self.n, 0.0, self.t * self.n, self.lambda_c + 2.0 * self.eps * z.y)
    }

    fn inverse(&self, w: Point) -> Option<Point> {
        let c = self.tau + self.t * w.x - w.y;
        let disc = self.lambda_c * self.lambda_c - 4.0 * self.eps * c;
        if disc < 0.0 {
            return None;
        }
        let y = -2.0 * c / (self.lambda_c + disc.sqrt());
        Some(point(self.x0 + w.x / self.n, y))
    }
}

/// Two stacked, slightly sheared branches with a quadratic bump of size
/// `eps` in the contracting coordinate. `eps` must lie in `[0, 0.1]`.
pub fn perturbed_map(eps: f64) -> GhmMap {
    let (lambda_c, t, k) = (0.4, 0.1, 0.5);
    let branches = (0..2)
        .map(|i| {
            let bump = ShearBump {
                n: 2.0,
                x0: 0.5 * i as f64,
                tau: lambda_c * i as f64,
                t,
                lambda_c,
                eps,
            };
            Branch::smooth(
                i + 1,
                StripRegion::vertical_band(0.5 * i as f64, 0.5 * (i + 1) as f64),
                Arc::new(bump),
            )
        })
        .collect::<crate::Result<Vec<_>>>()
        .expect("perturbed branches");
    let lambda = 2.0_f64.min((1.0 - t * k) / (lambda_c + 2.0 * eps));
    GhmMap::new(branches, k, lambda).expect("perturbed map")
}
