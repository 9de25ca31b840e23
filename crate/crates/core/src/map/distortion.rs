use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{point, Mat2, Point};
use crate::symbolic::{refine_strip, Orientation, Word};

use super::ghm::GhmMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    /// `sup |Jac_s F^n(z1) / Jac_s F^n(z2) - 1| / d(z1, z2)` (stable direction).
    pub stable_dir_ratio_sup: f64,
    /// `sup |Jac F^n(z1) / Jac F^n(z2) - 1| / d(z1, z2)`.
    pub jac_ratio_sup: f64,
    /// `sup max(r, 1/r)` with `r = Jac F^n / (Jac_u F^n * Jac_s F^n)`.
    pub sandwich_constant: f64,
    pub pairs: usize,
}

struct Jacobians {
    total: f64,
    stable: f64,
    unstable: f64,
}

/// Along-word Jacobians at `z`. The stable direction is the pullback of the
/// vertical, the unstable one the horizontal.
fn jacobians(map: &GhmMap, idx: &[usize], z: Point) -> Jacobians {
    let mut d = Mat2::identity();
    let mut z = z;
    for &i in idx {
        let b = &map.branches()[i];
        d = b.differential(z) * d;
        z = b.forward(z);
    }
    let total = d.determinant().abs();
    let unstable = (d * point(1.0, 0.0)).norm();
    let stable = match d.try_inverse() {
        Some(inv) => 1.0 / (inv * point(0.0, 1.0)).norm(),
        None => 0.0,
    };
    Jacobians {
        total,
        stable,
        unstable,
    }
}

/// Samples `pairs` pairs of points in the stable strip `S_[a]_n` and
/// estimates the distortion constants of `F^n` along the word.
pub fn estimate_distortion(map: &GhmMap, word: &Word, pairs: usize, seed: u64) -> Result<DistortionReport> {
    let word = word.with_orientation(Orientation::Stable);
    let idx = word.indices(map)?;
    let strip = refine_strip(map, &word)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = || {
        let along: f64 = rng.random();
        let theta: f64 = rng.random();
        strip.point_at(along, 1e-9 + (1.0 - 2e-9) * theta)
    };
    let mut report = DistortionReport {
        stable_dir_ratio_sup: 0.0,
        jac_ratio_sup: 0.0,
        sandwich_constant: 1.0,
        pairs: 0,
    };
    for _ in 0..pairs {
        let (z1, z2) = (sample(), sample());
        let dist = (z1 - z2).norm();
        if dist < 1e-14 {
            continue;
        }
        let (j1, j2) = (jacobians(map, &idx, z1), jacobians(map, &idx, z2));
        report.pairs += 1;
        report.jac_ratio_sup = report.jac_ratio_sup.max((j1.total / j2.total - 1.0).abs() / dist);
        report.stable_dir_ratio_sup = report
            .stable_dir_ratio_sup
            .max((j1.stable / j2.stable - 1.0).abs() / dist);
        for j in [&j1, &j2] {
            let r = j.total / (j.unstable * j.stable);
            report.sandwich_constant = report.sandwich_constant.max(r.max(1.0 / r));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::fixtures::perturbed_map;
    use crate::map::{baker_map, three_strip_map};

    #[test]
    fn affine_maps_have_no_distortion() {
        for map in [baker_map(), three_strip_map()] {
            let w = Word::stable(&[1, 2, 2, 1]).unwrap();
            let r = estimate_distortion(&map, &w, 200, 5).unwrap();
            assert_eq!(r.jac_ratio_sup, 0.0);
            assert_eq!(r.stable_dir_ratio_sup, 0.0);
            assert!(r.sandwich_constant < 1.0 / 0.5f64.cos());
        }
    }

    #[test]
    fn smooth_distortion_is_finite_and_stable() {
        let map = perturbed_map(0.05);
        let w = Word::stable(&[1, 2, 1, 1, 2]).unwrap();
        let a = estimate_distortion(&map, &w, 2000, 1).unwrap();
        let b = estimate_distortion(&map, &w, 4000, 1).unwrap();
        assert!(a.jac_ratio_sup > 0.0 && a.jac_ratio_sup.is_finite());
        assert!((b.jac_ratio_sup / a.jac_ratio_sup - 1.0).abs() < 0.1);
        assert!((b.stable_dir_ratio_sup / a.stable_dir_ratio_sup - 1.0).abs() < 0.1);
    }
}
