//! The affine example family: `n` equal vertical strips, each sheared onto a
//! slanted horizontal strip of height `lambda_c`.
//!
//! Branch `i` (1-based) is `z -> L_i (z - o_i) + t_i` with
//! `L_i = [[n, 0], [n tan a_i, lambda_c]]`, `o_i = ((i-1)/n, 0)` and
//! `a_i = angle_scale * (i/n) * asin(1 - lambda_c)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};
use crate::geometry::{point, Mat2, StripRegion};

use super::branch::Branch;
use super::ghm::GhmMap;

const FEASIBILITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// Images stacked bottom to top, `tau_i = (i-1) lambda_c`.
    Stack,
    /// Image `i` starts at `(1 - lambda_c - tan a_i) (i-1)/(n-1)`.
    #[default]
    Spread,
}

impl FromStr for Layout {
    type Err = GhmError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stack" => Ok(Layout::Stack),
            "spread" => Ok(Layout::Spread),
            other => Err(GhmError::InvalidParameter(format!("unknown layout {other:?}"))),
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layout::Stack => "stack",
            Layout::Spread => "spread",
        })
    }
}

/// Parameters of one member of the affine family.
///
/// `angle_scale` and `k` are optional: missing values resolve to the maximal
/// feasible angle scale and to the default cone aperture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub n: usize,
    pub lambda_c: f64,
    pub angle_scale: Option<f64>,
    pub layout: Layout,
    pub k: Option<f64>,
}

impl FamilyParams {
    pub fn new(n: usize, lambda_c: f64) -> Self {
        Self {
            n,
            lambda_c,
            angle_scale: None,
            layout: Layout::Spread,
            k: None,
        }
    }

    /// Fills in the optional fields.
    pub fn resolved(&self) -> Result<FamilyParams> {
        check_basic(self.n, self.lambda_c)?;
        let angle_scale = match self.angle_scale {
            Some(a) => a,
            None => max_feasible_angle_scale(self.n, self.lambda_c, self.layout)?,
        };
        let k = match self.k {
            Some(k) => k,
            None => default_cone_aperture(self.n, self.lambda_c, angle_scale),
        };
        Ok(FamilyParams {
            n: self.n,
            lambda_c: self.lambda_c,
            angle_scale: Some(angle_scale),
            layout: self.layout,
            k: Some(k),
        })
    }

    pub fn build(&self) -> Result<GhmMap> {
        let r = self.resolved()?;
        build_affine_family(
            r.n,
            r.lambda_c,
            r.angle_scale.unwrap_or(0.0),
            r.layout,
            r.k.unwrap_or(0.5),
        )
    }
}

/// Parses `n=3,lambda=0.35[,angle_scale=0.8][,layout=spread][,k=0.75]`.
impl FromStr for FamilyParams {
    type Err = GhmError;

    fn from_str(s: &str) -> Result<Self> {
        let mut n = None;
        let mut lambda_c = None;
        let mut params = FamilyParams::new(0, 0.0);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| GhmError::InvalidParameter(format!("expected key=value, got {part:?}")))?;
            let real = || {
                value
                    .parse::<f64>()
                    .map_err(|_| GhmError::InvalidParameter(format!("{key}: not a number: {value:?}")))
            };
            match key {
                "n" => {
                    n = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| GhmError::InvalidParameter(format!("n: not an integer: {value:?}")))?,
                    )
                }
                "lambda" | "lambda_c" => lambda_c = Some(real()?),
                "angle_scale" => params.angle_scale = Some(real()?),
                "layout" => params.layout = value.parse()?,
                "k" => params.k = Some(real()?),
                other => return Err(GhmError::InvalidParameter(format!("unknown family key {other:?}"))),
            }
        }
        params.n = n.ok_or_else(|| GhmError::InvalidParameter("family needs n=<int>".into()))?;
        params.lambda_c = lambda_c.ok_or_else(|| GhmError::InvalidParameter("family needs lambda=<real>".into()))?;
        Ok(params)
    }
}

fn check_basic(n: usize, lambda_c: f64) -> Result<()> {
    if n < 2 {
        return Err(GhmError::InvalidParameter(format!("n = {n} must be at least 2")));
    }
    if !(lambda_c > 0.0 && lambda_c < 1.0) {
        return Err(GhmError::InvalidParameter(format!(
            "contraction lambda_c = {lambda_c} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// Shear angles `a_i = angle_scale * (i/n) * asin(1 - lambda_c)`, `i = 1..=n`.
pub fn shear_angles(n: usize, lambda_c: f64, angle_scale: f64) -> Vec<f64> {
    let base = (1.0 - lambda_c).asin();
    (1..=n).map(|i| angle_scale * (i as f64 / n as f64) * base).collect()
}

/// Lower-edge offsets `tau_i` of the images at `x = 0`.
pub fn image_offsets(n: usize, lambda_c: f64, slopes: &[f64], layout: Layout) -> Vec<f64> {
    (0..n)
        .map(|i| match layout {
            Layout::Stack => i as f64 * lambda_c,
            Layout::Spread => (1.0 - lambda_c - slopes[i]) * i as f64 / (n - 1) as f64,
        })
        .collect()
}

/// Largest `tau_i + tan a_i + lambda_c` (top of image `i` at `x = 1`).
fn worst_top(n: usize, lambda_c: f64, angle_scale: f64, layout: Layout) -> (usize, f64) {
    let slopes: Vec<f64> = shear_angles(n, lambda_c, angle_scale).iter().map(|a| a.tan()).collect();
    let taus = image_offsets(n, lambda_c, &slopes, layout);
    (0..n)
        .map(|i| (i + 1, taus[i] + slopes[i] + lambda_c))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc })
}

fn is_feasible(n: usize, lambda_c: f64, angle_scale: f64, layout: Layout) -> bool {
    let slopes: Vec<f64> = shear_angles(n, lambda_c, angle_scale).iter().map(|a| a.tan()).collect();
    let taus = image_offsets(n, lambda_c, &slopes, layout);
    (0..n).all(|i| taus[i] >= 0.0 && taus[i] + slopes[i] + lambda_c <= 1.0 + 1e-15)
}

/// Largest `angle_scale` in `[0, 1]` keeping every image inside the square.
pub fn max_feasible_angle_scale(n: usize, lambda_c: f64, layout: Layout) -> Result<f64> {
    check_basic(n, lambda_c)?;
    let (branch, top) = worst_top(n, lambda_c, 0.0, layout);
    if top > 1.0 + FEASIBILITY_TOL {
        return Err(GhmError::GeometryInfeasible { branch, top });
    }
    if is_feasible(n, lambda_c, 1.0, layout) {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if is_feasible(n, lambda_c, mid, layout) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Smallest aperture `k` with `tan a_i + (lambda_c / n) k <= k` for all `i`,
/// i.e. the unstable cone is mapped into itself.
pub fn min_cone_aperture(n: usize, lambda_c: f64, angle_scale: f64) -> f64 {
    let t_max = shear_angles(n, lambda_c, angle_scale)
        .last()
        .map(|a| a.tan())
        .unwrap_or(0.0);
    t_max / (1.0 - lambda_c / n as f64)
}

/// `max(0.5, 1.02 * min_cone_aperture)`.
pub fn default_cone_aperture(n: usize, lambda_c: f64, angle_scale: f64) -> f64 {
    (1.02 * min_cone_aperture(n, lambda_c, angle_scale)).max(0.5)
}

/// Builds branch `i` as `z -> L_i (z - o_i) + t_i`.
///
/// The declared expansion constant is the max-norm bound
/// `min(n, min_i (1 - k tan a_i) / lambda_c)`: `n` for unstable-cone vectors
/// and `(1 - k tan a_i) / lambda_c` for `DF^{-1}` on the stable cone.
pub fn build_affine_family(n: usize, lambda_c: f64, angle_scale: f64, layout: Layout, k: f64) -> Result<GhmMap> {
    check_basic(n, lambda_c)?;
    if !(0.0..=1.0).contains(&angle_scale) {
        return Err(GhmError::InvalidParameter(format!(
            "angle_scale = {angle_scale} must lie in [0, 1]"
        )));
    }
    let slopes: Vec<f64> = shear_angles(n, lambda_c, angle_scale).iter().map(|a| a.tan()).collect();
    let taus = image_offsets(n, lambda_c, &slopes, layout);
    for i in 0..n {
        let top = taus[i] + slopes[i] + lambda_c;
        if top > 1.0 + FEASIBILITY_TOL || taus[i] < -FEASIBILITY_TOL {
            return Err(GhmError::GeometryInfeasible { branch: i + 1, top });
        }
    }
    let nf = n as f64;
    let mut branches = Vec::with_capacity(n);
    for i in 0..n {
        let x0 = i as f64 / nf;
        let x1 = if i + 1 == n { 1.0 } else { (i + 1) as f64 / nf };
        let linear = Mat2::new(nf, 0.0, nf * slopes[i], lambda_c);
        // L (z - o) + t  ==  L z + (t - L o)
        let origin = point(x0, 0.0);
        let translation = point(0.0, taus[i]) - linear * origin;
        branches.push(Branch::affine(
            i + 1,
            StripRegion::vertical_band(x0, x1),
            linear,
            translation,
        )?);
    }
    let stable_rate = slopes
        .iter()
        .map(|t| (1.0 - k * t) / lambda_c)
        .fold(f64::INFINITY, f64::min);
    let lambda = nf.min(stable_rate);
    if !(lambda > 1.0) {
        return Err(GhmError::NotHyperbolic(format!(
            "max-norm expansion bound {lambda:.6} does not exceed 1 for k = {k}"
        )));
    }
    GhmMap::new(branches, k, lambda)
}

/// The classical baker's map: `build_affine_family(2, 0.5, 0, stack, 0.5)`.
pub fn baker_map() -> GhmMap {
    build_affine_family(2, 0.5, 0.0, Layout::Stack, 0.5).expect("baker map is feasible")
}

/// Three strips, expansion 3, contraction 0.35, maximal feasible shear,
/// spread layout.
pub fn three_strip_params() -> FamilyParams {
    FamilyParams {
        n: 3,
        lambda_c: 0.35,
        angle_scale: None,
        layout: Layout::Spread,
        k: None,
    }
}

pub fn three_strip_map() -> GhmMap {
    three_strip_params().build().expect("three-strip instance is feasible")
}
