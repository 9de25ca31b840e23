//! JSON map-spec documents.
//!
//! ```json
//! { "k": 0.5, "lambda": 2.0,
//!   "branches": [ { "id": 1, "domain_x": [0.0, 0.5],
//!                   "linear": [[2.0, 0.0], [0.0, 0.5]], "translation": [0.0, 0.0] } ] }
//! ```
//!
//! Branch `i` acts as `z -> linear * z + translation` (row-major matrix).
//! Curvilinear domains replace `domain_x` with `domain_left` / `domain_right`
//! polylines of `[y, x(y)]` vertices.

use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};
use crate::geometry::{point, GraphPolyline, Mat2, StripOrientation, StripRegion};

use super::branch::{Branch, BranchKind};
use super::ghm::GhmMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub k: f64,
    pub lambda: f64,
    pub branches: Vec<BranchSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_x: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_left: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_right: Option<Vec<[f64; 2]>>,
    pub linear: [[f64; 2]; 2],
    pub translation: [f64; 2],
}

fn polyline(vertices: &[[f64; 2]], what: &str, id: usize) -> Result<GraphPolyline> {
    let (ys, xs): (Vec<f64>, Vec<f64>) = vertices.iter().map(|v| (v[0], v[1])).unzip();
    if ys.first() != Some(&0.0) || ys.last() != Some(&1.0) {
        return Err(GhmError::Schema(format!(
            "branch {id}: {what} must run from y = 0 to y = 1"
        )));
    }
    GraphPolyline::new(ys, xs).map_err(|e| GhmError::Schema(format!("branch {id}: {what}: {e}")))
}

impl BranchSpec {
    fn domain(&self) -> Result<StripRegion> {
        match (&self.domain_x, &self.domain_left, &self.domain_right) {
            (Some([lo, hi]), None, None) => Ok(StripRegion::vertical_band(*lo, *hi)),
            (None, Some(left), Some(right)) => Ok(StripRegion::new(
                StripOrientation::Vertical,
                polyline(left, "domain_left", self.id)?,
                polyline(right, "domain_right", self.id)?,
            )),
            _ => Err(GhmError::Schema(format!(
                "branch {}: give either domain_x or both domain_left and domain_right",
                self.id
            ))),
        }
    }

    pub fn to_branch(&self) -> Result<Branch> {
        let [[a, b], [c, d]] = self.linear;
        let linear = Mat2::new(a, b, c, d);
        let translation = point(self.translation[0], self.translation[1]);
        Branch::affine(self.id, self.domain()?, linear, translation)
    }

    fn from_branch(branch: &Branch) -> Result<Self> {
        let BranchKind::Affine { linear, translation } = branch.kind() else {
            return Err(GhmError::Unsupported(format!(
                "branch {} is not affine; map-specs only carry affine branches",
                branch.id()
            )));
        };
        let domain = branch.domain();
        let straight = |g: &GraphPolyline| g.values().iter().all(|&v| v == g.values()[0]);
        let (domain_x, domain_left, domain_right) = if straight(domain.lower()) && straight(domain.upper()) {
            (
                Some([domain.lower().values()[0], domain.upper().values()[0]]),
                None,
                None,
            )
        } else {
            let verts = |g: &GraphPolyline| {
                g.params()
                    .iter()
                    .zip(g.values())
                    .map(|(&y, &x)| [y, x])
                    .collect::<Vec<_>>()
            };
            (None, Some(verts(domain.lower())), Some(verts(domain.upper())))
        };
        Ok(Self {
            id: branch.id(),
            domain_x,
            domain_left,
            domain_right,
            linear: [[linear[(0, 0)], linear[(0, 1)]], [linear[(1, 0)], linear[(1, 1)]]],
            translation: [translation.x, translation.y],
        })
    }
}

impl MapSpec {
    pub fn from_map(map: &GhmMap) -> Result<Self> {
        Ok(Self {
            k: map.k(),
            lambda: map.lambda(),
            branches: map
                .branches()
                .iter()
                .map(BranchSpec::from_branch)
                .collect::<Result<_>>()?,
        })
    }

    pub fn to_map(&self) -> Result<GhmMap> {
        if self.branches.is_empty() {
            return Err(GhmError::Schema("branches must be non-empty".into()));
        }
        let branches = self
            .branches
            .iter()
            .map(BranchSpec::to_branch)
            .collect::<Result<Vec<_>>>()?;
        GhmMap::new(branches, self.k, self.lambda)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Parses and validates a map-spec document.
pub fn load_map_spec(document: &str) -> Result<GhmMap> {
    let spec: MapSpec = serde_json::from_str(document).map_err(|e| GhmError::Schema(e.to_string()))?;
    spec.to_map()
}

pub fn load_map_spec_file(path: impl AsRef<std::path::Path>) -> Result<GhmMap> {
    load_map_spec(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::family::baker_map;

    const BAKER: &str = r#"{
        "k": 0.5, "lambda": 2.0,
        "branches": [
            { "id": 1, "domain_x": [0.0, 0.5], "linear": [[2.0, 0.0], [0.0, 0.5]], "translation": [0.0, 0.0] },
            { "id": 2, "domain_x": [0.5, 1.0], "linear": [[2.0, 0.0], [0.0, 0.5]], "translation": [-1.0, 0.5] }
        ]
    }"#;

    #[test]
    fn baker_document_matches_builtin() {
        let loaded = load_map_spec(BAKER).unwrap();
        let builtin = baker_map();
        for i in 0..20 {
            for j in 0..20 {
                let z = point((i as f64 + 0.3) / 20.0, (j as f64 + 0.6) / 20.0);
                assert_eq!(loaded.apply(z), builtin.apply(z));
            }
        }
    }

    fn two_branch(first_domain: &str, first_scale: f64) -> String {
        format!(
            r#"{{ "k": 0.5, "lambda": 1.5, "branches": [
                {{ "id": 1, "domain_x": {first_domain}, "linear": [[{first_scale}, 0.0], [0.0, 0.5]], "translation": [0.0, 0.0] }},
                {{ "id": 2, "domain_x": [0.5, 1.0], "linear": [[2.0, 0.0], [0.0, 0.5]], "translation": [-1.0, 0.5] }}
            ] }}"#
        )
    }

    #[test]
    fn overlapping_domains_name_ghm1() {
        let err = load_map_spec(&two_branch("[0.0, 0.6]", 1.0 / 0.6)).unwrap_err();
        assert_eq!(err.kind(), "GHM1", "{err}");
    }

    #[test]
    fn gap_between_domains_names_ghm2() {
        let err = load_map_spec(&two_branch("[0.0, 0.4]", 2.5)).unwrap_err();
        assert_eq!(err.kind(), "GHM2", "{err}");
    }

    #[test]
    fn schema_errors() {
        assert_eq!(load_map_spec("{").unwrap_err().kind(), "schema");
        assert_eq!(
            load_map_spec(r#"{"k":0.5,"lambda":2,"branches":[]}"#)
                .unwrap_err()
                .kind(),
            "schema"
        );
        let both = BAKER.replace(
            "\"domain_x\": [0.0, 0.5],",
            "\"domain_x\": [0.0, 0.5], \"domain_left\": [[0,0],[1,0]], \"domain_right\": [[0,0.5],[1,0.5]],",
        );
        assert_eq!(load_map_spec(&both).unwrap_err().kind(), "schema");
    }

    #[test]
    fn polyline_domains_round_trip() {
        let doc = BAKER.replace(
            "\"domain_x\": [0.5, 1.0]",
            "\"domain_left\": [[0.0, 0.5], [0.5, 0.5], [1.0, 0.5]], \"domain_right\": [[0.0, 1.0], [1.0, 1.0]]",
        );
        let map = load_map_spec(&doc).unwrap();
        let again = MapSpec::from_map(&map).unwrap();
        assert!(again.branches[1].domain_left.is_some() || again.branches[1].domain_x.is_some());
        assert_eq!(
            again.to_map().unwrap().apply(point(0.7, 0.2)),
            map.apply(point(0.7, 0.2))
        );
    }

    #[test]
    fn slanted_edge_opposite_a_vertical_edge_is_rejected() {
        // An affine branch cannot send both x = 0 and x = 0.45 + 0.1 y onto
        // vertical lines, so the image would not span the full width.
        let doc = r#"{
            "k": 0.5, "lambda": 1.5,
            "branches": [
              { "id": 1, "domain_left": [[0,0],[1,0]], "domain_right": [[0,0.45],[1,0.55]],
                "linear": [[2.2222222222222223, 0.0], [0.0, 0.5]], "translation": [0.0, 0.0] },
              { "id": 2, "domain_left": [[0,0.45],[1,0.55]], "domain_right": [[0,1],[1,1]],
                "linear": [[1.8181818181818181, 0.0], [0.0, 0.5]], "translation": [-0.8181818181818181, 0.5] }
            ]
        }"#;
        assert_eq!(load_map_spec(doc).unwrap_err().kind(), "invalid_branch");
    }
}
