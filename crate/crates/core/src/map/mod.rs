//! Branches, whole maps, the affine example family and axiom checks.

mod branch;
mod distortion;
mod family;
pub mod fixtures;
mod ghm;
mod hyperbolicity;
mod spec;

pub use branch::{Branch, BranchKind, SmoothBranchMap};
pub use distortion::{estimate_distortion, DistortionReport};
pub use family::{
    baker_map, build_affine_family, default_cone_aperture, image_offsets, max_feasible_angle_scale, min_cone_aperture,
    shear_angles, three_strip_map, three_strip_params, FamilyParams, Layout,
};
pub use ghm::{Differential, GhmMap, Preimage};
pub use hyperbolicity::{validate_hyperbolicity, ConeReport};
pub use spec::{load_map_spec, load_map_spec_file, BranchSpec, MapSpec};
