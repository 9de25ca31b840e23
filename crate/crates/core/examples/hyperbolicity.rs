//! Cone checks and distortion for members of the affine family.
//!
//! ```bash
//! cargo run --release --example hyperbolicity
//! ```

use ghm::map::fixtures::{identity_map, perturbed_map};
use ghm::map::{estimate_distortion, max_feasible_angle_scale, validate_hyperbolicity, FamilyParams, Layout};
use ghm::symbolic::Word;

fn main() -> ghm::Result<()> {
    for layout in [Layout::Stack, Layout::Spread] {
        let top = max_feasible_angle_scale(3, 0.3, layout)?;
        for frac in [0.0, 0.5, 1.0] {
            let params = FamilyParams {
                angle_scale: Some(frac * top),
                layout,
                ..FamilyParams::new(3, 0.3)
            };
            let map = params.build()?;
            let report = validate_hyperbolicity(&map, 500, 0);
            println!(
                "{layout:?} scale {:.3}: k = {:.3}, lambda = {:.3}, valid = {}, worst margin {:.2e}",
                frac * top,
                map.k(),
                map.lambda(),
                report.is_valid(),
                report.worst_margin
            );
        }
    }

    // The identity has no expansion at all.
    let flat = validate_hyperbolicity(&identity_map(), 200, 0);
    println!(
        "identity: valid = {}, H2 violations = {}",
        flat.is_valid(),
        flat.h2_violations
    );

    let word = Word::stable(&[1, 2, 1])?;
    for eps in [0.0, 0.02, 0.05] {
        let d = estimate_distortion(&perturbed_map(eps), &word, 200, 1)?;
        println!(
            "perturbation {eps}: stable direction ratio {:.3e}, jacobian ratio {:.3e}",
            d.stable_dir_ratio_sup, d.jac_ratio_sup
        );
    }
    Ok(())
}
