//! Second eigenvalue modulus of Ulam matrices at increasing resolution.
//!
//! ```bash
//! cargo run --release --example spectral_gap
//! ```

use ghm::map::{baker_map, three_strip_map};
use ghm::transfer::{dense_spectrum, spectral_gap, ulam_matrix};

fn main() -> ghm::Result<()> {
    let map = three_strip_map();
    for m in [16, 32, 64] {
        let r = spectral_gap(&ulam_matrix(&map, m, 64, 0)?, 6)?;
        println!(
            "m = {m:>3}: |lambda_2| = {:.4}, gap = {:.4}, {} iterations, converged = {}",
            r.second_modulus, r.gap, r.iterations, r.converged
        );
    }

    // Odd grids avoid the dyadic alignment of the baker map with the cells.
    for m in [16, 17] {
        let moduli = dense_spectrum(&ulam_matrix(&baker_map(), m, 64, 0)?)?;
        println!("baker m = {m}: leading moduli {:.4?}", &moduli[..4]);
    }
    Ok(())
}
