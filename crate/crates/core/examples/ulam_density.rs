//! Stationary density of the Ulam matrix and its Sobolev seminorms.
//!
//! ```bash
//! cargo run --release --example ulam_density
//! ```

use ghm::io::write_heatmap_png;
use ghm::map::three_strip_map;
use ghm::stats::{push_cloud, CloudOptions};
use ghm::transfer::{sobolev_diagnostic, sobolev_seminorm, stationary_density, ulam_matrix};

fn main() -> ghm::Result<()> {
    let map = three_strip_map();
    let m = 32;
    let p = ulam_matrix(&map, m, 64, 0)?;
    println!("{m}x{m} grid: {} nonzeros", p.nnz());

    let s = stationary_density(&p, 1e-12)?;
    println!("power iteration: {} steps, residual {:.1e}", s.iterations, s.residual);

    let cloud = push_cloud(&map, &CloudOptions::new(1_000_000, 15, 0, m))?;
    println!(
        "L1 distance to the pushed cloud: {:.4}",
        s.density.l1_distance(&cloud.histogram)
    );

    for mu in [0.1, 0.25, 0.4] {
        println!("H^{mu} seminorm: {:.3}", sobolev_seminorm(&s.density, mu)?);
    }
    // Above one half the grid seminorm of a density with jumps keeps growing.
    for grid in [16, 32] {
        let coarse = s.density.coarsen(m / grid)?;
        println!("H^0.75 diagnostic at {grid}: {:.3}", sobolev_diagnostic(&coarse, 0.75)?);
    }
    let path = std::env::temp_dir().join("ghm_density.png");
    write_heatmap_png(&s.density, 512, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
