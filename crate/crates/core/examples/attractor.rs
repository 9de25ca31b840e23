//! Pushing a uniform cloud forward and comparing it with the attractor cells.
//!
//! ```bash
//! cargo run --release --example attractor
//! ```

use ghm::io::{write_heatmap_png, SvgCanvas};
use ghm::map::three_strip_map;
use ghm::stats::{push_cloud, CloudOptions};
use ghm::symbolic::attractor_cells;

fn main() -> ghm::Result<()> {
    let map = three_strip_map();
    let options = CloudOptions {
        snapshot_steps: vec![1, 3, 15],
        keep_points: 5000,
        ..CloudOptions::new(200_000, 15, 0, 64)
    };
    let cloud = push_cloud(&map, &options)?;
    let cells = attractor_cells(&map, 15, 64)?;
    println!("attractor cells cover {:.3} of the square", cells.area_fraction());

    let dir = std::env::temp_dir().join("ghm_attractor");
    for snap in &cloud.snapshots {
        let outside = snap.histogram.mass_outside(cells.mask());
        println!("step {:>2}: mass outside the cells {outside:.4}", snap.step);
        let mut canvas = SvgCanvas::default();
        canvas.cells(&cells, "#dddddd", 1.0).dots(&snap.points, "#204a87", 1.0);
        canvas.save(dir.join(format!("step_{}.svg", snap.step)))?;
    }
    write_heatmap_png(&cloud.histogram, 512, dir.join("final.png"))?;
    println!("{} singular-set nudges; pictures in {}", cloud.nudges, dir.display());
    Ok(())
}
