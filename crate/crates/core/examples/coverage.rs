//! Splitting the union of images by which branches cover each point.
//!
//! ```bash
//! cargo run --release --example coverage
//! ```

use ghm::expansion::coverage_partition;
use ghm::io::SvgCanvas;
use ghm::map::three_strip_map;
use ghm::point;

const COLORS: [&str; 6] = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948"];

fn main() -> ghm::Result<()> {
    let map = three_strip_map();
    let x_res = 128;
    let pieces = coverage_partition(&map, x_res);
    let mut canvas = SvgCanvas::default();
    for piece in &pieces {
        println!(
            "piece {}: branches {:?}, x in [{:.3}, {:.3}], {} columns",
            piece.id,
            piece.theta,
            piece.x_interval[0],
            piece.x_interval[1],
            piece.spans.len()
        );
        let color = COLORS[(piece.theta.len() * 2 + piece.theta[0]) % COLORS.len()];
        let w = 1.0 / x_res as f64;
        for s in &piece.spans {
            canvas.rect(s.column as f64 * w, s.y0, w, s.y1 - s.y0, color, 0.8);
        }
        let (x, y) = (
            piece.x_interval.iter().sum::<f64>() / 2.0,
            piece.y_interval.iter().sum::<f64>() / 2.0,
        );
        canvas.label(point(x, y), &format!("{:?}", piece.theta));
    }
    let path = std::env::temp_dir().join("ghm_coverage.svg");
    canvas.save(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}
