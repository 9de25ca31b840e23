//! Refined strips for words and the manifold curves they shrink to.
//!
//! ```bash
//! cargo run --release --example strips_and_manifolds
//! ```

use ghm::io::SvgCanvas;
use ghm::map::three_strip_map;
use ghm::symbolic::{manifold_approx, refine_strip, Word};

fn main() -> ghm::Result<()> {
    let map = three_strip_map();
    let mut canvas = SvgCanvas::default();

    for symbols in [vec![1], vec![1, 2], vec![1, 2, 3], vec![1, 2, 3, 1]] {
        let strip = refine_strip(&map, &Word::stable(&symbols)?)?;
        println!(
            "stable {:<8} width {:.5}",
            Word::stable(&symbols)?.to_string(),
            strip.width()
        );
        canvas.polygon(&strip.outline(), "#3465a4", 0.25);
    }
    for symbols in [vec![2], vec![2, 1], vec![2, 1, 3]] {
        let strip = refine_strip(&map, &Word::unstable(&symbols)?)?;
        println!(
            "unstable {:<6} width {:.5}",
            Word::unstable(&symbols)?.to_string(),
            strip.width()
        );
        canvas.polygon(&strip.outline(), "#cc0000", 0.25);
    }

    // A periodic word pins down a single curve in the limit.
    for depth in [2, 4, 8] {
        let m = manifold_approx(&map, &Word::unstable(&[1, 3])?, depth)?;
        println!(
            "unstable manifold of 1-3 at depth {depth}: strip width {:.2e}",
            m.strip_width
        );
        if depth == 8 {
            canvas.polyline(&m.points(), "black", 1.5);
        }
    }

    let path = std::env::temp_dir().join("ghm_strips.svg");
    canvas.save(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}
