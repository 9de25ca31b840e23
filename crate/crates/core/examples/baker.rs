//! The area-preserving baker map as a two-branch horseshoe.
//!
//! ```bash
//! cargo run --release --example baker
//! ```

use ghm::map::baker_map;
use ghm::point;
use ghm::stats::{birkhoff_average, Observable, OrbitOptions};
use ghm::symbolic::itinerary;

fn main() -> ghm::Result<()> {
    let baker = baker_map();
    println!(
        "branches {}, k = {}, lambda = {}",
        baker.len(),
        baker.k(),
        baker.lambda()
    );

    let z = point(0.3, 0.7);
    let d = baker.differential(z)?;
    println!("DF{z:?} = {:?}, det = {}", d.matrix, d.det);

    let w = baker.apply(z).expect("inside a domain");
    println!("F(z) = ({:.4}, {:.4})", w.x, w.y);
    for pre in baker.preimages(w) {
        println!("  preimage ({:.4}, {:.4})", pre.point.x, pre.point.y);
    }

    // The first symbols record which half of the square each iterate visits.
    println!("itinerary of z: {}", itinerary(&baker, z, 8)?);

    // Lebesgue measure is invariant, so time averages of x approach 1/2.
    let avg = birkhoff_average(&baker, &Observable::CoordX, z, 200_000, OrbitOptions::default());
    println!("time average of x over 2e5 steps: {avg:.4}");
    Ok(())
}
