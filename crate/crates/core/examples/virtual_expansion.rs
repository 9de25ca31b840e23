//! Estimating `beta_mu` from the preimage tree.
//!
//! ```bash
//! cargo run --release --example virtual_expansion
//! ```

use ghm::expansion::{beta_mu_estimate, refinement_change};
use ghm::map::{baker_map, three_strip_map};

fn main() -> ghm::Result<()> {
    let map = three_strip_map();
    for mu in [0.1, 0.25, 0.4] {
        let r = beta_mu_estimate(&map, mu, 6, 16, 16)?;
        let betas: Vec<String> = r.beta_sequence.iter().map(|b| format!("{b:.3}")).collect();
        println!("mu = {mu}: beta_n = [{}], below one: {}", betas.join(", "), r.verdict);
    }
    println!(
        "grid refinement changes sup b_mu by {:.2e}",
        refinement_change(&map, 0.25, 16, 16)?
    );

    // Every baker preimage tree looks the same, so beta_n does not move with n.
    let baker = beta_mu_estimate(&baker_map(), 0.45, 5, 8, 8)?;
    println!("baker at mu = 0.45: {:.4?}", baker.beta_sequence);
    Ok(())
}
