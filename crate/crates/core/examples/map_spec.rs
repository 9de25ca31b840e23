//! Loading a map from a JSON document and writing one back out.
//!
//! ```bash
//! cargo run --release --example map_spec
//! ```

use ghm::map::{load_map_spec, three_strip_map, MapSpec};
use ghm::point;

const TWO_BRANCH: &str = r#"{
  "k": 0.5,
  "lambda": 2.0,
  "branches": [
    { "id": 1, "domain_x": [0.0, 0.5], "linear": [[2.0, 0.0], [0.0, 0.5]], "translation": [0.0, 0.0] },
    { "id": 2, "domain_x": [0.5, 1.0], "linear": [[2.0, 0.0], [0.0, 0.5]], "translation": [-1.0, 0.5] }
  ]
}"#;

fn main() -> ghm::Result<()> {
    let map = load_map_spec(TWO_BRANCH)?;
    println!("loaded {} branches, ids {:?}", map.len(), map.ids());
    let z = point(0.75, 0.25);
    println!("F(0.75, 0.25) = {:?}", map.apply(z));

    let spec = MapSpec::from_map(&three_strip_map())?;
    let json = spec.to_json()?;
    println!(
        "three-branch family member as a spec ({} bytes), first lines:",
        json.len()
    );
    for line in json.lines().take(4) {
        println!("  {line}");
    }
    let again = load_map_spec(&json)?;
    assert_eq!(again.apply(z), three_strip_map().apply(z));

    // A domain that does not match its linear part is rejected.
    let broken = TWO_BRANCH.replace("[0.0, 0.5]", "[0.0, 0.6]");
    match load_map_spec(&broken) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
