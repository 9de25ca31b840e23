//! Decay of correlations and a central-limit check along orbits.
//!
//! ```bash
//! cargo run --release --example correlations
//! ```

use ghm::map::{baker_map, three_strip_map};
use ghm::stats::{clt_diagnostic, correlation_series, Observable};

fn main() -> ghm::Result<()> {
    for (name, map) in [("baker", baker_map()), ("three-branch", three_strip_map())] {
        let f = Observable::CoordX;
        let series = correlation_series(&map, &f, &f, 10, 1_000_000, 1000, 0)?;
        println!("{name}: noise floor {:.1e}", series.noise_floor);
        for (n, c) in series.n.iter().zip(&series.c).take(6) {
            println!("  C({n}) = {c:+.3e}");
        }
        match series.fitted_rate {
            Some(rate) => println!("  fitted decay rate {rate:.3} over {} lags", series.fit_points),
            None => println!("  too few lags above the noise floor to fit"),
        }
        let clt = clt_diagnostic(&map, &f, 1000, 500, 0)?;
        println!(
            "  CLT: KS distance {:.3}, sample variance {:.3e}",
            clt.ks_statistic, clt.variance
        );
    }
    Ok(())
}
