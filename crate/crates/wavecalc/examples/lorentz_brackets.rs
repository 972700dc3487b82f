//! Runs the full boost/rotation commutator suite and prints one line per
//! bracket: the worst relative residual over the eight test fields, the
//! aggregated tolerance, and the observed refinement order.
//!
//!     cargo run --release --example lorentz_brackets [seed]
//!
//! Expect a couple of minutes on one core: the boost generators each hide a
//! half-line Hilbert transform, and the suite applies them a few hundred
//! times at two resolutions.

use std::time::Instant;
use wavecalc::verify::{run_bracket_suite, BracketSuite};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(7);

    let start = Instant::now();
    let suite = BracketSuite::new(seed, 1.0)?;
    let reports = run_bracket_suite(&suite);

    for report in &reports {
        println!("{}", report.line());
    }

    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    println!(
        "\n{} checks, {} failed, {:.1} s",
        reports.len(),
        failed.len(),
        start.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
    Ok(())
}
