//! Exact critical constants for a few (N, k), with 30-digit decimals.

use rellich::exact::{critical_boundary_constant, critical_origin_constant, ProblemParams};
use rellich::rational::qi;

fn main() -> rellich::Result<()> {
    for (n, k) in [(4, 2), (6, 3), (8, 4), (8, 2), (10, 5)] {
        let params = ProblemParams::critical(n, k)?;
        let origin = critical_origin_constant(&params)?;
        let boundary = critical_boundary_constant(&params.with_gamma(qi(n as i64)))?;
        println!("N={n} k={k}");
        println!("  gamma = p: {origin}");
        println!("  gamma = N: {boundary}");
    }
    Ok(())
}
