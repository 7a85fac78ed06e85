//! Coefficient table of the polyharmonic log-power expansion and its
//! symbolic verification.

use rellich::logterm::{coeff_table, verify_with};
use rellich::rational::fmt;

fn main() -> rellich::Result<()> {
    let table = coeff_table(8, 3)?;
    for ((l, j), v) in &table.c {
        println!("C[{l}][{j}] = {}", fmt(v));
    }
    for ((l, j), v) in &table.d {
        println!("D[{l}][{j}] = {}", fmt(v));
    }
    let report = verify_with(&table);
    println!("verified: {}", report.passed);
    Ok(())
}
