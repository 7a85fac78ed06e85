//! R^rad_{2m,2} at N = 4m against the earlier constant A(N, m)^2.

use rellich::exact::gap_analysis;

fn main() -> rellich::Result<()> {
    for m in 2..=4 {
        let g = gap_analysis(m)?;
        println!("m={m} N={}: A^2 = {}, R_rad = {}, ratio = {}", g.n, g.a_squared, g.r_rad, g.ratio);
        for step in &g.chains.present {
            println!("  {} x{} -> {}", step.inequality, step.factor, step.running_product);
        }
    }
    Ok(())
}
