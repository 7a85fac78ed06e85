//! Epsilon sweeps of the phi and psi families at (k, N) = (2, 4), with a
//! three-point extrapolation to eps = 0.

use rellich::exact::ProblemParams;
use rellich::quadrature::{epsilon_sweep, CutoffSpec, Family};
use rellich::rational::qi;

fn main() -> rellich::Result<()> {
    let eps = [1e-3, 5e-4, 2.5e-4, 1.25e-4, 6.25e-5];
    for (family, gamma) in [(Family::Phi, 2), (Family::Psi, 4)] {
        let params = ProblemParams::new(4, 2, qi(gamma), qi(1), 1.0)?;
        let report = epsilon_sweep(family, &params, &eps, &CutoffSpec::standard(&params), 1e-10)?;
        print!("{:?} gamma={gamma}\n{}", family, report.to_csv());
        if let (Some(x), Some(e)) = (&report.extrapolation, report.exact) {
            println!("limit {:.6} (order {:.3}) vs exact {e}", x.limit, x.order);
        }
    }
    Ok(())
}
