//! Refinement studies at (k, N) = (2, 4) for gamma = 2, 3, 4: the endpoint
//! exponents lose mass out of every fixed window, the interior one converges.

use rellich::exact::ProblemParams;
use rellich::minimizer::{refinement_study, RefinementSchedule};
use rellich::rational::qi;

fn main() -> rellich::Result<()> {
    for gamma in [2, 3, 4] {
        let params = ProblemParams::new(4, 2, qi(gamma), qi(1), 1.0)?;
        let study = refinement_study(&params, &RefinementSchedule::default())?;
        println!("gamma = {gamma}");
        for l in &study.levels {
            println!("  level {} dofs {:4} value {:.8} indicator {:.4}", l.level, l.n_dof, l.value, l.indicator);
        }
        if let Some(gap) = study.final_gap() {
            println!("  exact {:.6}, final gap {:.2}%", study.exact.unwrap_or_default(), 100.0 * gap);
        }
        if let Some(v) = &study.virtual_similarity {
            println!("  cosine with {} = t^{:.3}: {:.5}", v.name, v.exponent, v.cosine);
        }
    }
    Ok(())
}
