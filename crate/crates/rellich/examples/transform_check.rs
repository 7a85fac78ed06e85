//! Whole-space versus ball transformation identities on ten sampled cases.

use rellich::harness::{sample_transform_cases, transform_equivalence};

fn main() -> rellich::Result<()> {
    for case in sample_transform_cases(42, 10) {
        let r = transform_equivalence(&case.w, case.n, case.p, case.alpha, 1.0, 1e-10)?;
        println!("N={} p={} alpha={:.4} beta={:.4} max rel error {:.2e}", r.n, r.p, r.alpha, r.beta, r.max_rel_error());
    }
    Ok(())
}
