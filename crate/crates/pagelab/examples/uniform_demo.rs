//! The uniform m = k + 1 lower bound: every online policy lands on H_k.
//!
//! Run with: cargo run --release --example uniform_demo

use pagelab::sim::demo_uniform_lower_bound;

fn main() -> pagelab::Result<()> {
    let k = 10;
    let report = demo_uniform_lower_bound(k, 100_000, 100, 1)?;
    println!("uniform demo, k = {k}, m = {}", k + 1);
    println!("  H_k                  = {:.6}", report.h_k);
    println!(
        "  mean phase length    = {:.3}  (expected {:.3})",
        report.mean_phase_length.mean, report.expected_phase_length
    );
    println!(
        "  belady cost / phase  = {:.4} (expected ~1)",
        report.belady_cost_per_phase.mean
    );
    for row in &report.rows {
        println!(
            "  RoE[{:?}] {:14} = {:.4} +- {:.4}",
            row.convention, row.policy, row.estimate.roe, row.estimate.stderr
        );
    }
    Ok(())
}
