//! Empirical RoE next to every closed-form bound on a small grid.
//!
//! Run with: cargo run --release --example theorem_table

use pagelab::bounds::BoundReport;
use pagelab::dist::PageDistribution;
use pagelab::policy::PolicyDescriptor;
use pagelab::sim::{estimate_roe, CostConvention};

fn main() -> pagelab::Result<()> {
    let k = 8;
    let n = 50_000;
    let trials = 40;
    println!(
        "{:>5} {:>7} {:>8} {:>10} {:>9} {:>10} {:>10} {:>10}",
        "alpha", "kappa", "roe_lru", "bound_lru", "roe_plfu", "plfu_cln", "plfu_harm", "plfu_rate"
    );
    for alpha in [0.5, 1.0, 1.5] {
        for kappa in [1.0, 100.0] {
            let dist = if kappa == 1.0 {
                PageDistribution::power_law(alpha, 2 * k)?
            } else {
                PageDistribution::multicore_power_law(alpha, 2 * k, kappa)?
            };
            let bounds = BoundReport::evaluate(&dist, k)?;
            let lru = estimate_roe(
                &PolicyDescriptor::Lru,
                &dist,
                k,
                n,
                trials,
                7,
                CostConvention::Faults,
            )?;
            let plfu = estimate_roe(
                &PolicyDescriptor::PlfuOracle,
                &dist,
                k,
                n,
                trials,
                7,
                CostConvention::Cost,
            )?;
            println!(
                "{alpha:>5} {kappa:>7} {:>8.3} {:>10.2} {:>9.3} {:>10.2} {:>10.2} {:>10.2}",
                lru.roe,
                bounds.roe_lru_upper,
                plfu.roe,
                bounds.roe_plfu_clean_upper,
                bounds.roe_plfu_harmonic_upper,
                bounds.roe_plfu_costrate_upper,
            );
        }
    }
    Ok(())
}
