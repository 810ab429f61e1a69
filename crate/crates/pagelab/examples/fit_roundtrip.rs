//! Synthesize a multi-core power-law trace and recover its parameters.
//!
//! Run with: cargo run --release --example fit_roundtrip

use pagelab::dist::PageDistribution;
use pagelab::fit::{fit_multicore, fit_power_law, TraceSummary};

fn main() -> pagelab::Result<()> {
    let (alpha, kappa, m, n) = (1.2, 400.0, 5_000, 500_000);
    let dist = PageDistribution::multicore_power_law(alpha, m, kappa)?;
    let seq = dist.sample_sequence(n, 99);
    let trace = TraceSummary::from_sequence(&seq)?;
    println!(
        "trace: {} requests over {} distinct pages",
        trace.total, trace.m
    );

    let pl = fit_power_law(&trace)?;
    println!(
        "power-law fit:  alpha = {:.3}               K-S = {:.4}",
        pl.alpha, pl.ks
    );
    let mc = fit_multicore(&trace)?;
    println!(
        "multi-core fit: alpha = {:.3} kappa = {:>7.1} K-S = {:.4}",
        mc.alpha, mc.kappa, mc.ks
    );
    println!("truth:          alpha = {alpha:.3} kappa = {kappa:>7.1}");
    Ok(())
}
