//! Monte Carlo estimation of ratio-of-expectations and of the per-phase
//! expectations behind the closed-form bounds, plus the two lower-bound
//! demonstrations (uniform `m = k + 1`, and the LRU-vs-PLFU separation).
//!
//! The ratio-of-expectations of a policy is estimated as a ratio of summed
//! costs over independent trials, `sum(ALG) / sum(Belady)`, matching the
//! `E[ALG] / E[OPT]` definition (not a mean of per-sequence ratios).
//! Standard errors come from the delta method over per-trial (cost, cost)
//! pairs.
//!
//! Every estimator derives one seed per trial from its root seed, so
//! results are reproducible and independent of scheduling order. Workload
//! and policy randomness use distinct derivation streams.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds;
use crate::dist::{Page, PageDistribution};
use crate::error::{Error, Result};
use crate::phase::{big_small_phases, marking_phases};
use crate::policy::{
    run_belady, run_fifo, run_lru, run_marker, run_plfu_oracle, run_policy, PolicyDescriptor,
    PolicyRun,
};

/// Stream tags for [`derive_seed`]: workload sampling, policy randomness,
/// and bootstrap resampling never share a stream.
pub const STREAM_WORKLOAD: u64 = 0;
pub const STREAM_POLICY: u64 = 1;
pub const STREAM_BOOTSTRAP: u64 = 2;

/// Derives a per-trial seed from a root seed, a stream tag, and a trial
/// index (splitmix-style mixing). Stable across versions and platforms.
pub fn derive_seed(root: u64, stream: u64, index: u64) -> u64 {
    let mut z = root;
    for salt in [stream, index] {
        z = z
            .wrapping_add(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(salt.wrapping_mul(0xA076_1D64_78BD_642F));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

/// Which cost a policy is charged in a ratio estimate: raw fault counts,
/// or the policy's cost model (PLFU pays 2 per fault).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CostConvention {
    Faults,
    Cost,
}

impl CostConvention {
    fn of(self, run: &PolicyRun) -> f64 {
        match self {
            CostConvention::Faults => run.faults as f64,
            CostConvention::Cost => run.cost as f64,
        }
    }
}

impl std::str::FromStr for CostConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "faults" => Ok(Self::Faults),
            "cost" => Ok(Self::Cost),
            other => Err(Error::domain(format!(
                "unknown cost convention {other:?} (expected faults|cost)"
            ))),
        }
    }
}

/// How the standard error of a ratio estimate is computed: the delta
/// method (default), or trial-level bootstrap resampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StderrMethod {
    Delta,
    Bootstrap { resamples: usize },
}

/// A ratio-of-expectations estimate with its standard error.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RoeEstimate {
    pub mean_alg_cost: f64,
    pub mean_opt_cost: f64,
    pub roe: f64,
    pub stderr: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

/// A plain or ratio-of-sums mean with standard error.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
    /// Denominator observations (phases, requests, ...).
    pub samples: u64,
}

/// Ratio of summed pairs with a delta-method standard error.
fn ratio_of_sums(pairs: &[(f64, f64)]) -> Result<(f64, f64)> {
    let t = pairs.len() as f64;
    let sum_a: f64 = pairs.iter().map(|p| p.0).sum();
    let sum_b: f64 = pairs.iter().map(|p| p.1).sum();
    if sum_b <= 0.0 {
        return Err(Error::Undefined(
            "ratio estimator has an all-zero denominator".into(),
        ));
    }
    let r = sum_a / sum_b;
    if pairs.len() < 2 {
        return Ok((r, f64::NAN));
    }
    let mean_a = sum_a / t;
    let mean_b = sum_b / t;
    let (mut vaa, mut vab, mut vbb) = (0.0, 0.0, 0.0);
    for &(a, b) in pairs {
        let da = a - mean_a;
        let db = b - mean_b;
        vaa += da * da;
        vab += da * db;
        vbb += db * db;
    }
    let scale = (t - 1.0) * t * mean_b * mean_b;
    let var = (vaa - 2.0 * r * vab + r * r * vbb) / scale;
    Ok((r, var.max(0.0).sqrt()))
}

fn run_trial_policy(
    policy: &PolicyDescriptor,
    seq: &[Page],
    k: usize,
    dist: &PageDistribution,
    trial: u64,
) -> Result<PolicyRun> {
    match policy {
        // Marker re-seeds per trial so its coins are independent of the
        // workload stream and of other trials.
        PolicyDescriptor::Marker { seed } => {
            Ok(run_marker(seq, k, derive_seed(*seed, STREAM_POLICY, trial)))
        }
        other => run_policy(other, seq, k, Some(dist)),
    }
}

/// Estimates `RoE(policy)` against Belady over `trials` sequences of
/// length `n` drawn from `dist`, with the delta-method standard error.
pub fn estimate_roe(
    policy: &PolicyDescriptor,
    dist: &PageDistribution,
    k: usize,
    n: usize,
    trials: usize,
    seed: u64,
    convention: CostConvention,
) -> Result<RoeEstimate> {
    estimate_roe_with(
        policy,
        dist,
        k,
        n,
        trials,
        seed,
        convention,
        StderrMethod::Delta,
    )
}

/// [`estimate_roe`] with an explicit standard-error method.
#[allow(clippy::too_many_arguments)]
pub fn estimate_roe_with(
    policy: &PolicyDescriptor,
    dist: &PageDistribution,
    k: usize,
    n: usize,
    trials: usize,
    seed: u64,
    convention: CostConvention,
    method: StderrMethod,
) -> Result<RoeEstimate> {
    if n < 10 * k {
        return Err(Error::domain(format!(
            "estimate_roe needs n >= 10k (n = {n}, k = {k})"
        )));
    }
    if trials < 30 {
        return Err(Error::domain(format!(
            "estimate_roe needs trials >= 30 (got {trials})"
        )));
    }
    let pairs: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let seq = dist.sample_sequence(n, derive_seed(seed, STREAM_WORKLOAD, i));
            let alg = run_trial_policy(policy, &seq.pages, k, dist, i)?;
            let opt = run_belady(&seq.pages, k);
            Ok((convention.of(&alg), opt.faults as f64))
        })
        .collect::<Result<_>>()?;
    let (roe, delta_stderr) = ratio_of_sums(&pairs).map_err(|_| {
        Error::Undefined("Belady cost is zero across all trials; RoE undefined".into())
    })?;
    let stderr = match method {
        StderrMethod::Delta => delta_stderr,
        StderrMethod::Bootstrap { resamples } => bootstrap_stderr(&pairs, resamples, seed),
    };
    let t = trials as f64;
    Ok(RoeEstimate {
        mean_alg_cost: pairs.iter().map(|p| p.0).sum::<f64>() / t,
        mean_opt_cost: pairs.iter().map(|p| p.1).sum::<f64>() / t,
        roe,
        stderr,
        n,
        trials,
        seed,
    })
}

/// Standard deviation of the ratio over bootstrap resamples of the
/// per-trial pairs.
fn bootstrap_stderr(pairs: &[(f64, f64)], resamples: usize, seed: u64) -> f64 {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(derive_seed(seed, STREAM_BOOTSTRAP, 0));
    let mut ratios = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let (mut a, mut b) = (0.0, 0.0);
        for _ in 0..pairs.len() {
            let (x, y) = pairs[rng.gen_range(0..pairs.len())];
            a += x;
            b += y;
        }
        if b > 0.0 {
            ratios.push(a / b);
        }
    }
    if ratios.len() < 2 {
        return f64::NAN;
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let var =
        ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (ratios.len() - 1) as f64;
    var.sqrt()
}

fn default_phase_n(k: usize) -> usize {
    (100 * k).max(100_000)
}

/// Mean clean pages per complete marking phase, skipping each sequence's
/// first phase (its clean count is all of its pages by convention).
pub fn estimate_clean_pages(
    dist: &PageDistribution,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<MeanEstimate> {
    let n = default_phase_n(k);
    let pairs: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let seq = dist.sample_sequence(n, derive_seed(seed, STREAM_WORKLOAD, i));
            let report = marking_phases(&seq.pages, k);
            let mut sum = 0u64;
            let mut count = 0u64;
            for phase in report.phases.iter().skip(1).filter(|p| p.complete) {
                sum += phase.clean.expect("marking phases carry clean counts") as u64;
                count += 1;
            }
            (sum as f64, count as f64)
        })
        .collect();
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    if total < 100.0 {
        return Err(Error::Undefined(format!(
            "only {total} complete non-first phases observed; need >= 100"
        )));
    }
    let (mean, stderr) = ratio_of_sums(&pairs)?;
    Ok(MeanEstimate {
        mean,
        stderr,
        samples: total as u64,
    })
}

/// Mean occurrences of the small page `j` per complete big/small phase;
/// compare against [`bounds::occurrence_cap`].
pub fn estimate_small_page_occurrences(
    dist: &PageDistribution,
    k: usize,
    j: Page,
    trials: usize,
    seed: u64,
) -> Result<MeanEstimate> {
    if (j as usize) <= k || (j as usize) > dist.len() {
        return Err(Error::domain(format!(
            "page {j} is not a small page for k = {k}, m = {}",
            dist.len()
        )));
    }
    let n = default_phase_n(k);
    let pairs: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let seq = dist.sample_sequence(n, derive_seed(seed, STREAM_WORKLOAD, i));
            let report = big_small_phases(&seq.pages, k);
            let mut occurrences = 0u64;
            let mut count = 0u64;
            for phase in report.complete_phases() {
                occurrences += seq.pages[phase.start..phase.end]
                    .iter()
                    .filter(|&&p| p == j)
                    .count() as u64;
                count += 1;
            }
            (occurrences as f64, count as f64)
        })
        .collect();
    let (mean, stderr) = ratio_of_sums(&pairs)?;
    let samples: f64 = pairs.iter().map(|p| p.1).sum();
    Ok(MeanEstimate {
        mean,
        stderr,
        samples: samples as u64,
    })
}

/// Mean cost per request of a policy, with standard error over trials.
pub fn estimate_cost_rate(
    policy: &PolicyDescriptor,
    dist: &PageDistribution,
    k: usize,
    n: usize,
    trials: usize,
    seed: u64,
    convention: CostConvention,
) -> Result<MeanEstimate> {
    let pairs: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let seq = dist.sample_sequence(n, derive_seed(seed, STREAM_WORKLOAD, i));
            let run = run_trial_policy(policy, &seq.pages, k, dist, i)?;
            Ok((convention.of(&run), n as f64))
        })
        .collect::<Result<_>>()?;
    let (mean, stderr) = ratio_of_sums(&pairs)?;
    Ok(MeanEstimate {
        mean,
        stderr,
        samples: (n * trials) as u64,
    })
}

/// The separation workload: `m = k + 1` pages, the first `k` sharing
/// `1 - eps` evenly and the last carrying `eps = 1 / k^3`.
pub fn separation_distribution(k: usize) -> Result<PageDistribution> {
    if k < 2 {
        return Err(Error::domain("separation distribution needs k >= 2"));
    }
    let eps = 1.0 / (k as f64).powi(3);
    let mut probs = vec![(1.0 - eps) / k as f64; k];
    probs.push(eps);
    PageDistribution::explicit(probs)
}

/// One policy row of a demo report.
#[derive(Clone, Debug, Serialize)]
pub struct DemoRoeRow {
    pub policy: String,
    pub convention: CostConvention,
    pub estimate: RoeEstimate,
}

/// Results of the uniform `m = k + 1` lower-bound demonstration: every
/// online policy's RoE approaches `H_k`, complete phases average
/// `(k+1) H_k` requests, and Belady pays about 1 per phase.
#[derive(Clone, Debug, Serialize)]
pub struct UniformDemoReport {
    pub k: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub h_k: f64,
    pub expected_phase_length: f64,
    pub mean_phase_length: MeanEstimate,
    pub belady_cost_per_phase: MeanEstimate,
    pub rows: Vec<DemoRoeRow>,
}

pub fn demo_uniform_lower_bound(
    k: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<UniformDemoReport> {
    let dist = PageDistribution::uniform(k + 1)?;
    struct Trial {
        lru: u64,
        fifo: u64,
        marker: u64,
        plfu_faults: u64,
        plfu_cost: u64,
        belady: u64,
        phase_len: u64,
        phases: u64,
    }
    let results: Vec<Trial> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let seq = dist.sample_sequence(n, derive_seed(seed, STREAM_WORKLOAD, i));
            let pages = &seq.pages;
            let report = marking_phases(pages, k);
            let (mut phase_len, mut phases) = (0u64, 0u64);
            for p in report.complete_phases() {
                phase_len += p.len() as u64;
                phases += 1;
            }
            let plfu = run_plfu_oracle(pages, k, &dist)?;
            Ok(Trial {
                lru: run_lru(pages, k).faults,
                fifo: run_fifo(pages, k).faults,
                marker: run_marker(pages, k, derive_seed(seed, STREAM_POLICY, i)).faults,
                plfu_faults: plfu.faults,
                plfu_cost: plfu.cost,
                belady: run_belady(pages, k).faults,
                phase_len,
                phases,
            })
        })
        .collect::<Result<_>>()?;

    let against_belady = |f: fn(&Trial) -> f64| -> Vec<(f64, f64)> {
        results.iter().map(|t| (f(t), t.belady as f64)).collect()
    };
    let make_roe = |pairs: &[(f64, f64)]| -> Result<RoeEstimate> {
        let (r, se) = ratio_of_sums(pairs)?;
        let t = trials as f64;
        Ok(RoeEstimate {
            mean_alg_cost: pairs.iter().map(|p| p.0).sum::<f64>() / t,
            mean_opt_cost: pairs.iter().map(|p| p.1).sum::<f64>() / t,
            roe: r,
            stderr: se,
            n,
            trials,
            seed,
        })
    };

    let per_phase = |f: fn(&Trial) -> f64| -> Vec<(f64, f64)> {
        results.iter().map(|t| (f(t), t.phases as f64)).collect()
    };
    let (phase_mean, phase_se) = ratio_of_sums(&per_phase(|t| t.phase_len as f64))?;
    let (bel_mean, bel_se) = ratio_of_sums(&per_phase(|t| t.belady as f64))?;
    let total_phases: u64 = results.iter().map(|t| t.phases).sum();

    type RowSpec = (&'static str, CostConvention, fn(&Trial) -> f64);
    let mut rows = Vec::new();
    let row_specs: [RowSpec; 5] = [
        ("lru", CostConvention::Faults, |t| t.lru as f64),
        ("fifo", CostConvention::Faults, |t| t.fifo as f64),
        ("marker", CostConvention::Faults, |t| t.marker as f64),
        ("plfu-oracle", CostConvention::Faults, |t| {
            t.plfu_faults as f64
        }),
        ("plfu-oracle", CostConvention::Cost, |t| t.plfu_cost as f64),
    ];
    for (name, convention, f) in row_specs {
        rows.push(DemoRoeRow {
            policy: name.to_string(),
            convention,
            estimate: make_roe(&against_belady(f))?,
        });
    }

    let h_k = bounds::harmonic(k);
    Ok(UniformDemoReport {
        k,
        n,
        trials,
        seed,
        h_k,
        expected_phase_length: (k as f64 + 1.0) * h_k,
        mean_phase_length: MeanEstimate {
            mean: phase_mean,
            stderr: phase_se,
            samples: total_phases,
        },
        belady_cost_per_phase: MeanEstimate {
            mean: bel_mean,
            stderr: bel_se,
            samples: total_phases,
        },
        rows,
    })
}

/// Results of the separation demonstration on the `eps = 1/k^3` workload:
/// PLFU stays below the harmonic bound (< 4) while LRU degrades like
/// `log k`.
#[derive(Clone, Debug, Serialize)]
pub struct SeparationDemoReport {
    pub k: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub roe_lru: RoeEstimate,
    pub roe_plfu: RoeEstimate,
    pub plfu_harmonic_bound: f64,
    /// `roe_lru / roe_plfu`.
    pub separation_ratio: f64,
}

pub fn demo_lru_vs_plfu(
    k: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<SeparationDemoReport> {
    let dist = separation_distribution(k)?;
    let rows: Vec<(f64, f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let seq = dist.sample_sequence(n, derive_seed(seed, STREAM_WORKLOAD, i));
            let lru = run_lru(&seq.pages, k);
            let plfu = run_plfu_oracle(&seq.pages, k, &dist)?;
            let opt = run_belady(&seq.pages, k);
            Ok((lru.faults as f64, plfu.cost as f64, opt.faults as f64))
        })
        .collect::<Result<_>>()?;
    let t = trials as f64;
    let lru_pairs: Vec<_> = rows.iter().map(|r| (r.0, r.2)).collect();
    let plfu_pairs: Vec<_> = rows.iter().map(|r| (r.1, r.2)).collect();
    let (lru_roe, lru_se) = ratio_of_sums(&lru_pairs)?;
    let (plfu_roe, plfu_se) = ratio_of_sums(&plfu_pairs)?;
    let mean_opt = rows.iter().map(|r| r.2).sum::<f64>() / t;
    let roe_lru = RoeEstimate {
        mean_alg_cost: rows.iter().map(|r| r.0).sum::<f64>() / t,
        mean_opt_cost: mean_opt,
        roe: lru_roe,
        stderr: lru_se,
        n,
        trials,
        seed,
    };
    let roe_plfu = RoeEstimate {
        mean_alg_cost: rows.iter().map(|r| r.1).sum::<f64>() / t,
        mean_opt_cost: mean_opt,
        roe: plfu_roe,
        stderr: plfu_se,
        n,
        trials,
        seed,
    };
    Ok(SeparationDemoReport {
        k,
        n,
        trials,
        seed,
        epsilon: 1.0 / (k as f64).powi(3),
        roe_lru,
        roe_plfu,
        plfu_harmonic_bound: bounds::bound_plfu_harmonic(&dist, k)?,
        separation_ratio: lru_roe / plfu_roe,
    })
}
