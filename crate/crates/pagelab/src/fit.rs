//! Trace ingestion, ranked CDFs, the Kolmogorov-Smirnov statistic, and
//! fitting of the power-law and multi-core power-law models.
//!
//! Both curves live on the rank axis: the empirical CDF is the running
//! share of requests covered by the most frequent `r` pages, and the model
//! CDF is the same accumulation under a candidate distribution with `m`
//! equal to the trace's distinct-page count (unseen pages are not
//! identifiable from a trace).
//!
//! Fits minimize the K-S statistic `sup_r |X(r) - Y(r)|` directly: a
//! coarse grid (`alpha` in steps of 0.05; `kappa` on a log grid with 7
//! points per decade up to 1e6) followed by coordinate-wise golden-section
//! refinement to 1e-3 in `alpha` and 1% in `kappa`. Log-log regression is
//! deliberately not offered; a goodness-of-fit statistic is the sounder
//! objective for heavy-tailed data.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{kahan_sum, KahanSum, PageDistribution, RequestSequence};
use crate::error::{Error, Result};

/// Per-page request counts of a trace, frequency-ranked.
#[derive(Clone, Debug)]
pub struct TraceSummary {
    /// (token, count) in order of first appearance.
    counts: Vec<(String, u64)>,
    /// Counts sorted descending; ties keep first-appearance order.
    pub ranked_counts: Vec<u64>,
    pub total: u64,
    /// Distinct pages observed.
    pub m: usize,
}

impl TraceSummary {
    /// Builds a summary from (token, count) pairs in first-appearance
    /// order.
    pub fn from_counts(counts: Vec<(String, u64)>) -> Result<Self> {
        if counts.is_empty() || counts.iter().all(|(_, c)| *c == 0) {
            return Err(Error::domain("trace has no requests"));
        }
        if counts.iter().any(|(_, c)| *c == 0) {
            return Err(Error::domain("trace counts must be positive"));
        }
        let total: u64 = counts.iter().map(|(_, c)| c).sum();
        let mut ranked_counts: Vec<u64> = counts.iter().map(|(_, c)| *c).collect();
        ranked_counts.sort_by(|a, b| b.cmp(a)); // stable: ties keep first appearance
        let m = counts.len();
        Ok(Self {
            counts,
            ranked_counts,
            total,
            m,
        })
    }

    /// Counts the pages of a sequence (tokens are the decimal page ids).
    pub fn from_sequence(seq: &RequestSequence) -> Result<Self> {
        let mut order = Vec::new();
        let mut counter = std::collections::HashMap::new();
        for &p in &seq.pages {
            let e = counter.entry(p).or_insert(0u64);
            if *e == 0 {
                order.push(p);
            }
            *e += 1;
        }
        Self::from_counts(
            order
                .into_iter()
                .map(|p| (p.to_string(), counter[&p]))
                .collect(),
        )
    }

    pub fn counts(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(t, c)| (t.as_str(), *c))
    }

    /// Accumulated relative frequency over the frequency-ranked pages.
    /// Integer accumulation keeps the curve exactly non-decreasing and
    /// ending at 1.
    pub fn empirical_cdf(&self) -> Vec<f64> {
        let mut acc = 0u64;
        self.ranked_counts
            .iter()
            .map(|&c| {
                acc += c;
                acc as f64 / self.total as f64
            })
            .collect()
    }
}

/// Reads a trace file: one page identifier per line (any token), `#`
/// lines and blank lines ignored.
pub fn ingest_trace(path: impl AsRef<Path>) -> Result<TraceSummary> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    let mut order: Vec<String> = Vec::new();
    let mut counter: std::collections::HashMap<String, u64> = std::collections::HashMap::new();
    for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        let tok = line.trim();
        if tok.is_empty() || tok.starts_with('#') {
            continue;
        }
        if tok.split_whitespace().count() != 1 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected one token per line, got {tok:?}"),
            });
        }
        let e = counter.entry(tok.to_string()).or_insert(0);
        if *e == 0 {
            order.push(tok.to_string());
        }
        *e += 1;
    }
    if order.is_empty() {
        return Err(Error::domain(format!(
            "trace {} contains no requests",
            path.display()
        )));
    }
    TraceSummary::from_counts(
        order
            .into_iter()
            .map(|t| {
                let c = counter[&t];
                (t, c)
            })
            .collect(),
    )
}

/// `sup_r |X(r) - Y(r)|` over two equal-length cumulative curves. Both
/// must be non-decreasing and end at 1 within 1e-6.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::domain(format!(
            "ks_statistic curve lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::domain("ks_statistic needs nonempty curves"));
    }
    for curve in [a, b] {
        let mut prev = 0.0;
        for &v in curve {
            if v < prev - 1e-12 {
                return Err(Error::domain("ks_statistic curves must be non-decreasing"));
            }
            prev = v;
        }
        if (curve[curve.len() - 1] - 1.0).abs() > 1e-6 {
            return Err(Error::domain(format!(
                "cumulative curve ends at {}, expected 1 within 1e-6",
                curve[curve.len() - 1]
            )));
        }
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Which model a [`FitResult`] used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FitModel {
    PowerLaw,
    MultiCore,
}

/// A fitted model with both rank-indexed cumulative curves.
#[derive(Clone, Debug, Serialize)]
pub struct FitResult {
    pub model: FitModel,
    pub alpha: f64,
    /// 1 for the plain power law.
    pub kappa: f64,
    pub ks: f64,
    pub m: usize,
    pub total: u64,
    #[serde(skip)]
    pub empirical_cdf: Vec<f64>,
    #[serde(skip)]
    pub model_cdf: Vec<f64>,
}

/// K-S distance between the empirical curve and the model
/// `(alpha, kappa)` on `m = emp.len()` ranks, without building a full
/// `PageDistribution`.
fn model_ks(emp: &[f64], alpha: f64, kappa: f64) -> f64 {
    let m = emp.len();
    let mut raw: Vec<f64> = (1..=m).map(|i| (i as f64).powf(-alpha)).collect();
    if kappa != 1.0 {
        let norm = kahan_sum(raw.iter().copied());
        for r in raw.iter_mut() {
            let p = *r / norm;
            *r = -f64::exp_m1(kappa * f64::ln_1p(-p));
        }
    }
    let total = kahan_sum(raw.iter().copied());
    let mut acc = KahanSum::default();
    let mut ks = 0.0f64;
    for (r, &e) in raw.iter().zip(emp) {
        acc.add(*r);
        ks = ks.max((acc.value() / total - e).abs());
    }
    ks
}

const ALPHA_GRID_STEP: f64 = 0.05;
const ALPHA_GRID_MAX: usize = 60; // 0.05 .. 3.0
const KAPPA_POINTS_PER_DECADE: usize = 7;
const KAPPA_DECADES: usize = 6; // 1 .. 1e6

fn alpha_grid() -> impl Iterator<Item = f64> {
    (1..=ALPHA_GRID_MAX).map(|i| i as f64 * ALPHA_GRID_STEP)
}

fn kappa_grid() -> impl Iterator<Item = f64> {
    (0..=KAPPA_POINTS_PER_DECADE * KAPPA_DECADES)
        .map(|j| 10f64.powf(j as f64 / KAPPA_POINTS_PER_DECADE as f64))
}

/// Golden-section minimization of a unimodal-ish objective on `[lo, hi]`
/// down to interval width `tol`.
fn golden_min(mut lo: f64, mut hi: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INVPHI * (hi - lo);
    let mut d = lo + INVPHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INVPHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INVPHI * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

fn finish(
    trace: &TraceSummary,
    model: FitModel,
    alpha: f64,
    kappa: f64,
    emp: Vec<f64>,
) -> Result<FitResult> {
    let dist = match model {
        FitModel::PowerLaw => PageDistribution::power_law(alpha, trace.m)?,
        FitModel::MultiCore => PageDistribution::multicore_power_law(alpha, trace.m, kappa)?,
    };
    let mut acc = KahanSum::default();
    let model_cdf: Vec<f64> = dist
        .probs()
        .iter()
        .map(|&p| {
            acc.add(p);
            acc.value()
        })
        .collect();
    let ks = ks_statistic(&emp, &model_cdf)?;
    Ok(FitResult {
        model,
        alpha,
        kappa,
        ks,
        m: trace.m,
        total: trace.total,
        empirical_cdf: emp,
        model_cdf,
    })
}

/// Fits the plain power law by K-S minimization over `alpha`.
pub fn fit_power_law(trace: &TraceSummary) -> Result<FitResult> {
    if trace.m < 2 {
        return Err(Error::domain(
            "fitting needs at least two distinct pages in the trace",
        ));
    }
    let emp = trace.empirical_cdf();
    let coarse: Vec<(usize, f64)> = alpha_grid()
        .enumerate()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, a)| (i, model_ks(&emp, a, 1.0)))
        .collect();
    let (best_idx, _) = coarse
        .iter()
        .fold((0usize, f64::INFINITY), |acc, &(i, ks)| {
            if ks < acc.1 {
                (i, ks)
            } else {
                acc
            }
        });
    let best_alpha = (best_idx + 1) as f64 * ALPHA_GRID_STEP;
    let lo = (best_alpha - ALPHA_GRID_STEP).max(1e-3);
    let hi = best_alpha + ALPHA_GRID_STEP;
    let (alpha, _) = golden_min(lo, hi, 1e-3, |a| model_ks(&emp, a, 1.0));
    finish(trace, FitModel::PowerLaw, alpha, 1.0, emp)
}

/// Fits the multi-core power law by K-S minimization over
/// `(alpha, kappa)`. The plain power-law fit is always a candidate
/// (`kappa = 1` is in the search space), so the returned K-S never
/// exceeds [`fit_power_law`]'s.
pub fn fit_multicore(trace: &TraceSummary) -> Result<FitResult> {
    if trace.m < 2 {
        return Err(Error::domain(
            "fitting needs at least two distinct pages in the trace",
        ));
    }
    let emp = trace.empirical_cdf();
    let kappas: Vec<f64> = kappa_grid().collect();

    // Coarse grid; base powers are shared across the kappa axis.
    let m = trace.m;
    let coarse: Vec<(usize, usize, f64)> = alpha_grid()
        .enumerate()
        .collect::<Vec<_>>()
        .into_par_iter()
        .flat_map_iter(|(ai, alpha)| {
            let base: Vec<f64> = (1..=m).map(|i| (i as f64).powf(-alpha)).collect();
            let norm = kahan_sum(base.iter().copied());
            let kappas = kappas.clone();
            let emp = &emp;
            kappas
                .into_iter()
                .enumerate()
                .map(move |(ki, kappa)| {
                    let mut acc = KahanSum::default();
                    let mut scratch = Vec::with_capacity(m);
                    for &b in &base {
                        let raw = if kappa == 1.0 {
                            b
                        } else {
                            -f64::exp_m1(kappa * f64::ln_1p(-b / norm))
                        };
                        acc.add(raw);
                        scratch.push(raw);
                    }
                    let total = acc.value();
                    let mut run = KahanSum::default();
                    let mut ks = 0.0f64;
                    for (r, &e) in scratch.iter().zip(emp.iter()) {
                        run.add(*r);
                        ks = ks.max((run.value() / total - e).abs());
                    }
                    (ai, ki, ks)
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let mut best = (f64::INFINITY, 0usize, 0usize);
    for &(ai, ki, ks) in &coarse {
        if ks < best.0 || (ks == best.0 && (ai, ki) < (best.1, best.2)) {
            best = (ks, ai, ki);
        }
    }
    let mut alpha = (best.1 + 1) as f64 * ALPHA_GRID_STEP;
    let mut kappa = kappas[best.2];

    // Coordinate-wise refinement: alpha, then kappa (log scale), then
    // alpha again.
    let log_step = 1.0 / KAPPA_POINTS_PER_DECADE as f64;
    let kappa_tol = 1.01f64.log10();
    for pass in 0..3 {
        if pass % 2 == 0 {
            let lo = (alpha - ALPHA_GRID_STEP).max(1e-3);
            let hi = alpha + ALPHA_GRID_STEP;
            alpha = golden_min(lo, hi, 1e-3, |a| model_ks(&emp, a, kappa)).0;
        } else {
            let center = kappa.log10();
            let lo = (center - log_step).max(0.0);
            let hi = (center + log_step).min(KAPPA_DECADES as f64);
            let x = golden_min(lo, hi, kappa_tol, |lk| {
                model_ks(&emp, alpha, 10f64.powf(lk))
            })
            .0;
            kappa = 10f64.powf(x).max(1.0);
        }
    }

    let candidate = finish(trace, FitModel::MultiCore, alpha, kappa, emp.clone())?;
    // kappa = 1 nests the power law; keep whichever K-S is smaller.
    let plain = fit_power_law(trace)?;
    if plain.ks < candidate.ks {
        Ok(FitResult {
            model: FitModel::MultiCore,
            kappa: 1.0,
            ..plain
        })
    } else {
        Ok(candidate)
    }
}

/// Writes `<prefix>_data.dat` (empirical) and `<prefix>_model.dat`
/// (fitted) as `rank value` lines, one point per rank.
pub fn export_cdf_curves(fit: &FitResult, prefix: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
    let prefix = prefix.as_ref();
    let with_suffix = |suffix: &str| -> PathBuf {
        let mut name = prefix.file_name().unwrap_or_default().to_os_string();
        name.push(suffix);
        prefix.with_file_name(name)
    };
    let data_path = with_suffix("_data.dat");
    let model_path = with_suffix("_model.dat");
    for (path, curve) in [
        (&data_path, &fit.empirical_cdf),
        (&model_path, &fit.model_cdf),
    ] {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        for (rank, v) in curve.iter().enumerate() {
            writeln!(w, "{} {}", rank + 1, v)?;
        }
    }
    Ok((data_path, model_path))
}
