//! Page-probability distributions over a frequency-ranked page universe.
//!
//! A [`PageDistribution`] holds probabilities `p_1 >= p_2 >= ... >= p_m`
//! (trailing zero entries are allowed as dummy pages) together with their
//! prefix sums, so that range masses `p[x:y] = p_x + ... + p_y` cost O(1).
//!
//! Three families are built in:
//!
//! - explicit probability vectors,
//! - the power law `p_i = i^(-alpha) / L(alpha, m)` with
//!   `L(alpha, m) = sum_{i=1}^{m} i^(-alpha)`,
//! - the multi-core power law `q_i = C * (1 - (1 - p_i)^kappa)`, the
//!   aggregate request distribution of `kappa` concurrent power-law
//!   streams sharing one cache.
//!
//! Sampling is by inverse transform over the stored prefix sums, seeded and
//! reproducible.

use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 1-based page rank. Rank 1 is the most probable page.
pub type Page = u32;

/// Normalization mismatch tolerated when validating a distribution.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Running compensated (Kahan) summation.
///
/// Plain left-to-right summation of 10^7 terms loses up to ~1e-9 of relative
/// accuracy, right at the normalization tolerance; compensation keeps the
/// error at a few ulps regardless of length.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub(crate) fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(self) -> f64 {
        self.sum
    }
}

pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = KahanSum::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Partial zeta sum `L(alpha, m) = sum_{i=1}^{m} 1 / i^alpha`,
/// the normalization constant of the power law.
///
/// # Examples
///
/// ```
/// let l = pagelab::dist::zeta_partial(1.0, 4).unwrap();
/// assert!((l - 25.0 / 12.0).abs() < 1e-12);
/// ```
pub fn zeta_partial(alpha: f64, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("zeta_partial: m must be >= 1"));
    }
    let alpha_valid = alpha.is_finite() && alpha > 0.0;
    if !alpha_valid {
        return Err(Error::domain("zeta_partial: alpha must be > 0"));
    }
    let mut acc = KahanSum::default();
    for i in 1..=m {
        acc.add((i as f64).powf(-alpha));
    }
    Ok(acc.value())
}

/// Which family a distribution was constructed from.
#[derive(Clone, Debug, PartialEq)]
pub enum DistKind {
    Explicit,
    PowerLaw { alpha: f64 },
    MultiCore { alpha: f64, kappa: f64 },
}

/// Serializable description of a distribution, e.g.
/// `{"kind":"powerlaw","alpha":1.0,"m":64}` or
/// `{"kind":"explicit","probs":[0.5,0.5]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DistDescriptor {
    Explicit {
        probs: Vec<f64>,
    },
    #[serde(rename = "powerlaw")]
    PowerLaw {
        alpha: f64,
        m: usize,
    },
    #[serde(rename = "multicore")]
    MultiCore {
        alpha: f64,
        kappa: f64,
        m: usize,
    },
}

impl std::fmt::Display for DistDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DistDescriptor::Explicit { probs } => write!(f, "explicit(m={})", probs.len()),
            DistDescriptor::PowerLaw { alpha, m } => write!(f, "powerlaw(alpha={alpha},m={m})"),
            DistDescriptor::MultiCore { alpha, kappa, m } => {
                write!(f, "multicore(alpha={alpha},kappa={kappa},m={m})")
            }
        }
    }
}

/// Sorted page probabilities with precomputed prefix sums.
///
/// Immutable after construction; cheap to share across threads.
#[derive(Clone, Debug)]
pub struct PageDistribution {
    probs: Vec<f64>,
    cum: Vec<f64>,
    kind: DistKind,
    /// Number of leading pages with positive probability. Zero-probability
    /// dummy pages are never sampled.
    support: usize,
}

impl PageDistribution {
    /// Builds a distribution from an explicit probability vector.
    ///
    /// The vector must be non-increasing, non-negative, and sum to 1 within
    /// [`NORMALIZATION_TOL`]. Trailing zeros are allowed (dummy pages).
    pub fn explicit(probs: Vec<f64>) -> Result<Self> {
        Self::build(probs, DistKind::Explicit)
    }

    /// The uniform distribution on `m` pages.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("uniform: m must be >= 1"));
        }
        Self::build(vec![1.0 / m as f64; m], DistKind::Explicit)
    }

    /// The power law `p_i = i^(-alpha) / L(alpha, m)`.
    ///
    /// # Examples
    ///
    /// ```
    /// let d = pagelab::dist::PageDistribution::power_law(1.0, 4).unwrap();
    /// assert!((d.probs()[0] - 0.48).abs() < 1e-12);
    /// assert!((d.probs()[3] - 0.12).abs() < 1e-12);
    /// ```
    pub fn power_law(alpha: f64, m: usize) -> Result<Self> {
        let norm = zeta_partial(alpha, m)?;
        let probs: Vec<f64> = (1..=m).map(|i| (i as f64).powf(-alpha) / norm).collect();
        Self::build(probs, DistKind::PowerLaw { alpha })
    }

    /// The multi-core power law `q_i = C * (1 - (1 - p_i)^kappa)` with
    /// `p_i` the power law above and `C` the normalization constant.
    ///
    /// `kappa` is real-valued and must be at least 1; `kappa = 1` reduces to
    /// the plain power law. The raw mass is evaluated as
    /// `-expm1(kappa * ln(1 - p))`, which stays accurate for tiny `p` and
    /// large `kappa`, and equals exactly 1 at `p = 1`.
    pub fn multicore_power_law(alpha: f64, m: usize, kappa: f64) -> Result<Self> {
        let kappa_valid = kappa.is_finite() && kappa >= 1.0;
        if !kappa_valid {
            return Err(Error::domain("multicore_power_law: kappa must be >= 1"));
        }
        let norm = zeta_partial(alpha, m)?;
        let raw: Vec<f64> = (1..=m)
            .map(|i| {
                let p = (i as f64).powf(-alpha) / norm;
                -f64::exp_m1(kappa * f64::ln_1p(-p))
            })
            .collect();
        let c = kahan_sum(raw.iter().copied());
        let probs: Vec<f64> = raw.into_iter().map(|r| r / c).collect();
        Self::build(probs, DistKind::MultiCore { alpha, kappa })
    }

    fn build(probs: Vec<f64>, kind: DistKind) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::domain("distribution must have at least one page"));
        }
        let mut acc = KahanSum::default();
        let mut cum = Vec::with_capacity(probs.len());
        let mut prev = f64::INFINITY;
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::domain(format!(
                    "probability at rank {} is invalid: {p}",
                    i + 1
                )));
            }
            if p > prev {
                return Err(Error::domain(format!(
                    "probabilities must be non-increasing (rank {} rises)",
                    i + 1
                )));
            }
            prev = p;
            acc.add(p);
            cum.push(acc.value());
        }
        let total = acc.value();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::domain(format!(
                "probabilities sum to {total}, expected 1 within {NORMALIZATION_TOL:e}"
            )));
        }
        let support = probs.iter().rposition(|&p| p > 0.0).map_or(0, |i| i + 1);
        Ok(Self {
            probs,
            cum,
            kind,
            support,
        })
    }

    /// Number of pages `m` (including dummy pages).
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn kind(&self) -> &DistKind {
        &self.kind
    }

    /// Probability of the page with 1-based rank `i`.
    pub fn prob(&self, i: Page) -> f64 {
        self.probs[(i - 1) as usize]
    }

    /// Range mass `p[x:y] = sum_{i=x}^{y} p_i`, inclusive on both ends,
    /// 1-based. O(1) via the stored prefix sums.
    ///
    /// # Examples
    ///
    /// ```
    /// let d = pagelab::dist::PageDistribution::power_law(1.0, 4).unwrap();
    /// assert!((d.prefix(2, 3).unwrap() - 0.40).abs() < 1e-12);
    /// ```
    pub fn prefix(&self, x: usize, y: usize) -> Result<f64> {
        if x < 1 || x > y || y > self.len() {
            return Err(Error::index(format!(
                "prefix range [{x}:{y}] invalid for m = {}",
                self.len()
            )));
        }
        let hi = self.cum[y - 1];
        let lo = if x >= 2 { self.cum[x - 2] } else { 0.0 };
        Ok(hi - lo)
    }

    /// Tail mass `p[k+1:m]`; zero when `k >= m`.
    pub fn tail(&self, k: usize) -> f64 {
        if k >= self.len() {
            0.0
        } else {
            self.cum[self.len() - 1] - if k >= 1 { self.cum[k - 1] } else { 0.0 }
        }
    }

    /// Appends `m_new - m` zero-probability dummy pages.
    ///
    /// Range masses over existing ranks are unchanged. The result reports
    /// itself as `Explicit`: a padded power law is no longer the power law
    /// of its new length.
    pub fn pad_to(&self, m_new: usize) -> Result<Self> {
        if m_new < self.len() {
            return Err(Error::domain(format!(
                "pad_to: m_new = {m_new} is below current m = {}",
                self.len()
            )));
        }
        if m_new == self.len() {
            return Ok(self.clone());
        }
        let mut probs = self.probs.clone();
        probs.resize(m_new, 0.0);
        let mut cum = self.cum.clone();
        cum.resize(m_new, *self.cum.last().unwrap());
        Ok(Self {
            probs,
            cum,
            kind: DistKind::Explicit,
            support: self.support,
        })
    }

    /// Draws `n` i.i.d. page ranks. Deterministic for a given seed;
    /// zero-probability pages are never drawn.
    pub fn sample_sequence(&self, n: usize, seed: u64) -> RequestSequence {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pages = Vec::with_capacity(n);
        for _ in 0..n {
            let u: f64 = rng.gen();
            // First rank whose cumulative mass exceeds u; clamp guards the
            // case u >= cum[m-1] when the total is slightly below 1.
            let idx = self.cum.partition_point(|&c| c <= u);
            pages.push((idx.min(self.support - 1) + 1) as Page);
        }
        RequestSequence {
            pages,
            source: SequenceSource::Synthetic {
                seed,
                descriptor: self.descriptor(),
            },
        }
    }

    /// Serializable descriptor for this distribution.
    pub fn descriptor(&self) -> DistDescriptor {
        match self.kind {
            DistKind::Explicit => DistDescriptor::Explicit {
                probs: self.probs.clone(),
            },
            DistKind::PowerLaw { alpha } => DistDescriptor::PowerLaw {
                alpha,
                m: self.len(),
            },
            DistKind::MultiCore { alpha, kappa } => DistDescriptor::MultiCore {
                alpha,
                kappa,
                m: self.len(),
            },
        }
    }

    pub fn from_descriptor(desc: &DistDescriptor) -> Result<Self> {
        match desc {
            DistDescriptor::Explicit { probs } => Self::explicit(probs.clone()),
            DistDescriptor::PowerLaw { alpha, m } => Self::power_law(*alpha, *m),
            DistDescriptor::MultiCore { alpha, kappa, m } => {
                Self::multicore_power_law(*alpha, *m, *kappa)
            }
        }
    }
}

/// Where a request sequence came from.
#[derive(Clone, Debug)]
pub enum SequenceSource {
    Synthetic {
        seed: u64,
        descriptor: DistDescriptor,
    },
    TraceFile {
        path: PathBuf,
    },
}

/// An ordered list of page requests.
///
/// Synthetic sequences hold 1-based ranks into their generating
/// distribution. Sequences read from trace files hold dense 1-based
/// identifiers (numeric tokens are kept as-is when possible).
#[derive(Clone, Debug)]
pub struct RequestSequence {
    pub pages: Vec<Page>,
    pub source: SequenceSource,
}

impl RequestSequence {
    pub fn len(&self) -> usize {
        self.pages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pages.is_empty()
    }

    /// Number of distinct pages requested.
    pub fn distinct(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        self.pages.iter().filter(|&&p| seen.insert(p)).count()
    }

    /// Writes one page index per line. Callers may prepend `#` comment
    /// lines of their own; readers skip them.
    pub fn write_lines<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for &p in &self.pages {
            writeln!(w, "{p}")?;
        }
        Ok(())
    }

    /// Reads a sequence from a trace file: one token per line, `#` lines and
    /// blank lines ignored.
    ///
    /// If every token is a positive integer and the largest stays within a
    /// dense range (policies index arrays by page id), the values are used
    /// directly, so a generated file round-trips exactly. Otherwise tokens
    /// are assigned dense identifiers in order of first appearance.
    pub fn from_trace_file(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let file = std::fs::File::open(&path)?;
        let mut tokens = Vec::new();
        for (lineno, line) in io::BufReader::new(file).lines().enumerate() {
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
                    message: format!("expected one token, got {tok:?}"),
                });
            }
            tokens.push(tok.to_string());
        }
        if tokens.is_empty() {
            return Err(Error::domain(format!(
                "trace {} contains no requests",
                path.display()
            )));
        }
        let numeric: Option<Vec<Page>> = tokens
            .iter()
            .map(|t| t.parse::<Page>().ok().filter(|&v| v >= 1))
            .collect();
        let dense_cap = (8 * tokens.len() as u64).max(1 << 16).min(u32::MAX as u64) as Page;
        let pages = match numeric {
            Some(pages) if pages.iter().all(|&p| p <= dense_cap) => pages,
            _ => {
                let mut ids = std::collections::HashMap::new();
                tokens
                    .iter()
                    .map(|t| {
                        let next = ids.len() as Page + 1;
                        *ids.entry(t.clone()).or_insert(next)
                    })
                    .collect()
            }
        };
        Ok(Self {
            pages,
            source: SequenceSource::TraceFile { path },
        })
    }
}
