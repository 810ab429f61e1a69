//! Phase decompositions of request sequences.
//!
//! Three offline decompositions, each tiling the sequence with no gaps or
//! overlaps; at most the final phase is incomplete.
//!
//! - **Marking phases** ([`marking_phases`]): a complete phase contains
//!   exactly `k` distinct pages; the request introducing the `(k+1)`-th
//!   distinct page is the *first* request of the next phase. A page of
//!   phase `i` is *clean* if it was not requested in phase `i-1`; the
//!   first phase counts all its pages as clean (callers that estimate
//!   expectations should skip it).
//! - **Big/small phases** ([`big_small_phases`]): ranks `1..=k` are big
//!   pages, the rest small. A phase ends *at* the request completing the
//!   last missing big page, so the final request of a complete phase is
//!   always big. Reports `s` (distinct small pages) and `f` (small-page
//!   requests) per phase.
//! - **k'-phases** ([`kprime_phases`]): a complete phase ends at the
//!   request completing its `k_prime`-th distinct page.

use std::io::{self, Write};

use serde::Serialize;

use crate::dist::{Page, PageDistribution};
use crate::error::{Error, Result};

/// One phase of a decomposition over `seq[start..end)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Phase {
    pub start: usize,
    pub end: usize,
    pub complete: bool,
    /// Distinct pages requested within the phase.
    pub distinct: usize,
    /// Marking phases: clean-page count `s`.
    pub clean: Option<usize>,
    /// Big/small phases: distinct small pages `s`.
    pub small_distinct: Option<usize>,
    /// Big/small phases: number of small-page requests `f`.
    pub small_requests: Option<usize>,
}

impl Phase {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// The phases of one decomposition, in order.
#[derive(Clone, Debug, Serialize)]
pub struct PhaseReport {
    pub phases: Vec<Phase>,
}

impl PhaseReport {
    pub fn complete_phases(&self) -> impl Iterator<Item = &Phase> {
        self.phases.iter().filter(|p| p.complete)
    }

    /// One record per phase: `start end complete distinct s f`, with `-`
    /// for counters the decomposition does not define.
    pub fn write_records<W: Write>(&self, w: &mut W) -> io::Result<()> {
        fn opt(v: Option<usize>) -> String {
            v.map_or_else(|| "-".to_string(), |x| x.to_string())
        }
        writeln!(w, "# start end complete distinct s f")?;
        for p in &self.phases {
            let s = p.clean.or(p.small_distinct);
            writeln!(
                w,
                "{} {} {} {} {} {}",
                p.start,
                p.end,
                p.complete,
                p.distinct,
                opt(s),
                opt(p.small_requests)
            )?;
        }
        Ok(())
    }
}

fn max_page(seq: &[Page]) -> usize {
    seq.iter().copied().max().unwrap_or(0) as usize
}

const NONE: usize = usize::MAX;

struct MarkingScan {
    /// Generation stamp: `cur_gen[p] == idx` iff page p occurred in the
    /// phase currently being scanned.
    cur_gen: Vec<usize>,
    /// Stamp written when a phase closes; `prev_gen[p] == i` iff p was in
    /// phase i (used to count clean pages of phase i + 1).
    prev_gen: Vec<usize>,
    members: Vec<Page>,
    phases: Vec<Phase>,
    start: usize,
    idx: usize,
}

impl MarkingScan {
    fn close(&mut self, end: usize, complete: bool) {
        let clean = if self.idx == 0 {
            self.members.len()
        } else {
            let prev = self.idx - 1;
            self.members
                .iter()
                .filter(|&&p| self.prev_gen[p as usize] != prev)
                .count()
        };
        for &p in &self.members {
            self.prev_gen[p as usize] = self.idx;
        }
        self.phases.push(Phase {
            start: self.start,
            end,
            complete,
            distinct: self.members.len(),
            clean: Some(clean),
            small_distinct: None,
            small_requests: None,
        });
        self.members.clear();
        self.start = end;
        self.idx += 1;
    }
}

/// Marking-phase decomposition. Per phase, `clean` counts the pages not
/// requested in the previous phase (the `s` the bounds are stated in).
pub fn marking_phases(seq: &[Page], k: usize) -> PhaseReport {
    assert!(k >= 1);
    let npages = max_page(seq) + 1;
    let mut scan = MarkingScan {
        cur_gen: vec![NONE; npages],
        prev_gen: vec![NONE; npages],
        members: Vec::with_capacity(k + 1),
        phases: Vec::new(),
        start: 0,
        idx: 0,
    };
    for (t, &p) in seq.iter().enumerate() {
        let pi = p as usize;
        if scan.cur_gen[pi] == scan.idx {
            continue;
        }
        if scan.members.len() == k {
            scan.close(t, true);
        }
        scan.cur_gen[pi] = scan.idx;
        scan.members.push(p);
    }
    if !seq.is_empty() {
        scan.close(seq.len(), false);
    }
    PhaseReport {
        phases: scan.phases,
    }
}

/// Big/small decomposition: a phase ends at the request that completes
/// the set of big pages (ranks `1..=k`).
pub fn big_small_phases(seq: &[Page], k: usize) -> PhaseReport {
    assert!(k >= 1);
    let npages = max_page(seq) + 1;
    let mut seen_gen = vec![NONE; npages];
    let mut phases = Vec::new();
    let mut idx = 0usize;
    let mut start = 0usize;
    let mut big_count = 0usize;
    let mut small_distinct = 0usize;
    let mut small_requests = 0usize;

    for (t, &p) in seq.iter().enumerate() {
        let pi = p as usize;
        let first_in_phase = seen_gen[pi] != idx;
        if first_in_phase {
            seen_gen[pi] = idx;
        }
        if pi > k {
            small_requests += 1;
            if first_in_phase {
                small_distinct += 1;
            }
        } else if first_in_phase {
            big_count += 1;
            if big_count == k {
                phases.push(Phase {
                    start,
                    end: t + 1,
                    complete: true,
                    distinct: big_count + small_distinct,
                    clean: None,
                    small_distinct: Some(small_distinct),
                    small_requests: Some(small_requests),
                });
                idx += 1;
                start = t + 1;
                big_count = 0;
                small_distinct = 0;
                small_requests = 0;
            }
        }
    }
    if start < seq.len() {
        phases.push(Phase {
            start,
            end: seq.len(),
            complete: false,
            distinct: big_count + small_distinct,
            clean: None,
            small_distinct: Some(small_distinct),
            small_requests: Some(small_requests),
        });
    }
    PhaseReport { phases }
}

/// k'-phase decomposition: a phase ends at the request completing its
/// `k_prime`-th distinct page.
pub fn kprime_phases(seq: &[Page], k_prime: usize) -> PhaseReport {
    assert!(k_prime >= 1);
    let npages = max_page(seq) + 1;
    let mut seen_gen = vec![NONE; npages];
    let mut phases = Vec::new();
    let mut idx = 0usize;
    let mut start = 0usize;
    let mut distinct = 0usize;

    for (t, &p) in seq.iter().enumerate() {
        let pi = p as usize;
        if seen_gen[pi] != idx {
            seen_gen[pi] = idx;
            distinct += 1;
            if distinct == k_prime {
                phases.push(Phase {
                    start,
                    end: t + 1,
                    complete: true,
                    distinct,
                    clean: None,
                    small_distinct: None,
                    small_requests: None,
                });
                idx += 1;
                start = t + 1;
                distinct = 0;
            }
        }
    }
    if start < seq.len() {
        phases.push(Phase {
            start,
            end: seq.len(),
            complete: false,
            distinct,
            clean: None,
            small_distinct: None,
            small_requests: None,
        });
    }
    PhaseReport { phases }
}

/// The largest `k'` with `p[1:k'] <= 1 - p[k+1:m] / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KPrimeThreshold {
    pub k_prime: usize,
    /// Set when the tail mass is zero, which makes the associated
    /// cost-rate bound vacuous.
    pub vacuous: bool,
}

/// Computes the k'-phase cutoff used by the offline cost-rate lower
/// bound.
pub fn kprime_threshold(dist: &PageDistribution, k: usize) -> Result<KPrimeThreshold> {
    let m = dist.len();
    if k >= m {
        return Err(Error::domain(format!(
            "kprime_threshold requires k < m (k = {k}, m = {m})"
        )));
    }
    let tail = dist.tail(k);
    if tail <= 0.0 {
        return Ok(KPrimeThreshold {
            k_prime: m,
            vacuous: true,
        });
    }
    // Tiny slack so that exact boundary cases (e.g. uniform masses summing
    // to the threshold) are kept, as the <= in the definition intends.
    let threshold = 1.0 - tail / 2.0 + 1e-12;
    let mut k_prime = 0usize;
    for i in 1..=m {
        if dist.prefix(1, i).expect("in range") <= threshold {
            k_prime = i;
        } else {
            break;
        }
    }
    Ok(KPrimeThreshold {
        k_prime,
        vacuous: false,
    })
}
