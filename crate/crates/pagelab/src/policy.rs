//! Cache replacement policies as deterministic (or seeded) state machines.
//!
//! Every policy starts with an empty cache of capacity `k` and pays unit
//! cost per fault, with one exception: oracle PLFU pins the `k` most
//! probable pages of its generating distribution and pays 2 per fault
//! (evict plus immediate re-admit). The empirical PLFU variant keeps
//! global frequency counters instead of oracle knowledge and uses the
//! same cost-2 convention.
//!
//! Tie-breaking is by lower page identifier everywhere: Belady among
//! never-requested-again pages, LFU among equal counters, PLFU among
//! equal frequencies. This makes every run reproducible.

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dist::{Page, PageDistribution};
use crate::error::{Error, Result};

/// Policy name plus parameters, parseable from CLI strings such as
/// `lru`, `marker:7`, or `plfu-oracle`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolicyDescriptor {
    Lru,
    Fifo,
    Fwf,
    Marker { seed: u64 },
    PlfuOracle,
    PlfuEmpirical,
    LfuInCache,
    Belady,
}

impl FromStr for PolicyDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lru" => Ok(Self::Lru),
            "fifo" => Ok(Self::Fifo),
            "fwf" => Ok(Self::Fwf),
            "plfu-oracle" => Ok(Self::PlfuOracle),
            "plfu-empirical" => Ok(Self::PlfuEmpirical),
            "lfu-incache" => Ok(Self::LfuInCache),
            "belady" => Ok(Self::Belady),
            other => {
                if let Some(seed) = other.strip_prefix("marker:") {
                    let seed = seed
                        .parse::<u64>()
                        .map_err(|_| Error::domain(format!("invalid marker seed in {other:?}")))?;
                    Ok(Self::Marker { seed })
                } else {
                    Err(Error::domain(format!(
                        "unknown policy {other:?}; expected one of \
                         lru, fifo, fwf, marker:<seed>, plfu-oracle, \
                         plfu-empirical, lfu-incache, belady"
                    )))
                }
            }
        }
    }
}

impl std::fmt::Display for PolicyDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Lru => write!(f, "lru"),
            Self::Fifo => write!(f, "fifo"),
            Self::Fwf => write!(f, "fwf"),
            Self::Marker { seed } => write!(f, "marker:{seed}"),
            Self::PlfuOracle => write!(f, "plfu-oracle"),
            Self::PlfuEmpirical => write!(f, "plfu-empirical"),
            Self::LfuInCache => write!(f, "lfu-incache"),
            Self::Belady => write!(f, "belady"),
        }
    }
}

/// Outcome of one policy run over one sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolicyRun {
    /// Descriptor string, e.g. `"marker:7"`.
    pub policy: String,
    pub faults: u64,
    /// Total cost: equals `faults` except for the PLFU variants, which pay
    /// 2 per fault.
    pub cost: u64,
}

impl PolicyRun {
    fn unit(policy: &PolicyDescriptor, faults: u64) -> Self {
        Self {
            policy: policy.to_string(),
            faults,
            cost: faults,
        }
    }

    fn doubled(policy: &PolicyDescriptor, faults: u64) -> Self {
        Self {
            policy: policy.to_string(),
            faults,
            cost: 2 * faults,
        }
    }
}

/// Runs any policy by descriptor. `dist` is required for `plfu-oracle`
/// (the true generating distribution) and ignored otherwise.
pub fn run_policy(
    desc: &PolicyDescriptor,
    seq: &[Page],
    k: usize,
    dist: Option<&PageDistribution>,
) -> Result<PolicyRun> {
    match desc {
        PolicyDescriptor::Lru => Ok(run_lru(seq, k)),
        PolicyDescriptor::Fifo => Ok(run_fifo(seq, k)),
        PolicyDescriptor::Fwf => Ok(run_fwf(seq, k)),
        PolicyDescriptor::Marker { seed } => Ok(run_marker(seq, k, *seed)),
        PolicyDescriptor::PlfuOracle => {
            let dist = dist
                .ok_or_else(|| Error::domain("plfu-oracle requires the generating distribution"))?;
            run_plfu_oracle(seq, k, dist)
        }
        PolicyDescriptor::PlfuEmpirical => Ok(run_plfu_empirical(seq, k)),
        PolicyDescriptor::LfuInCache => Ok(run_incache_lfu(seq, k)),
        PolicyDescriptor::Belady => Ok(run_belady(seq, k)),
    }
}

fn max_page(seq: &[Page]) -> usize {
    seq.iter().copied().max().unwrap_or(0) as usize
}

/// Least-recently-used eviction.
pub fn run_lru(seq: &[Page], k: usize) -> PolicyRun {
    assert!(k >= 1);
    let mut last_use = vec![0u64; max_page(seq) + 1];
    let mut resident: Vec<Page> = Vec::with_capacity(k);
    let mut is_resident = vec![false; last_use.len()];
    let mut faults = 0u64;
    for (t, &p) in seq.iter().enumerate() {
        let now = t as u64 + 1;
        if is_resident[p as usize] {
            last_use[p as usize] = now;
            continue;
        }
        faults += 1;
        if resident.len() == k {
            let (pos, _) = resident
                .iter()
                .enumerate()
                .min_by_key(|&(_, &q)| last_use[q as usize])
                .unwrap();
            is_resident[resident[pos] as usize] = false;
            resident.swap_remove(pos);
        }
        resident.push(p);
        is_resident[p as usize] = true;
        last_use[p as usize] = now;
    }
    PolicyRun::unit(&PolicyDescriptor::Lru, faults)
}

/// First-in-first-out eviction (arrival order, not recency).
pub fn run_fifo(seq: &[Page], k: usize) -> PolicyRun {
    assert!(k >= 1);
    let mut queue = std::collections::VecDeque::with_capacity(k);
    let mut is_resident = vec![false; max_page(seq) + 1];
    let mut faults = 0u64;
    for &p in seq {
        if is_resident[p as usize] {
            continue;
        }
        faults += 1;
        if queue.len() == k {
            let out: Page = queue.pop_front().unwrap();
            is_resident[out as usize] = false;
        }
        queue.push_back(p);
        is_resident[p as usize] = true;
    }
    PolicyRun::unit(&PolicyDescriptor::Fifo, faults)
}

/// Flush-when-full: when a fault arrives with all `k` resident pages
/// marked, the whole cache is evicted and the faulting request starts the
/// next phase. Fetches cost 1; evictions are free.
///
/// Every resident page was requested (hence marked) in the current phase,
/// so the flush condition is simply a fault on a full cache.
pub fn run_fwf(seq: &[Page], k: usize) -> PolicyRun {
    assert!(k >= 1);
    let mut resident: Vec<Page> = Vec::with_capacity(k);
    let mut is_resident = vec![false; max_page(seq) + 1];
    let mut faults = 0u64;
    for &p in seq {
        if is_resident[p as usize] {
            continue;
        }
        faults += 1;
        if resident.len() == k {
            for q in resident.drain(..) {
                is_resident[q as usize] = false;
            }
        }
        resident.push(p);
        is_resident[p as usize] = true;
    }
    PolicyRun::unit(&PolicyDescriptor::Fwf, faults)
}

/// Randomized marking: at a fault, evict a uniformly random unmarked
/// resident page. Deterministic for a given seed.
pub fn run_marker(seq: &[Page], k: usize, seed: u64) -> PolicyRun {
    assert!(k >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let npages = max_page(seq) + 1;
    let mut resident: Vec<Page> = Vec::with_capacity(k);
    let mut is_resident = vec![false; npages];
    let mut marked = vec![false; npages];
    let mut marked_count = 0usize;
    let mut faults = 0u64;
    for &p in seq {
        let pi = p as usize;
        if is_resident[pi] {
            if !marked[pi] {
                marked[pi] = true;
                marked_count += 1;
            }
            continue;
        }
        faults += 1;
        if resident.len() == k {
            if marked_count == k {
                // Phase ends: every mark is cleared, the cache stays.
                for &q in &resident {
                    marked[q as usize] = false;
                }
                marked_count = 0;
            }
            let unmarked = resident.len() - marked_count;
            let mut target = rng.gen_range(0..unmarked);
            let pos = resident
                .iter()
                .position(|&q| {
                    if marked[q as usize] {
                        return false;
                    }
                    if target == 0 {
                        true
                    } else {
                        target -= 1;
                        false
                    }
                })
                .unwrap();
            is_resident[resident[pos] as usize] = false;
            resident.swap_remove(pos);
        }
        resident.push(p);
        is_resident[pi] = true;
        if !marked[pi] {
            marked[pi] = true;
            marked_count += 1;
        }
    }
    PolicyRun::unit(&PolicyDescriptor::Marker { seed }, faults)
}

/// Oracle perfect-LFU: the cache permanently holds the `k` most probable
/// pages of `dist` (ties by lower rank, which is how the ranks are laid
/// out already). Each request to a page of rank above `k` faults and
/// costs 2.
pub fn run_plfu_oracle(seq: &[Page], k: usize, dist: &PageDistribution) -> Result<PolicyRun> {
    assert!(k >= 1);
    let m = dist.len();
    if k >= m {
        return Err(Error::domain(format!(
            "plfu-oracle requires k < m (k = {k}, m = {m})"
        )));
    }
    let mut faults = 0u64;
    for &p in seq {
        if p as usize > m {
            return Err(Error::index(format!(
                "request for page {p} outside the distribution (m = {m})"
            )));
        }
        if p as usize > k {
            faults += 1;
        }
    }
    Ok(PolicyRun::doubled(&PolicyDescriptor::PlfuOracle, faults))
}

/// Empirical perfect-LFU: global frequency counters over the whole
/// history; the cache always holds the `k` most frequent pages so far
/// (ties by lower identifier), with the oracle variant's cost-2
/// re-admit convention.
pub fn run_plfu_empirical(seq: &[Page], k: usize) -> PolicyRun {
    assert!(k >= 1);
    let npages = max_page(seq) + 1;
    let mut count = vec![0u64; npages];
    let mut in_cache = vec![false; npages];
    let mut cache: BTreeSet<(Reverse<u64>, Page)> = BTreeSet::new();
    let mut outside: BTreeSet<(Reverse<u64>, Page)> = BTreeSet::new();
    let mut faults = 0u64;
    for &p in seq {
        let pi = p as usize;
        let c = count[pi];
        if in_cache[pi] {
            cache.remove(&(Reverse(c), p));
            count[pi] = c + 1;
            cache.insert((Reverse(c + 1), p));
            continue;
        }
        faults += 1;
        if c > 0 {
            outside.remove(&(Reverse(c), p));
        }
        count[pi] = c + 1;
        cache.insert((Reverse(c + 1), p));
        in_cache[pi] = true;
        if cache.len() > k {
            // Weakest cached page: least count, largest identifier.
            let weakest = *cache.iter().next_back().unwrap();
            cache.remove(&weakest);
            in_cache[weakest.1 as usize] = false;
            outside.insert(weakest);
        }
    }
    PolicyRun::doubled(&PolicyDescriptor::PlfuEmpirical, faults)
}

/// In-cache LFU: counts requests only while a page is resident. A newly
/// admitted page starts its counter at 1; eviction takes the smallest
/// counter, ties by lower identifier; counters of evicted pages are
/// discarded.
pub fn run_incache_lfu(seq: &[Page], k: usize) -> PolicyRun {
    assert!(k >= 1);
    let npages = max_page(seq) + 1;
    let mut count = vec![0u64; npages];
    let mut is_resident = vec![false; npages];
    let mut resident: Vec<Page> = Vec::with_capacity(k);
    let mut faults = 0u64;
    for &p in seq {
        let pi = p as usize;
        if is_resident[pi] {
            count[pi] += 1;
            continue;
        }
        faults += 1;
        if resident.len() == k {
            let (pos, _) = resident
                .iter()
                .enumerate()
                .min_by_key(|&(_, &q)| (count[q as usize], q))
                .unwrap();
            is_resident[resident[pos] as usize] = false;
            resident.swap_remove(pos);
        }
        resident.push(p);
        is_resident[pi] = true;
        count[pi] = 1;
    }
    PolicyRun::unit(&PolicyDescriptor::LfuInCache, faults)
}

/// Belady's offline optimum: at a fault, evict the resident page whose
/// next request is farthest in the future; pages never requested again
/// count as infinitely far, ties by lower identifier. One backward pass
/// precomputes next-use indices; the simulation is O(n + faults * k).
pub fn run_belady(seq: &[Page], k: usize) -> PolicyRun {
    assert!(k >= 1);
    let n = seq.len();
    let npages = max_page(seq) + 1;
    const NEVER: usize = usize::MAX;
    let mut next_use = vec![NEVER; n];
    let mut upcoming = vec![NEVER; npages];
    for t in (0..n).rev() {
        let pi = seq[t] as usize;
        next_use[t] = upcoming[pi];
        upcoming[pi] = t;
    }

    // upcoming[q] now tracks q's next use after its latest request. For a
    // resident q not requested at time t this is still q's next use after
    // t: an occurrence in between would itself have been a request of q.
    let mut resident: Vec<Page> = Vec::with_capacity(k);
    let mut is_resident = vec![false; npages];
    let mut faults = 0u64;
    for (t, &p) in seq.iter().enumerate() {
        let pi = p as usize;
        if !is_resident[pi] {
            faults += 1;
            if resident.len() == k {
                let (pos, _) = resident
                    .iter()
                    .enumerate()
                    .max_by_key(|&(_, &q)| (upcoming[q as usize], Reverse(q)))
                    .unwrap();
                is_resident[resident[pos] as usize] = false;
                resident.swap_remove(pos);
            }
            resident.push(p);
            is_resident[pi] = true;
        }
        upcoming[pi] = next_use[t];
    }
    PolicyRun::unit(&PolicyDescriptor::Belady, faults)
}

/// Exact minimum fault count by dynamic programming over
/// (position, cache configuration) states. Refuses instances with more
/// than 6 distinct pages, 14 requests, or k > 3.
pub fn brute_force_opt(seq: &[Page], k: usize) -> Result<u64> {
    assert!(k >= 1);
    let n = seq.len();
    let mut ids = std::collections::HashMap::new();
    let mut compact = Vec::with_capacity(n);
    for &p in seq {
        let next = ids.len();
        compact.push(*ids.entry(p).or_insert(next));
    }
    let d = ids.len();
    if d > 6 || n > 14 || k > 3 {
        return Err(Error::TooLarge(format!(
            "brute_force_opt limits: distinct <= 6 (got {d}), n <= 14 (got {n}), k <= 3 (got {k})"
        )));
    }

    let nmasks = 1usize << d;
    const UNSET: u32 = u32::MAX;
    // dp[mask] = min faults for the suffix starting at position t.
    let mut dp = vec![0u32; nmasks];
    let mut next_dp = vec![UNSET; nmasks];
    for t in (0..n).rev() {
        let b = 1usize << compact[t];
        for mask in 0..nmasks {
            next_dp[mask] = if mask & b != 0 {
                dp[mask]
            } else if (mask as u32).count_ones() < k as u32 {
                1 + dp[mask | b]
            } else {
                let mut best = UNSET;
                let mut rest = mask;
                while rest != 0 {
                    let e = rest & rest.wrapping_neg();
                    best = best.min(dp[(mask ^ e) | b]);
                    rest ^= e;
                }
                1 + best
            };
        }
        std::mem::swap(&mut dp, &mut next_dp);
    }
    Ok(dp[0] as u64)
}
