//! A laboratory for online paging under stochastic workloads.
//!
//! `pagelab` generates request sequences from power-law and multi-core
//! power-law distributions, simulates classic cache replacement policies
//! (LRU, FIFO, flush-when-full, randomized marking, LFU variants, and
//! Belady's offline optimum), evaluates closed-form upper bounds on their
//! ratio-of-expectations, and fits the two workload models to traces with
//! the Kolmogorov-Smirnov statistic.
//!
//! The narrative guide under `book/` walks through the concepts; its code
//! snippets are compiled as doc-tests via the [`guide`] module.
//!
//! # Quick tour
//!
//! ```
//! use pagelab::dist::PageDistribution;
//! use pagelab::policy::{run_belady, run_lru};
//!
//! let dist = PageDistribution::power_law(1.0, 64).unwrap();
//! let seq = dist.sample_sequence(10_000, 7);
//! let lru = run_lru(&seq.pages, 8);
//! let opt = run_belady(&seq.pages, 8);
//! assert!(opt.faults <= lru.faults);
//!
//! let bound = pagelab::bounds::bound_lru(&dist, 8).unwrap();
//! assert!(bound.is_finite());
//! ```

pub mod bounds;
pub mod dist;
pub mod error;
pub mod fit;
pub mod guide;
pub mod phase;
pub mod policy;
pub mod sim;

pub use error::{Error, Result};
