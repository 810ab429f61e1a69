//! The narrative guide, compiled straight from the mdbook sources under
//! `book/` so that every code snippet in the book runs under
//! `cargo test --doc` and can never drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/workloads.md")]
pub mod workloads {}

#[doc = include_str!("../../../book/src/policies.md")]
pub mod policies {}

#[doc = include_str!("../../../book/src/phases.md")]
pub mod phases {}

#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}

#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}

#[doc = include_str!("../../../book/src/fitting.md")]
pub mod fitting {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
