//! Oblivious reliable light spanners.
//!
//! Constructions for k-HSTs, weighted paths, ultrametrics and graph metrics
//! with shortest-path decompositions, together with the exact faulty-extension
//! oracles and validators used to check them. Everything here is pure and
//! seeded; file formats and the command line live in the `relspan` crate.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod attacks;
pub mod cover;
pub mod error;
pub mod graph;
pub mod hst;
pub mod hst_spanner;
pub mod instances;
pub mod metric;
pub mod num;
pub mod path_spanner;
pub mod ppcs;
pub mod reliable;
pub mod rng;
pub mod spanner;

pub use error::{Error, Result};
pub use hst::Hst;
pub use metric::{Metric, MetricInstance};
pub use spanner::Spanner;
