//! Monte Carlo toolkit for heavy-tailed renewal processes, stable
//! subordinators and Pitman–Yor interval partitions.
//!
//! The crate simulates renewal processes with regularly varying steps
//! (tail index `alpha` in (0,1)), builds alpha-stable subordinators from
//! truncated Poisson random measures, and provides closed-form access to
//! the limit laws (generalized arcsine, Mittag–Leffler, Fréchet,
//! stick-breaking Pitman–Yor). The `verify` module turns the limit
//! statements into empirical pass/fail tests, and `experiments` bundles
//! them into named, seeded, CSV-producing experiment runs.

pub mod config;
pub mod error;
pub mod experiments;
pub mod partition;
pub mod pitmanyor;
pub mod renewal;
pub mod rng;
pub mod selftest;
pub mod subordinator;
pub mod tailcore;
pub mod verify;

pub use error::{Error, Result};
