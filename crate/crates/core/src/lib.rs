//! Controlled Markov chain for remote patient monitoring on the health
//! lattice `{0..H}^n`, its discounted dynamic program, and tools for
//! characterizing the resulting ordinary/intensive switching surfaces.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, presets and
//! the command line live in the `healthmon` companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod error;
pub mod model;
pub mod solver;

pub use error::{Error, Result};
pub use model::{
    CriticalSet, HealthState, Lattice, Model, ModelConfig, ModelParams, MonitoringMode, TransitionDistribution,
};
pub use solver::{Policy, Solution, SolveReport, ValueFunction};
