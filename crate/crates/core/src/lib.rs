//! Numerics and experiment machinery for the non-elitist Linear Ranking EA
//! on the SelPres objective: selection, mutation, the EA loop with
//! population-dynamics instrumentation, branching-process simulators, and
//! Perron-root tools for the extinction bounds.

// guards such as `!(x > 0.0)` also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bitstring;
pub mod branching;
pub mod ea;
pub mod error;
pub mod experiments;
pub mod fitness;
pub mod params;
pub mod ranking;
pub mod rng;
pub mod spectral;

pub use bitstring::Bitstring;
pub use error::{Error, Result};
pub use params::{validate_config, EaConfig, MutationParams, RankingParams, SelPresParams};
pub use rng::{derive_stream, RandomSource};
