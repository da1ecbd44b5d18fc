//! Thurston–Nielsen type and dilation of a braid.
//!
//! Three routes to the same growth rate, kept independent of each other:
//! loop-coordinate iteration ([`entropy_estimate`]), the Burau spectral
//! radius lower bound ([`burau_lower_bound`]) and free-group word growth
//! ([`free_group_growth`]).

pub mod burau;
mod classify;
mod entropy;
pub mod free_group;

pub use burau::burau_lower_bound;
pub use classify::{classify, ClassifyOptions, TnClassification, TnType};
pub use entropy::{entropy_estimate, EntropyResult};
pub use free_group::{free_group_growth, FreeGroupOptions};
