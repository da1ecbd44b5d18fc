//! Braids, loop coordinates and stirring.
//!
//! A braid on `n` strands describes how stirrers move around each other in a
//! planar fluid. This crate computes its Thurston–Nielsen type and dilation
//! exactly (big-integer loop coordinates), bounds it from below through the
//! Burau representation, and realizes the braid as an explicit area-preserving
//! motion so material lines and passive scalars can be advected and their
//! growth compared against the topological rate.
//!
//! The simulator and the growth fits are generic over [`num::Real`] (`f32`
//! or `f64`); the aliases below fix the scalar type.

pub mod braid;
pub mod error;
pub mod growth;
pub mod loop_coords;
pub mod num;
pub mod report;
pub mod stir_sim;
pub mod tn_classify;

pub use braid::{parse_braid, BraidWord, Letter, Permutation, Sign};
pub use error::{Error, Result};
pub use loop_coords::LoopCoords;
pub use tn_classify::{classify, ClassifyOptions, TnClassification, TnType};

pub type GrowthSeries = growth::GrowthSeries<f64>;
pub type GrowthFit = growth::GrowthFit<f64>;
pub type RotorParams = stir_sim::RotorParams<f64>;
pub type StirProtocol = stir_sim::StirProtocol<f64>;
pub type Polyline = stir_sim::Polyline<f64>;
pub type ScalarGrid = stir_sim::ScalarGrid<f64>;

pub type GrowthSeriesF32 = growth::GrowthSeries<f32>;
pub type RotorParamsF32 = stir_sim::RotorParams<f32>;
pub type StirProtocolF32 = stir_sim::StirProtocol<f32>;
pub type PolylineF32 = stir_sim::Polyline<f32>;
pub type ScalarGridF32 = stir_sim::ScalarGrid<f32>;
