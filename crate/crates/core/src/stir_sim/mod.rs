//! Explicit area-preserving realization of a braid as stirring, with
//! material-line and passive-scalar advection.
//!
//! Each generator `σᵢ^±` is a closed-form rotor map: a rotation about the
//! midpoint of punctures `i, i+1` by an angle that depends only on the radius.
//! Inside `r0` it is a rigid half-turn that swaps the two punctures, beyond
//! `r1` it is the identity. Radius-dependent rotations have unit Jacobian, so
//! the motion is exactly incompressible and no time integration is involved.

mod polyline;
mod rotor;
mod scalar;

pub use polyline::{
    advect_polyline, advect_stages, integrable_reference, reference_shear, reference_shear_constant,
    AdvectOptions, Polyline, PolylineRun,
};
pub use rotor::{puncture_position, rotor_center, rotor_map, Direction, RotorParams, StirProtocol};
pub use scalar::{
    advect_scalar, advect_scalar_with, saturation_window, ScalarAdvection, ScalarGrid, ScalarRun, DEFAULT_GRID,
    DEFAULT_SEED, MIN_GRID, SEED_MODES,
};
