//! Construction and numerical certification of massless relativistic fields
//! from scalar pre-potentials.
//!
//! The crate builds spin-0 through spin-2 fields out of solutions of the wave
//! equation and verifies — pointwise, with truncated-Taylor automatic
//! differentiation — that the constructed fields satisfy their field
//! equations: Klein–Gordon, Dirac, Maxwell, Rarita–Schwinger, linearized
//! Einstein, and the full vacuum Einstein equations.

pub mod chart;
pub mod clifford;
pub mod expr;
pub mod fields;
pub mod jet;
pub mod prepotential;
pub mod report;
pub mod runner;
pub mod sampling;
pub mod scenario;
