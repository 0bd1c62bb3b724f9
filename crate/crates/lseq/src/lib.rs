//! Generalized van der Corput (LS) sequences.
//!
//! An LS-sequence is parametrized by two integers `L >= 1` and `S >= 0`
//! (`L + S >= 2`) and the positive root `gamma` of `L*x + S*x^2 = 1`. The
//! crate builds the sequence two independent ways:
//!
//! * [`sequence`] — a streaming radical-inverse generator over the integers
//!   whose base-`L+S` digits avoid the forbidden pair set, producing each
//!   point exactly as an element of the field extension `Q(gamma)`;
//! * [`partition`] and [`lambda`] — successive interval refinements of
//!   `[0, 1)` and the reordering of their endpoints into a point sequence.
//!
//! The two constructions coincide; [`lambda::verify_equivalence`] checks
//! this entry by entry under exact comparison. [`discrepancy`] measures
//! one-dimensional extreme and star discrepancy exactly and classifies the
//! empirical growth regime, and [`qmc`] runs quasi-Monte Carlo integration
//! experiments against baseline generators.
//!
//! For `S = 0` everything degenerates to the classical van der Corput
//! machinery in base `L`.

pub mod counting;
pub mod digits;
pub mod discrepancy;
mod error;
pub mod lambda;
mod params;
pub mod partition;
pub mod psi;
mod qgamma;
pub mod qmc;
pub mod sequence;

pub use error::Error;
pub use params::LsParams;
pub use qgamma::QGamma;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
