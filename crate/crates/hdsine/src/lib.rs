//! High-dimensional sine functions and their simplex inequalities.
//!
//! The d-dimensional polar sine and the d-th root of the hypersine generalize
//! `|sin|` to tuples of d+1 vectors: both are scale-invariant ratios of
//! parallelotope contents, both vanish exactly on linearly dependent tuples,
//! and both reach 1 exactly on mutually orthogonal ones. This crate provides:
//!
//! - rank-tolerant contents, frames, and projections ([`linalg`]);
//! - the sine functions, their product decompositions, and the generalized
//!   law of sines ([`sines`]);
//! - elevation and dihedral angles plus membership-testable balls, tubes,
//!   and cones ([`angles`]);
//! - the exact splitting identities for both sines in ambient dimension
//!   d+1 ([`identities`]);
//! - verifiers for the simplex (d-semimetric) inequalities ([`semimetric`]);
//! - the generalized sine family `c·s_k` and its functional equation
//!   ([`gensine`]);
//! - γ-regular measure samplers and Monte Carlo verifiers for the
//!   relaxed-inequality concentration bound ([`samplers`], [`concentration`]).
//!
//! Randomized verifiers are deterministic: every trial derives its own RNG
//! stream from a master seed and the trial index, so results do not depend
//! on thread count. The `parallel` feature (on by default) runs trial loops
//! on a rayon pool; without it the same loops run sequentially.

pub mod angles;
pub mod concentration;
pub mod error;
pub mod exec;
pub mod gensine;
pub mod identities;
pub mod linalg;
pub mod samplers;
pub mod semimetric;
pub mod sines;
pub mod stream;

pub use error::{Error, Result};
pub use linalg::{Vector, DEFAULT_TOL};
