//! Foldy-Lax point-interaction model for electromagnetic scattering by a
//! cluster of small perfectly conducting bodies.
//!
//! Each body is replaced by a pair of dipole coefficients `(A_i, B_i)` whose
//! strengths are set by the body's polarization tensor `[P]` and virtual-mass
//! tensor `[T]`. The bodies talk to each other through the free-space Helmholtz
//! kernel and its dyadic, which leaves a `6m x 6m` linear system in place of a
//! full Maxwell boundary-value problem.
//!
//! Module map:
//!
//! - [`geometry`]: bodies, the cluster parameters `epsilon`, `delta`, `m`, and
//!   the regime check.
//! - [`mesh`]: closed triangle surfaces and the icosphere generator.
//! - [`greens`]: `Phi_k`, its gradient and the dyadic `Pi_k`.
//! - [`layerops`]: the static Neumann-Poincare operator and the tensors built
//!   from it.
//! - [`foldy`]: assembly and solution of the coupled dipole system, plus the
//!   invertibility constants.
//! - [`fields`]: near field, far-field pattern and error budgets.
//! - [`oracles`]: independent reference computations (Mie, brute force,
//!   spherical-harmonic spectrum).
//! - [`simulation`]: end-to-end orchestration used by the CLI.
//!
//! The crate is `no_std` with `alloc`. The `parallel` feature pulls in `std`
//! and rayon for row-parallel assembly; results do not depend on the worker
//! count.

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod error;
pub mod fields;
pub mod foldy;
pub mod geometry;
pub mod greens;
pub mod layerops;
pub mod linalg;
pub mod mesh;
pub mod oracles;
pub mod simulation;
pub mod vector;
pub mod warning;

pub(crate) mod math;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use vector::{CVec3, Mat3, Vec3};
pub use warning::Warning;
