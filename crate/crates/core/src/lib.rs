//! Linear-growth integral functionals on BV with signed-measure data.
//!
//! The crate is organised bottom-up:
//!
//! * [`integrand`]: integrands `f(x, ξ)`, recession functions, perspectives,
//!   anisotropies and their polars, sampled assumption checks and the
//!   one-homogeneous lifted integrand.
//! * [`measure`]: signed measures (atoms, densities, curve measures), Jordan
//!   decomposition, the pairing `⟨⟨μ±; w∓⟩⟩`, isoperimetric-condition checks
//!   and calibration fields.
//! * [`bv1d`]: piecewise-affine BV functions of one variable, the exact
//!   relaxed functional and recovery sequences.
//! * [`lifting`]: the cylinder lift `w(x0, x) = x0 + w(x)` and the master
//!   identity relating the functional to a one-homogeneous one.
//! * [`solver`]: discretised minimisation with smoothing and an
//!   unboundedness probe.
//! * [`experiments`]: reproducible drivers for the analytic benchmarks.

// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bv1d;
pub mod error;
pub mod experiments;
pub mod integrand;
pub mod lifting;
pub mod measure;
pub mod quad;
pub mod solver;

pub use error::{Error, Result};
