//! Numerical verification of uncertainty and exclusion inequalities,
//! Lieb–Thirring bounds and stability-of-matter constants.
//!
//! Units follow ℏ = 1 with the one-body kinetic operator −Δ, except in
//! [`matter`], where the electron mass `m` enters through −Δ/(2m).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod covering;
pub mod error;
pub mod grid;
pub mod inequalities;
pub mod lieb_thirring;
pub mod matter;
pub mod random;
pub mod report;
pub mod spectral;
pub mod sweeps;

pub use error::{Error, Result};
pub use report::{EnergyBoundReport, InequalityReport, Relation};
