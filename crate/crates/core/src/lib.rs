//! Numerical study of ζ on and near the critical line: reference evaluation,
//! Dirichlet-polynomial mean values, moment integrals, Perron's formula and
//! the moment-conjecture constants.

// Guards like `!(x > 0.0)` are written that way so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod calibration;
pub mod conjecture;
pub mod dirichlet;
pub mod error;
pub mod moments;
pub mod perron;
pub mod quad;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use special::ComplexValue;
