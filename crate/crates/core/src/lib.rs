//! Numerical laboratory for the Galilei group, its projective unitary
//! realizations, and the U(1) gauge-coupled Schrödinger–Maxwell system.
//!
//! Fields are closed-form expressions with exact second-order jets, so every
//! invariance and covariance identity is checked pointwise at rounding
//! precision rather than through grid interpolation.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod boost;
pub mod dynamics;
pub mod eom;
pub mod error;
pub mod fields;
pub mod galgroup;
pub mod gauge;
pub mod harness;
pub mod par;
pub mod sampling;

pub use error::{Error, Result};
