//! Closed-form spacetime fields with exact jets to second order.

mod config;
mod expr;
mod fd;
mod grid;
mod jet;
mod polynomial;

pub use config::{derive_b, derive_e, GaugeConfig, MatterConfig};
pub use expr::{eval_jet, FieldExpr, GaussianPacket, Node, VectorField, MAX_PHASE_DEGREE, MAX_POLY_DEGREE};
pub use fd::{fd_jet, fd_jet_with};
pub use grid::{sample_on_grid, GridSpec, SampledField};
pub use jet::{sym_index, Jet, JetValue, C64};
pub use polynomial::{Exponents, Polynomial};
