//! Exact computations with integer-valued integrally convex functions on Z^n.

pub mod checker;
pub mod conjugacy;
pub mod dc;
pub mod error;
pub mod extension;
pub mod fm_subgradient;
pub mod geometry;
pub mod instances;
pub mod zfunction;

pub use error::{Error, Result};
