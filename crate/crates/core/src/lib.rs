//! Herglotz-Nevanlinna functions of several variables: kernels, measures,
//! integral representations, admissibility conditions and symmetry extension.

pub mod acceptance;
pub mod catalog;
pub mod cli;
pub mod conditions;
pub mod domain;
pub mod error;
pub mod kernels;
pub mod measures;
pub mod representation;
pub mod symmetry;

pub use error::{HnError, Result};
