//! Formulation, heuristics and certification for the Heilbronn triangle problem:
//! place `n` points in the unit square so that the smallest triangle they form
//! is as large as possible.

pub mod error;
pub mod geometry;
pub mod heuristics;

pub use error::{HeilbronnError, Result};
pub mod enhancements;
pub mod model;
pub mod certifier;
