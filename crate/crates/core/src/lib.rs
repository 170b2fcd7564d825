//! Rational right triangles with a given area.
//!
//! A squarefree `n` is congruent when it is the area of a right triangle with
//! rational sides. This crate searches for such triangles with a family of
//! descents on the curve `Y^2 = X^3 - n^2 X`, and packages each success as a
//! certificate that can be re-checked with exact arithmetic.

pub mod budget;
pub mod curve;
pub mod error;
pub mod numth;
pub mod qsearch;
pub mod solver;
pub mod triangle;
pub mod tunnell;

pub use error::{Error, Result};
