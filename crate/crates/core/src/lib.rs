//! Spectral toolkit for the three-dimensional stratified Boussinesq system with
//! horizontal-only dissipation.

pub mod error;
pub mod grid;
pub mod harness;
pub mod kernel_lab;
pub mod linear;
pub mod lp_besov;
pub mod nonlinear;
pub mod report;
pub mod series;

pub use error::{Error, Result};
