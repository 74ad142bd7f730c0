//! Quadrature of the dispersive kernel and checks of its phase geometry.

pub mod envelope;
pub mod hessian;
pub mod quadrature;

pub use envelope::{envelope_check, EnvelopeReport, EnvelopeRow};
pub use hessian::{hessian_check, hessian_det_formula, rank_check, RankReport};
pub use quadrature::{eval_kernel, KernelEvaluator, KernelSpec, KernelValue};
