//! Exact Fourier-side theory of the linearized system
//! `d_t u - Delta_h u + P~ J P~ u = 0`.

pub mod eigen;
pub mod projectors;
pub mod propagator;
pub mod q;
pub mod rates;
pub mod symbols;

pub use eigen::{eigenprojection, Branch};
pub use projectors::{helmholtz3, helmholtz_h};
pub use propagator::{propagate_linear, rodrigues};
pub use q::{q_multiplier, QFamily, QTag};
pub use rates::{decay_rate_table, Component, RateEntry};
