//! Periodic-box discretization: lattice bookkeeping, transforms, quadrature
//! and state storage.

mod box_spec;
pub mod fft;
pub mod field;
pub mod norms;
pub mod random;
pub mod snapshot;
pub mod state;

pub use box_spec::{for_each_mode, BoxSpec, Wavenumbers};
pub use field::{forward_transform, inverse_transform, SpectralField, Transformer};
pub use norms::{anisotropic_mixed_norm, lp_norm, pairwise_sum, sobolev_norm};
pub use random::{dealias_mask, random_band_field};
pub use state::BoussinesqState;
