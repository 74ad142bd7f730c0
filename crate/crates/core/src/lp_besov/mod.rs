//! Anisotropic Littlewood-Paley blocks and Besov-type norms.

pub mod besov;
pub mod blocks;
pub mod checks;
pub mod composite;
pub mod profile;

pub use besov::{besov_norm, besov_norm_vector, BesovSpec};
pub use blocks::{dyadic_range, lp_block, DyadicIndex, DyadicRange};
pub use composite::{composite_norm, CompositeNormSpec};
pub use profile::DyadicProfile;
