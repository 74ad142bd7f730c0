//! Time integration of the full system and its Duhamel decomposition.

pub mod config;
pub mod duhamel;
pub mod flux;
pub mod run;
pub mod stepper;

pub use config::{Scheme, SolverConfig};
pub use duhamel::{duhamel_term, mild_residual, unsplit_ph_integral, DuhamelLedger, DuhamelTag, MildResidual};
pub use flux::{FluxEvaluator, FluxPieces};
pub use run::{horizontal_dissipation, run, run_with, EnergyLog, RunOptions, Trajectory};
pub use stepper::{step, Stepper};
