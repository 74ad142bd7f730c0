//! Experiment orchestration: initial data, decay measurement and reports.

pub mod campaign;
pub mod channels;
pub mod config;
pub mod decay;
pub mod initial;
pub mod verify;

pub use campaign::{run_campaign, CampaignReport, CampaignRun};
pub use channels::{channel_records, Channel};
pub use config::{ExperimentConfig, Mode};
pub use decay::{measure_decay, DecayFit, FitWindow, Verdict};
pub use initial::{make_initial_data, Construction, InitialData};
pub use verify::{run_suite, SUITES};
