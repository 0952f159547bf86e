//! Compressive sampling of signals with a known spectral energy density.
//!
//! The crate covers the whole pipeline used to compare frequency-domain
//! sampling schemes for l1 recovery of sparse UWB A-scans:
//!
//! * [`signal_model`]: monocycle pulses and sparse multi-reflection scenes.
//! * [`spectral`]: unitary DFT, spectral energy density and Parseval checks.
//! * [`sampling`]: uniform (FES), random and energy-equipartition (EES) plans.
//! * [`sensing`]: circulant dictionaries, partial-Fourier sensing operators,
//!   coherence and the sample-count bound.
//! * [`solver`]: weighted / known-support basis pursuit and a minimum-norm
//!   least-squares baseline.
//! * [`metrics`]: PSNR and spectrum-fit scores.
//! * [`harness`]: seeded, paired benchmark sweeps with CSV and SVG output.

pub mod error;
pub mod harness;
pub mod metrics;
pub mod sampling;
pub mod sensing;
pub mod signal_model;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use harness::{ExperimentConfig, TrialRecord};
pub use metrics::{psnr, EvalReport};
pub use sampling::{Band, EnergyProfile, MidpointRule, SamplingPlan, Scheme, Subband};
pub use sensing::{Dictionary, Measurement, SensingOperator};
pub use signal_model::{Event, MonocycleTemplate, Signal, SparseScene};
pub use solver::{L1Problem, SolverResult, SolverSettings};
pub use spectral::Spectrum;
