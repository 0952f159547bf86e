//! Shared inputs for the criterion benchmarks.

use eqsamp_core::harness::{Experiment, ExperimentConfig};
use eqsamp_core::sampling::{plan_ees, plan_fes, plan_random, Band, EnergyProfile, MidpointRule};
use eqsamp_core::sensing::{build_dictionary, SensingOperator};
use eqsamp_core::signal_model::{make_monocycle, make_scene, MonocycleTemplate};
use eqsamp_core::spectral::forward;
use eqsamp_core::{SamplingPlan, Scheme};

/// The default 256-sample, 2 GHz monocycle at 16 GS/s.
pub fn template(n: usize) -> MonocycleTemplate {
    make_monocycle(2e9, 16e9, n).expect("valid monocycle")
}

pub fn template_profile(n: usize) -> EnergyProfile {
    let band = Band::full(n).expect("valid band");
    EnergyProfile::from_spectrum(band, &forward(&template(n).to_signal())).expect("valid profile")
}

pub fn plan(scheme: Scheme, n: usize, m: usize) -> SamplingPlan {
    let band = Band::full(n).expect("valid band");
    match scheme {
        Scheme::Fes => plan_fes(band, m),
        Scheme::Random => plan_random(band, m, 17),
        Scheme::Ees => plan_ees(&template_profile(n), m, MidpointRule::Energy),
    }
    .expect("valid plan")
}

/// Operator and noiseless measurement of a fixed `dof`-reflection scene.
pub fn problem(scheme: Scheme, n: usize, m: usize, dof: usize) -> (SensingOperator, Vec<f64>) {
    use eqsamp_core::solver::LinearOperator;
    let t = template(n);
    let dict = build_dictionary(&t).expect("valid dictionary");
    let scene = make_scene(n, dof, 3, (0.3, 1.0), t.duration_bins()).expect("valid scene");
    let x = dict.scene_coefficients(&scene).expect("matching length");
    let op = SensingOperator::new(plan(scheme, n, m), dict).expect("valid operator");
    let b = op.apply(&x);
    (op, b)
}

/// The default experiment, restricted to one worker.
pub fn experiment() -> Experiment {
    Experiment::new(ExperimentConfig {
        jobs: Some(1),
        ..ExperimentConfig::default()
    })
    .expect("default configuration is valid")
}
