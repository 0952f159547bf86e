//! Seeded, paired benchmark sweeps.
//!
//! Every trial cell `(dof, trial)` draws one scene from a seed that does not
//! depend on the scheme or the sample count, so all schemes, and all points
//! of a PSNR-vs-m curve, are scored on the same signals. Trials run on a
//! rayon pool and are sorted by `(scheme, dof, sample_count, trial)` before
//! anything is aggregated or written.

mod config;
pub mod output;
mod svg;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use config::{Basis, ExperimentConfig, Prior, SolverConfig};
pub use output::{emit_outputs, prepare_output_dir, write_records, write_summary};
pub use svg::{line_chart, trial_overlay, Series};

use crate::error::{Error, Result};
use crate::metrics::psnr_samples;
use crate::sampling::{plan_ees, plan_fes, plan_random, EnergyProfile, SamplingPlan, Scheme};
use crate::sensing::{build_dictionary, measure, Dictionary, SensingOperator};
use crate::signal_model::{make_scene, synthesize, Signal, SparseScene};
use crate::solver::{solve_l1, L1Problem};
use crate::spectral::forward;

/// One (scheme, dof, sample count, trial) outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub scheme: Scheme,
    pub dof: usize,
    pub sample_count: usize,
    #[serde(skip)]
    pub trial: usize,
    /// Scene seed; shared by every scheme and sample count in the cell.
    pub seed: u64,
    pub psnr_db: f64,
    pub spectrum_l2_error: f64,
    pub solver_iterations: usize,
    pub converged: bool,
    /// Seconds; kept out of `records.csv` so that file is reproducible.
    #[serde(skip)]
    pub wall_time: f64,
}

/// Everything computed in a trial, for plotting.
#[derive(Debug, Clone)]
pub struct TrialDetail {
    pub record: TrialRecord,
    pub scene: SparseScene,
    pub original: Signal,
    pub reconstruction: Vec<f64>,
    pub plan: SamplingPlan,
}

/// Per-cell aggregate over trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub scheme: Scheme,
    pub dof: usize,
    pub sample_count: usize,
    pub trials: usize,
    pub mean_psnr_db: f64,
    pub median_psnr_db: f64,
    pub mean_spectrum_l2_error: f64,
    pub converged_fraction: f64,
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Scene seed for trial `trial` at `dof`: `base_seed ^ hash(dof, trial)`.
pub fn scene_seed(base_seed: u64, dof: usize, trial: usize) -> u64 {
    base_seed ^ mix(mix(dof as u64) ^ (trial as u64).rotate_left(32))
}

/// Seed for the RANDOM scheme's bin draw, distinct per sample count.
pub fn plan_seed(scene_seed: u64, sample_count: usize) -> u64 {
    mix(scene_seed ^ mix(0x5a4d_504c ^ sample_count as u64))
}

/// Reusable per-configuration state: pulse, dictionary and EES prior.
#[derive(Debug, Clone)]
pub struct Experiment {
    config: ExperimentConfig,
    template: crate::signal_model::MonocycleTemplate,
    dictionary: Dictionary,
    template_profile: EnergyProfile,
    guard: usize,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let template = config.template()?;
        let dictionary = match config.basis {
            Basis::Monocycle => build_dictionary(&template)?,
            Basis::Spike => Dictionary::spike(config.n)?,
        };
        let template_profile =
            EnergyProfile::from_spectrum(config.band()?, &forward(&template.to_signal()))?;
        let guard = config.guard()?;
        Ok(Experiment {
            config,
            template,
            dictionary,
            template_profile,
            guard,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn scene(&self, dof: usize, trial: usize) -> Result<SparseScene> {
        let [lo, hi] = self.config.amplitude_range;
        make_scene(
            self.config.n,
            dof,
            scene_seed(self.config.base_seed, dof, trial),
            (lo, hi),
            self.guard,
        )
    }

    pub fn plan(
        &self,
        scheme: Scheme,
        sample_count: usize,
        signal: &Signal,
        seed: u64,
    ) -> Result<SamplingPlan> {
        let band = self.config.band()?;
        match scheme {
            Scheme::Fes => plan_fes(band, sample_count),
            Scheme::Random => plan_random(band, sample_count, plan_seed(seed, sample_count)),
            Scheme::Ees => match self.config.prior {
                Prior::Template => {
                    plan_ees(&self.template_profile, sample_count, self.config.midpoint)
                }
                Prior::Scene => plan_ees(
                    &EnergyProfile::from_spectrum(band, &forward(signal))?,
                    sample_count,
                    self.config.midpoint,
                ),
            },
        }
    }

    /// Scene, plan, measurement, l1 recovery and scoring for one cell.
    pub fn run_trial_detail(
        &self,
        scheme: Scheme,
        dof: usize,
        sample_count: usize,
        trial: usize,
    ) -> Result<TrialDetail> {
        let start = Instant::now();
        let seed = scene_seed(self.config.base_seed, dof, trial);
        let scene = self.scene(dof, trial)?;
        let original = synthesize(&scene, &self.template)?;
        let plan = self.plan(scheme, sample_count, &original, seed)?;
        let measurement = measure(&original, &plan)?;
        let operator = SensingOperator::new(plan.clone(), self.dictionary.clone())?;
        let problem = L1Problem::new(&operator, measurement.values())?
            .with_settings(self.config.solver.settings())?;
        let solution = solve_l1(&problem);
        let reconstruction = self.dictionary.synthesize(&solution.coefficients)?;
        let report = psnr_samples(original.samples(), &reconstruction)?;
        let record = TrialRecord {
            scheme,
            dof,
            sample_count,
            trial,
            seed,
            psnr_db: report.psnr_db,
            spectrum_l2_error: report.spectrum_l2_error,
            solver_iterations: solution.iterations,
            converged: solution.converged,
            wall_time: start.elapsed().as_secs_f64(),
        };
        Ok(TrialDetail {
            record,
            scene,
            original,
            reconstruction,
            plan,
        })
    }

    pub fn run_trial(
        &self,
        scheme: Scheme,
        dof: usize,
        sample_count: usize,
        trial: usize,
    ) -> Result<TrialRecord> {
        self.run_trial_detail(scheme, dof, sample_count, trial)
            .map(|d| d.record)
    }

    /// All cells of the sweep, in canonical order.
    pub fn cells(&self) -> Vec<(Scheme, usize, usize, usize)> {
        let c = &self.config;
        let mut cells = Vec::new();
        for &scheme in &c.schemes {
            for &dof in &c.dof_list {
                for &m in &c.sample_counts {
                    for t in 0..c.trials {
                        cells.push((scheme, dof, m, t));
                    }
                }
            }
        }
        cells.sort_unstable();
        cells.dedup();
        cells
    }

    /// Runs every cell on `config.jobs` threads and returns the records
    /// sorted by `(scheme, dof, sample_count, trial)`.
    pub fn run_sweep(&self) -> Result<Vec<TrialRecord>> {
        let cells = self.cells();
        let work = || -> Result<Vec<TrialRecord>> {
            cells
                .par_iter()
                .map(|&(s, d, m, t)| self.run_trial(s, d, m, t))
                .collect()
        };
        let mut records = match self.config.jobs {
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {k} workers: {e}")))?
                .install(work)?,
            None => work()?,
        };
        records.sort_by_key(|r| (r.scheme, r.dof, r.sample_count, r.trial));
        Ok(records)
    }
}

/// Convenience wrapper: one trial from a bare configuration.
pub fn run_trial(
    config: &ExperimentConfig,
    scheme: Scheme,
    dof: usize,
    sample_count: usize,
    trial: usize,
) -> Result<TrialRecord> {
    Experiment::new(config.clone())?.run_trial(scheme, dof, sample_count, trial)
}

/// Records for the whole sweep plus their per-cell summary.
pub fn run_sweep(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, Vec<SummaryRow>)> {
    let records = Experiment::new(config.clone())?.run_sweep()?;
    let summary = summarize(&records);
    Ok((records, summary))
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        let (a, b) = (sorted[n / 2 - 1], sorted[n / 2]);
        // Two infinite sentinels would otherwise average to NaN.
        if a == b {
            a
        } else {
            0.5 * (a + b)
        }
    }
}

/// Mean and median PSNR per `(scheme, dof, sample_count)`.
///
/// Expects records sorted as [`Experiment::run_sweep`] returns them.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    records
        .chunk_by(|a, b| (a.scheme, a.dof, a.sample_count) == (b.scheme, b.dof, b.sample_count))
        .map(|group| {
            let k = group.len() as f64;
            let mut psnrs: Vec<f64> = group.iter().map(|r| r.psnr_db).collect();
            psnrs.sort_by(f64::total_cmp);
            SummaryRow {
                scheme: group[0].scheme,
                dof: group[0].dof,
                sample_count: group[0].sample_count,
                trials: group.len(),
                mean_psnr_db: psnrs.iter().sum::<f64>() / k,
                median_psnr_db: median(&psnrs),
                mean_spectrum_l2_error: group.iter().map(|r| r.spectrum_l2_error).sum::<f64>() / k,
                converged_fraction: group.iter().filter(|r| r.converged).count() as f64 / k,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            n: 64,
            dof_list: vec![1, 2],
            sample_counts: vec![4, 31],
            trials: 2,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn scene_seed_ignores_scheme_and_sample_count() {
        let exp = Experiment::new(small()).unwrap();
        let a = exp.run_trial_detail(Scheme::Fes, 2, 4, 1).unwrap();
        let b = exp.run_trial_detail(Scheme::Ees, 2, 31, 1).unwrap();
        assert_eq!(a.scene, b.scene);
        assert_eq!(a.record.seed, b.record.seed);
        assert_ne!(scene_seed(1, 2, 0), scene_seed(1, 2, 1));
        assert_ne!(scene_seed(1, 1, 0), scene_seed(1, 2, 0));
        assert_ne!(plan_seed(7, 4), plan_seed(7, 5));
    }

    #[test]
    fn trials_are_deterministic() {
        let exp = Experiment::new(small()).unwrap();
        let mut a = exp.run_trial(Scheme::Random, 2, 4, 0).unwrap();
        let mut b = exp.run_trial(Scheme::Random, 2, 4, 0).unwrap();
        a.wall_time = 0.0;
        b.wall_time = 0.0;
        assert_eq!(a, b);
    }

    #[test]
    fn full_band_is_near_exact() {
        let exp = Experiment::new(small()).unwrap();
        for scheme in Scheme::ALL {
            let r = exp.run_trial(scheme, 2, 31, 0).unwrap();
            assert!(r.psnr_db > 100.0, "{scheme}: {}", r.psnr_db);
        }
    }

    #[test]
    fn sweep_is_sorted_complete_and_thread_independent() {
        let mut cfg = small();
        cfg.jobs = Some(1);
        let (serial, summary) = run_sweep(&cfg).unwrap();
        assert_eq!(serial.len(), 3 * 2 * 2 * 2);
        assert_eq!(summary.len(), 3 * 2 * 2);
        assert!(summary.iter().all(|s| s.trials == 2));
        cfg.jobs = Some(4);
        let (parallel, _) = run_sweep(&cfg).unwrap();
        let strip = |v: Vec<TrialRecord>| {
            v.into_iter()
                .map(|mut r| {
                    r.wall_time = 0.0;
                    r
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(serial), strip(parallel));
    }

    #[test]
    fn single_cell_gives_single_record() {
        let cfg = ExperimentConfig {
            schemes: vec![Scheme::Ees],
            sample_counts: vec![14],
            dof_list: vec![1],
            trials: 1,
            ..ExperimentConfig::default()
        };
        let (records, summary) = run_sweep(&cfg).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(summary.len(), 1);
        assert_eq!(summary[0].mean_psnr_db, records[0].psnr_db);
    }

    #[test]
    fn summary_statistics() {
        let rec = |psnr: f64, trial| TrialRecord {
            scheme: Scheme::Fes,
            dof: 1,
            sample_count: 4,
            trial,
            seed: 0,
            psnr_db: psnr,
            spectrum_l2_error: 0.5,
            solver_iterations: 1,
            converged: trial != 0,
            wall_time: 0.0,
        };
        let s = summarize(&[rec(10.0, 0), rec(40.0, 1), rec(1.0, 2), rec(5.0, 3)]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].mean_psnr_db, 14.0);
        assert_eq!(s[0].median_psnr_db, 7.5);
        assert_eq!(s[0].converged_fraction, 0.75);
        let s = summarize(&[rec(f64::INFINITY, 0), rec(f64::INFINITY, 1)]);
        assert_eq!(s[0].median_psnr_db, f64::INFINITY);
    }
}
