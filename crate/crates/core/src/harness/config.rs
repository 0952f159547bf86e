//! Experiment configuration, read from TOML.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{Band, MidpointRule, Scheme};
use crate::signal_model::{make_monocycle, MonocycleTemplate};
use crate::solver::SolverSettings;

/// Sparsity basis the solver works in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Basis {
    /// Circular shifts of the monocycle template.
    #[default]
    Monocycle,
    /// Canonical time-domain samples.
    Spike,
}

/// Which spectrum feeds the EES planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Prior {
    /// The transmitted pulse's `|S(k)|`; independent of the scene.
    #[default]
    Template,
    /// The realized scene's own `|S(k)|` (an oracle, for ablation).
    Scene,
}

macro_rules! string_enum {
    ($ty:ident { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(&self) -> &'static str {
                match self { $($ty::$variant => $name),+ }
            }
        }
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($name => Ok($ty::$variant),)+
                    other => Err(Error::Config(format!(
                        concat!("unknown ", stringify!($ty), " `{}`"), other
                    ))),
                }
            }
        }
        impl TryFrom<String> for $ty {
            type Error = Error;
            fn try_from(s: String) -> Result<Self> {
                s.parse()
            }
        }
        impl From<$ty> for String {
            fn from(v: $ty) -> String {
                v.as_str().to_string()
            }
        }
    };
}

string_enum!(Basis { Monocycle => "monocycle", Spike => "spike" });
string_enum!(Prior { Template => "template", Scene => "scene" });

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub feasibility_tolerance: f64,
    pub max_iterations: usize,
    pub penalty_scale: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let s = SolverSettings::default();
        SolverConfig {
            feasibility_tolerance: s.feasibility_tolerance,
            max_iterations: s.max_iterations,
            penalty_scale: s.penalty_scale,
        }
    }
}

impl SolverConfig {
    pub fn settings(&self) -> SolverSettings {
        SolverSettings {
            feasibility_tolerance: self.feasibility_tolerance,
            max_iterations: self.max_iterations,
            penalty_scale: self.penalty_scale,
            ..SolverSettings::default()
        }
    }
}

/// Everything that determines a sweep. Every field has a default, so an
/// empty file is a valid configuration.
///
/// ```toml
/// n = 256
/// center_frequency = 2e9
/// sample_rate = 16e9
/// dof_list = [1, 3]
/// sample_counts = [6, 8, 10, 14, 18, 24, 32]
/// trials = 7
/// base_seed = 1
/// schemes = ["FES", "RANDOM", "EES"]
///
/// [solver]
/// max_iterations = 20000
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub center_frequency: f64,
    pub sample_rate: f64,
    /// Inclusive `[lower, upper]` bin range; the full open band when absent.
    pub band: Option<[usize; 2]>,
    pub dof_list: Vec<usize>,
    pub sample_counts: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub schemes: Vec<Scheme>,
    /// Reflection amplitudes are drawn from `[lo, hi]` with a random sign.
    pub amplitude_range: [f64; 2],
    /// Minimum circular spacing between reflections, in samples. Defaults to
    /// the pulse's duration so that echoes do not overlap.
    pub guard: Option<usize>,
    pub basis: Basis,
    pub prior: Prior,
    pub midpoint: MidpointRule,
    pub solver: SolverConfig,
    pub out_dir: PathBuf,
    pub plot_trials: bool,
    /// Worker threads; all available cores when absent.
    pub jobs: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 256,
            center_frequency: 2e9,
            sample_rate: 16e9,
            band: None,
            dof_list: vec![1, 3],
            sample_counts: vec![6, 8, 10, 14, 18, 24, 32],
            trials: 7,
            base_seed: 1,
            schemes: Scheme::ALL.to_vec(),
            amplitude_range: [0.3, 1.0],
            guard: None,
            basis: Basis::default(),
            prior: Prior::default(),
            midpoint: MidpointRule::default(),
            solver: SolverConfig::default(),
            out_dir: PathBuf::from("results"),
            plot_trials: false,
            jobs: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configuration is always representable as TOML")
    }

    pub fn template(&self) -> Result<MonocycleTemplate> {
        make_monocycle(self.center_frequency, self.sample_rate, self.n)
    }

    pub fn band(&self) -> Result<Band> {
        match self.band {
            Some([lo, hi]) => Band::new(lo, hi, self.n),
            None => Band::full(self.n),
        }
    }

    /// Reflection spacing actually used.
    pub fn guard(&self) -> Result<usize> {
        match self.guard {
            Some(g) => Ok(g),
            None => Ok(self.template()?.duration_bins()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let band = self.band()?;
        self.template()?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.schemes.is_empty() || self.dof_list.is_empty() || self.sample_counts.is_empty() {
            return Err(Error::Config(
                "schemes, dof_list and sample_counts must be nonempty".into(),
            ));
        }
        if let Some(&m) = self
            .sample_counts
            .iter()
            .find(|&&m| m == 0 || m > band.width())
        {
            return Err(Error::Config(format!(
                "sample count {m} outside 1..={}",
                band.width()
            )));
        }
        if self.dof_list.contains(&0) {
            return Err(Error::Config("dof must be at least 1".into()));
        }
        let [lo, hi] = self.amplitude_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::Config(format!(
                "amplitude_range [{lo}, {hi}] must satisfy 0 < lo <= hi"
            )));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        let s = &self.solver;
        if !(s.feasibility_tolerance > 0.0 && s.penalty_scale > 0.0 && s.max_iterations > 0) {
            return Err(Error::Config("solver settings must be positive".into()));
        }
        let guard = self.guard()?;
        let max_dof = self.dof_list.iter().copied().max().unwrap_or(1);
        if max_dof.saturating_mul(guard.max(1)) > self.n {
            return Err(Error::Config(format!(
                "{max_dof} reflections spaced {guard} apart do not fit in {} samples",
                self.n
            )));
        }
        Ok(())
    }
}
