//! `eqsamp`: run sampling-scheme sweeps, print plans, and demo one trial.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use eqsamp_core::harness::{
    emit_outputs, output::overlay_svg, prepare_output_dir, summarize, Basis, Experiment, Prior,
};
use eqsamp_core::sampling::{plan_ees, plan_fes, plan_random, EnergyProfile};
use eqsamp_core::spectral::forward;
use eqsamp_core::{ExperimentConfig, MidpointRule, Scheme};

#[derive(Parser)]
#[command(name = "eqsamp", version, about = "Energy-equipartition sampling benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full sweep and write CSV tables and SVG charts.
    Run {
        #[command(flatten)]
        common: Common,
        /// Also write waveform/spectrum overlays for every trial.
        #[arg(long)]
        plot_trials: bool,
    },
    /// Print a sampling plan.
    Plan {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "ees")]
        scheme: Scheme,
        #[arg(long, default_value_t = 14)]
        samples: usize,
    },
    /// One paired m = 14, DoF = 1 comparison of all schemes.
    Demo {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 14)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        dof: usize,
    },
}

/// Options shared by every subcommand; each overrides the config file.
#[derive(Args)]
struct Common {
    /// TOML experiment configuration; defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Inclusive bin range, e.g. `--band 4 100`.
    #[arg(long, num_args = 2, value_names = ["LOWER", "UPPER"])]
    band: Option<Vec<usize>>,
    #[arg(long)]
    basis: Option<Basis>,
    #[arg(long)]
    prior: Option<Prior>,
    #[arg(long)]
    midpoint: Option<MidpointRule>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_path(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.base_seed = s;
        }
        if let Some(d) = &self.out_dir {
            cfg.out_dir = d.clone();
        }
        if self.jobs.is_some() {
            cfg.jobs = self.jobs;
        }
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(b) = &self.band {
            cfg.band = Some([b[0], b[1]]);
        }
        if let Some(b) = self.basis {
            cfg.basis = b;
        }
        if let Some(p) = self.prior {
            cfg.prior = p;
        }
        if let Some(m) = self.midpoint {
            cfg.midpoint = m;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn fmt_db(v: f64) -> String {
    if v.is_infinite() {
        "exact".to_string()
    } else {
        format!("{v:.2}")
    }
}

fn run(common: &Common, plot_trials: bool) -> Result<()> {
    let mut cfg = common.load()?;
    cfg.plot_trials |= plot_trials;
    prepare_output_dir(&cfg.out_dir)?;
    let experiment = Experiment::new(cfg)?;
    let records = experiment.run_sweep()?;
    let written = emit_outputs(&records, &experiment)?;
    println!("{:<8}{:>5}{:>5}{:>12}{:>14}", "scheme", "dof", "m", "mean dB", "median dB");
    for row in summarize(&records) {
        println!(
            "{:<8}{:>5}{:>5}{:>12}{:>14}",
            row.scheme.as_str(),
            row.dof,
            row.sample_count,
            fmt_db(row.mean_psnr_db),
            fmt_db(row.median_psnr_db)
        );
    }
    eprintln!(
        "wrote {} files to {}",
        written.len(),
        experiment.config().out_dir.display()
    );
    Ok(())
}

fn plan(common: &Common, scheme: Scheme, samples: usize) -> Result<()> {
    let cfg = common.load()?;
    let band = cfg.band()?;
    let plan = match scheme {
        Scheme::Fes => plan_fes(band, samples)?,
        Scheme::Random => plan_random(band, samples, cfg.base_seed)?,
        Scheme::Ees => {
            anyhow::ensure!(
                cfg.prior == Prior::Template,
                "`plan` has no scene to take a spectrum from; use the template prior"
            );
            let profile = EnergyProfile::from_spectrum(band, &forward(&cfg.template()?.to_signal()))?;
            plan_ees(&profile, samples, cfg.midpoint)?
        }
    };
    print!("{}", plan.to_text());
    Ok(())
}

fn demo(common: &Common, samples: usize, dof: usize) -> Result<()> {
    let mut cfg = common.load()?;
    if common.out_dir.is_none() {
        cfg.out_dir = cfg.out_dir.join("demo");
    }
    cfg.dof_list = vec![dof];
    cfg.sample_counts = vec![samples];
    cfg.validate()?;
    prepare_output_dir(&cfg.out_dir)?;
    let dir = cfg.out_dir.clone();
    let experiment = Experiment::new(cfg)?;
    println!("{:<8}{:>12}{:>12}  sampled bins", "scheme", "PSNR dB", "iterations");
    for scheme in Scheme::ALL {
        let detail = experiment.run_trial_detail(scheme, dof, samples, 0)?;
        let r = &detail.record;
        println!(
            "{:<8}{:>12}{:>12}  {:?}",
            scheme.as_str(),
            fmt_db(r.psnr_db),
            r.solver_iterations,
            detail.plan.selected_bins()
        );
        let stem = scheme.as_str().to_ascii_lowercase();
        fs::write(dir.join(format!("{stem}.svg")), overlay_svg(&detail))
            .with_context(|| format!("writing overlay to {}", dir.display()))?;
        fs::write(dir.join(format!("{stem}_plan.txt")), detail.plan.to_text())
            .with_context(|| format!("writing plan to {}", dir.display()))?;
    }
    eprintln!("wrote overlays and plans to {}", dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run { common, plot_trials } => run(common, *plot_trials),
        Command::Plan {
            common,
            scheme,
            samples,
        } => plan(common, *scheme, *samples),
        Command::Demo {
            common,
            samples,
            dof,
        } => demo(common, *samples, *dof),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
