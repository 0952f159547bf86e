//! CSV tables and SVG charts for a finished sweep.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::svg::{line_chart, trial_overlay, Series};
use super::{summarize, Experiment, SummaryRow, TrialRecord};
use crate::error::{Error, Result};
use crate::spectral::UnitaryDft;

/// Charts clamp infinite (exact) PSNR to this value.
pub const PSNR_CHART_CAP_DB: f64 = 150.0;

fn out_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::OutputDir {
        path: path.to_path_buf(),
        source,
    }
}

/// Creates `dir` if needed and proves it is writable, so a bad path fails
/// before any trial runs.
pub fn prepare_output_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(out_err(dir))?;
    let probe = dir.join(".eqsamp-write-probe");
    fs::File::create(&probe)
        .and_then(|mut f| f.write_all(b"ok"))
        .map_err(out_err(dir))?;
    fs::remove_file(&probe).map_err(out_err(dir))?;
    Ok(())
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `records.csv`: `scheme,dof,sample_count,seed,psnr_db,spectrum_l2_error,solver_iterations,converged`.
pub fn write_records(path: &Path, records: &[TrialRecord]) -> Result<()> {
    write_csv(path, records)
}

pub fn write_summary(path: &Path, summary: &[SummaryRow]) -> Result<()> {
    write_csv(path, summary)
}

#[derive(Serialize)]
struct Timing {
    scheme: String,
    dof: usize,
    sample_count: usize,
    seed: u64,
    wall_time: f64,
}

/// Writes `records.csv`, `summary.csv`, `timings.csv`, the resolved
/// `config.toml`, one `psnr_dof<F>.svg` per DoF and, with
/// `config.plot_trials`, a `trials/` directory of overlays. Returns the
/// paths written.
pub fn emit_outputs(records: &[TrialRecord], experiment: &Experiment) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::Config("no records to write".into()));
    }
    let config = experiment.config();
    let dir = config.out_dir.as_path();
    prepare_output_dir(dir)?;
    let mut written = Vec::new();

    let path = dir.join("records.csv");
    write_records(&path, records)?;
    written.push(path);

    let summary = summarize(records);
    let path = dir.join("summary.csv");
    write_summary(&path, &summary)?;
    written.push(path);

    let timings: Vec<Timing> = records
        .iter()
        .map(|r| Timing {
            scheme: r.scheme.to_string(),
            dof: r.dof,
            sample_count: r.sample_count,
            seed: r.seed,
            wall_time: r.wall_time,
        })
        .collect();
    let path = dir.join("timings.csv");
    write_csv(&path, &timings)?;
    written.push(path);

    let path = dir.join("config.toml");
    fs::write(&path, config.to_toml_string()).map_err(out_err(dir))?;
    written.push(path);

    let mut dofs: Vec<usize> = summary.iter().map(|s| s.dof).collect();
    dofs.sort_unstable();
    dofs.dedup();
    for dof in dofs {
        let mut schemes: Vec<_> = summary.iter().filter(|s| s.dof == dof).map(|s| s.scheme).collect();
        schemes.dedup();
        let series: Vec<Series> = schemes
            .iter()
            .map(|&scheme| Series {
                name: scheme.to_string(),
                points: summary
                    .iter()
                    .filter(|s| s.dof == dof && s.scheme == scheme)
                    .map(|s| (s.sample_count as f64, s.mean_psnr_db))
                    .collect(),
            })
            .collect();
        let svg = line_chart(
            &format!("Mean PSNR vs number of samples, DoF = {dof}"),
            "number of samples m",
            "mean PSNR (dB)",
            &series,
            Some(PSNR_CHART_CAP_DB),
        );
        let path = dir.join(format!("psnr_dof{dof}.svg"));
        fs::write(&path, svg).map_err(out_err(dir))?;
        written.push(path);
    }

    if config.plot_trials {
        let trials_dir = dir.join("trials");
        fs::create_dir_all(&trials_dir).map_err(out_err(&trials_dir))?;
        for r in records {
            let detail = experiment.run_trial_detail(r.scheme, r.dof, r.sample_count, r.trial)?;
            let path = trials_dir.join(format!(
                "{}_dof{}_m{}_t{}.svg",
                r.scheme.as_str().to_ascii_lowercase(),
                r.dof,
                r.sample_count,
                r.trial
            ));
            fs::write(&path, overlay_svg(&detail)).map_err(out_err(&trials_dir))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Waveform and spectrum overlay for one trial.
pub fn overlay_svg(detail: &super::TrialDetail) -> String {
    let n = detail.original.len();
    let dft = UnitaryDft::new(n);
    let half = n / 2 + 1;
    let mag = |x: &[f64]| -> Vec<f64> {
        dft.forward_real(x)[..half].iter().map(|c| c.norm()).collect()
    };
    let r = &detail.record;
    trial_overlay(
        &format!(
            "{} m={} DoF={} trial {}: PSNR {:.1} dB",
            r.scheme, r.sample_count, r.dof, r.trial, r.psnr_db
        ),
        detail.original.samples(),
        &detail.reconstruction,
        &mag(detail.original.samples()),
        &mag(&detail.reconstruction),
        detail.plan.selected_bins(),
    )
}
