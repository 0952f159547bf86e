use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn eqsamp(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqsamp"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn small_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("small.toml");
    fs::write(
        &path,
        "n = 128\ndof_list = [1]\nsample_counts = [8, 16]\ntrials = 2\n",
    )
    .unwrap();
    path
}

#[test]
fn run_writes_tables_and_charts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out = tmp.path().join("out");
    let o = eqsamp(
        &["run", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap(), "--jobs", "2", "--plot-trials"],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["records.csv", "summary.csv", "timings.csv", "config.toml", "psnr_dof1.svg"] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let records = fs::read_to_string(out.join("records.csv")).unwrap();
    assert_eq!(records.lines().count(), 1 + 3 * 2 * 2);
    assert_eq!(fs::read_dir(out.join("trials")).unwrap().count(), 12);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("EES") && stdout.contains("median dB"));
}

#[test]
fn reruns_are_byte_identical_and_seed_matters() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let run = |dir: &str, seed: &str| {
        let o = eqsamp(
            &["run", "--config", cfg.to_str().unwrap(), "--out-dir", dir, "--seed", seed],
            tmp.path(),
        );
        assert!(o.status.success());
        fs::read(tmp.path().join(dir).join("records.csv")).unwrap()
    };
    assert_eq!(run("a", "9"), run("b", "9"));
    assert_ne!(run("a", "9"), run("c", "10"));
}

#[test]
fn plan_prints_a_parseable_plan() {
    let tmp = tempfile::tempdir().unwrap();
    for scheme in ["ees", "fes", "random"] {
        let o = eqsamp(&["plan", "--scheme", scheme, "--samples", "14"], tmp.path());
        assert!(o.status.success());
        let text = String::from_utf8(o.stdout).unwrap();
        let plan = eqsamp_core::SamplingPlan::from_text(&text, 256).unwrap();
        assert_eq!(plan.len(), 14);
        assert_eq!(plan.scheme().as_str(), scheme.to_ascii_uppercase());
    }
    let o = eqsamp(&["plan", "--scheme", "fes", "--samples", "14", "--n", "512", "--band", "1", "140"], tmp.path());
    let text = String::from_utf8(o.stdout).unwrap();
    let plan = eqsamp_core::SamplingPlan::from_text(&text, 512).unwrap();
    assert_eq!(plan.selected_bins()[..3], [6, 16, 26]);
}

#[test]
fn demo_reports_every_scheme() {
    let tmp = tempfile::tempdir().unwrap();
    let o = eqsamp(&["demo", "--out-dir", "d"], tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    for s in ["FES", "RANDOM", "EES"] {
        assert!(stdout.contains(s));
        let stem = s.to_ascii_lowercase();
        assert!(tmp.path().join(format!("d/{stem}.svg")).is_file());
        assert!(tmp.path().join(format!("d/{stem}_plan.txt")).is_file());
    }
}

#[test]
fn config_and_io_errors_exit_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.toml");
    fs::write(&bad, "trials = 0\n").unwrap();
    let o = eqsamp(&["run", "--config", bad.to_str().unwrap()], tmp.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("trials"));

    let o = eqsamp(&["run", "--config", "missing.toml"], tmp.path());
    assert!(!o.status.success());

    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let cfg = small_config(tmp.path());
    let o = eqsamp(
        &["run", "--config", cfg.to_str().unwrap(), "--out-dir", blocker.join("sub").to_str().unwrap()],
        tmp.path(),
    );
    assert!(!o.status.success());

    let o = eqsamp(&["plan", "--scheme", "nope", "--samples", "3"], tmp.path());
    assert!(!o.status.success());
    let o = eqsamp(&["plan", "--samples", "500"], tmp.path());
    assert!(!o.status.success());
}
