//! End-to-end checks of the command-line interface: each subcommand run as a
//! real process against temp directories and the samples under `configs/`
//! and `data/`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_forge-sim"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary should spawn")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn workspace_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn write_tiny_config(dir: &Path) -> PathBuf {
    let path = dir.join("tiny.conf");
    fs::write(
        &path,
        "n_major = 3\nn_minor = 40\nn_steps = 20\nseed = 5\np_new = 0.05\n",
    )
    .unwrap();
    path
}

#[test]
fn simulate_writes_artifacts_and_replays_identically() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny_config(dir.path());
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let output = run(bin().args(["simulate", "--config"]).arg(&config).arg("--out").arg(out));
        assert!(output.status.success(), "{}", stderr_of(&output));
    }
    for name in ["events.csv", "projects.csv", "histogram.csv", "manifest.txt"] {
        assert!(out_a.join(name).exists(), "{name} missing");
    }
    assert_eq!(
        fs::read(out_a.join("events.csv")).unwrap(),
        fs::read(out_b.join("events.csv")).unwrap(),
        "same config must replay byte-identically"
    );
    assert_eq!(
        fs::read(out_a.join("projects.csv")).unwrap(),
        fs::read(out_b.join("projects.csv")).unwrap()
    );

    // A seed override must change the log (and is recorded in the manifest).
    let out_c = dir.path().join("c");
    let output = run(bin()
        .args(["simulate", "--config"])
        .arg(&config)
        .args(["--seed", "6", "--out"])
        .arg(&out_c));
    assert!(output.status.success(), "{}", stderr_of(&output));
    assert_ne!(
        fs::read(out_a.join("events.csv")).unwrap(),
        fs::read(out_c.join("events.csv")).unwrap()
    );
    let manifest = fs::read_to_string(out_c.join("manifest.txt")).unwrap();
    assert!(manifest.contains("seed = 6"));
}

#[test]
fn simulate_reports_a_missing_config_path() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(bin()
        .args(["simulate", "--config", "/no/such/run.conf", "--out"])
        .arg(dir.path().join("out")));
    assert!(!output.status.success());
    assert!(stderr_of(&output).contains("/no/such/run.conf"));
}

#[test]
fn sweep_parallelism_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny_config(dir.path());
    let serial = dir.path().join("serial");
    let parallel = dir.path().join("parallel");
    let output = run(bin()
        .args(["sweep", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&serial)
        .args(["--jobs", "1"]));
    assert!(output.status.success(), "{}", stderr_of(&output));
    let output = run(bin()
        .args(["sweep", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&parallel)
        .args(["--jobs", "4"]));
    assert!(output.status.success(), "{}", stderr_of(&output));
    for label in ["J0.0_L0.0", "J0.5_L0.5", "J1.0_L1.0"] {
        assert_eq!(
            fs::read(serial.join(label).join("events.csv")).unwrap(),
            fs::read(parallel.join(label).join("events.csv")).unwrap(),
            "{label} must not depend on worker count"
        );
    }
}

#[test]
fn analyze_handles_run_directories_and_bare_logs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny_config(dir.path());
    let run_dir = dir.path().join("run");
    let output = run(bin()
        .args(["simulate", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&run_dir));
    assert!(output.status.success(), "{}", stderr_of(&output));

    // Directory input: outputs land next to the log.
    let output = run(bin().arg("analyze").arg(&run_dir));
    assert!(output.status.success(), "{}", stderr_of(&output));
    for name in ["loglog.csv", "action_counts.csv", "scatter.csv"] {
        assert!(run_dir.join(name).exists(), "{name} missing");
    }
    let loglog = fs::read_to_string(run_dir.join("loglog.csv")).unwrap();
    assert!(loglog.starts_with("log10_developers,log10_projects\n"));
    let counts = fs::read_to_string(run_dir.join("action_counts.csv")).unwrap();
    assert!(counts.starts_with("task_total_lo,task_total_hi,joins,leaves\n"));

    // File input with an explicit output directory.
    let out_dir = dir.path().join("figures");
    let output = run(bin()
        .arg("analyze")
        .arg(run_dir.join("events.csv"))
        .arg("--out")
        .arg(&out_dir)
        .args(["--bin-width", "1.0"]));
    assert!(output.status.success(), "{}", stderr_of(&output));
    assert!(out_dir.join("scatter.csv").exists());

    // Something that is not an event log is rejected, not misread.
    let bogus = dir.path().join("notes.csv");
    fs::write(&bogus, "a,b,c\n1,2,3\n").unwrap();
    let output = run(bin().arg("analyze").arg(&bogus));
    assert!(!output.status.success());
    assert!(stderr_of(&output).contains("does not look like an event log"));
}

#[test]
fn curves_writes_both_polylines_and_warns_on_an_empty_spread() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spiral.csv");
    let output = run(bin().arg("curves").arg("--out").arg(&out));
    assert!(output.status.success(), "{}", stderr_of(&output));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("curve,theta,radius"));
    let base = text.lines().filter(|l| l.starts_with("base,")).count();
    let spread = text.lines().filter(|l| l.starts_with("spread,")).count();
    assert_eq!((base, spread), (361, 361));

    // A departure angle past the sampled range leaves no spread curve; this
    // is a warning, not an error.
    let out = dir.path().join("base_only.csv");
    let output = run(bin()
        .args(["curves", "--theta1", "10.0", "--samples", "25", "--out"])
        .arg(&out));
    assert!(output.status.success(), "{}", stderr_of(&output));
    assert!(stderr_of(&output).contains("warning"));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("base,")).count(), 25);
    assert_eq!(text.lines().filter(|l| l.starts_with("spread,")).count(), 0);
}

#[test]
fn ingest_cleans_the_sample_export() {
    let dir = tempfile::tempdir().unwrap();
    let histogram = dir.path().join("histogram.csv");
    let cleaned = dir.path().join("cleaned.csv");
    let output = run(bin()
        .arg("ingest")
        .arg(workspace_file("data/sample_user_group.tsv"))
        .arg("--out")
        .arg(&histogram)
        .arg("--cleaned")
        .arg(&cleaned));
    assert!(output.status.success(), "{}", stderr_of(&output));
    let log = stderr_of(&output);
    assert!(log.contains("kept 9 records"), "{log}");
    assert!(log.contains("dropped 1 duplicate"), "{log}");
    assert!(log.contains("skipped 1 rows"), "{log}");

    // Groups alpha(3), beta(2), epsilon(2), gamma(1), delta(1).
    let text = fs::read_to_string(&histogram).unwrap();
    assert_eq!(text, "developers,projects\n1,2\n2,2\n3,1\n");

    // Ingesting the cleaned output again is a fixed point.
    let second = dir.path().join("histogram2.csv");
    let output = run(bin()
        .arg("ingest")
        .arg(&cleaned)
        .arg("--out")
        .arg(&second));
    assert!(output.status.success(), "{}", stderr_of(&output));
    let log = stderr_of(&output);
    assert!(log.contains("kept 9 records"), "{log}");
    assert!(log.contains("dropped 0 duplicate"), "{log}");
    assert_eq!(
        fs::read_to_string(&second).unwrap(),
        fs::read_to_string(&histogram).unwrap()
    );
}

#[test]
fn ingest_rejects_an_export_without_the_required_columns() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "username,team\nu1,a\n").unwrap();
    let output = run(bin()
        .arg("ingest")
        .arg(&bad)
        .arg("--out")
        .arg(dir.path().join("h.csv")));
    assert!(!output.status.success());
    assert!(stderr_of(&output).contains("user_id"));
}

#[test]
fn sample_configs_parse_and_run() {
    let dir = tempfile::tempdir().unwrap();
    // The full-scale sample must parse to the built-in defaults; actually
    // running it belongs to the acceptance suite, not here.
    let text = fs::read_to_string(workspace_file("configs/full.conf")).unwrap();
    let config = forge_sim::config::parse_config_str(&text).unwrap();
    assert_eq!(config, forge_sim::engine::SimConfig::default());

    // The desk-scale sample really runs.
    let desk = fs::read_to_string(workspace_file("configs/desk.conf")).unwrap();
    let desk = forge_sim::config::parse_config_str(&desk).unwrap();
    assert_eq!((desk.n_major, desk.n_minor, desk.n_steps), (100, 2000, 250));
    let shrunk = dir.path().join("shrunk.conf");
    fs::write(&shrunk, "n_major = 2\nn_minor = 20\nn_steps = 10\n").unwrap();
    let output = run(bin()
        .args(["simulate", "--config"])
        .arg(&shrunk)
        .arg("--out")
        .arg(dir.path().join("out")));
    assert!(output.status.success(), "{}", stderr_of(&output));
}
