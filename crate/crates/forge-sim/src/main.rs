use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use forge_sim::analytics::{
    loglog_points, scatter_point, spiral_reference, write_loglog_csv, write_scatter_row,
    write_spiral_csv, ActionCountsBuilder, FinalHistogramBuilder, SpiralParams,
    SCATTER_CSV_HEADER,
};
use forge_sim::config::load_config;
use forge_sim::engine::{sweep_configs, SimConfig};
use forge_sim::event::{EventRecord, CSV_HEADER};
use forge_sim::ingest::{empirical_histogram, parse_user_group, write_records_csv};
use forge_sim::output::simulate_to_dir;

#[derive(Parser)]
#[command(
    name = "forge-sim",
    version,
    about = "Simulates an open-source developer community and post-processes its output"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write events, project table, histogram, manifest
    Simulate {
        /// Config file (`key = value` lines, `#` comments); defaults apply when omitted
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the config's seed
        #[arg(long)]
        seed: Option<u64>,
        /// Directory the artifacts go to
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the 3x3 join/leave threshold grid, one subdirectory per point
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the base seed (each point offsets it by its grid index)
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "sweep")]
        out: PathBuf,
        /// Parallel workers; the FORGE_SIM_JOBS variable is the fallback
        #[arg(long, env = "FORGE_SIM_JOBS", default_value_t = 1)]
        jobs: usize,
    },
    /// Derive figure data from an event log: log-log histogram points,
    /// action counts by task total, and the task/fitness scatter
    Analyze {
        /// A run directory (containing events.csv) or an event log path
        input: PathBuf,
        /// Output directory; defaults to the directory the log lives in
        #[arg(long)]
        out: Option<PathBuf>,
        /// Task-total bucket width for the action counts
        #[arg(long, default_value_t = 0.5)]
        bin_width: f64,
    },
    /// Emit the spiral reference curves as CSV
    Curves {
        #[arg(long, default_value_t = std::f64::consts::TAU)]
        theta_max: f64,
        /// Angle where the spread curve departs from the base spiral
        #[arg(long = "theta1", default_value_t = std::f64::consts::PI)]
        theta_1: f64,
        /// Samples per curve, endpoints included
        #[arg(long, default_value_t = 361)]
        samples: usize,
        #[arg(long, default_value = "spiral.csv")]
        out: PathBuf,
    },
    /// Clean a user/group membership export and write its
    /// developers-per-group histogram
    Ingest {
        /// CSV or TSV file with user_id and group_id columns
        input: PathBuf,
        #[arg(long, default_value = "histogram.csv")]
        out: PathBuf,
        /// Also write the cleaned records to this path
        #[arg(long)]
        cleaned: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { config, seed, out } => cmd_simulate(config, seed, out),
        Command::Sweep {
            config,
            seed,
            out,
            jobs,
        } => cmd_sweep(config, seed, out, jobs),
        Command::Analyze {
            input,
            out,
            bin_width,
        } => cmd_analyze(input, out, bin_width),
        Command::Curves {
            theta_max,
            theta_1,
            samples,
            out,
        } => cmd_curves(theta_max, theta_1, samples, out),
        Command::Ingest {
            input,
            out,
            cleaned,
        } => cmd_ingest(input, out, cleaned),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_base_config(path: Option<&Path>, seed: Option<u64>) -> Result<SimConfig> {
    let mut config = match path {
        Some(p) => load_config(p)?,
        None => SimConfig::default(),
    };
    if let Some(seed) = seed {
        config.seed = seed;
    }
    Ok(config)
}

fn cmd_simulate(config: Option<PathBuf>, seed: Option<u64>, out: PathBuf) -> Result<()> {
    let config = load_base_config(config.as_deref(), seed)?;
    let artifacts = simulate_to_dir(&config, &out, None)?;
    if artifacts.state.time_flags > 0 {
        eprintln!(
            "note: {} split(s) pushed a creator past the time budget",
            artifacts.state.time_flags
        );
    }
    println!(
        "wrote {} events and {} projects to {} in {:.3}s",
        artifacts.event_rows,
        artifacts.state.projects.len(),
        out.display(),
        artifacts.duration.as_secs_f64()
    );
    Ok(())
}

fn cmd_sweep(config: Option<PathBuf>, seed: Option<u64>, out: PathBuf, jobs: usize) -> Result<()> {
    let base = load_base_config(config.as_deref(), seed)?;
    let points = sweep_configs(&base);
    fs::create_dir_all(&out).with_context(|| format!("cannot create {}", out.display()))?;
    let workers = jobs.clamp(1, points.len());
    let next = AtomicUsize::new(0);
    let failures: Mutex<Vec<String>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= points.len() {
                    break;
                }
                let (point, point_config) = &points[i];
                let label = point.label();
                let dir = out.join(&label);
                match simulate_to_dir(point_config, &dir, Some(&label)) {
                    Ok(artifacts) => {
                        println!(
                            "{label}: {} events, {} projects ({:.3}s)",
                            artifacts.event_rows,
                            artifacts.state.projects.len(),
                            artifacts.duration.as_secs_f64()
                        );
                    }
                    Err(err) => {
                        failures.lock().unwrap().push(format!("{label}: {err:#}"));
                    }
                }
            });
        }
    });
    let failures = failures.into_inner().unwrap();
    let manifest_path = out.join("manifest.txt");
    let mut manifest = BufWriter::new(
        File::create(&manifest_path)
            .with_context(|| format!("cannot write {}", manifest_path.display()))?,
    );
    writeln!(manifest, "# sweep manifest (base config below)")?;
    writeln!(manifest, "# tool version: {}", env!("CARGO_PKG_VERSION"))?;
    for (point, _) in &points {
        writeln!(manifest, "# point {}: {}", point.index, point.label())?;
    }
    write!(manifest, "{}", forge_sim::config::render_config(&base))?;
    manifest.flush()?;
    if !failures.is_empty() {
        for failure in &failures {
            eprintln!("sweep point failed: {failure}");
        }
        bail!(
            "{} of {} sweep points failed; completed points were kept",
            failures.len(),
            points.len()
        );
    }
    println!("sweep finished: {} points under {}", points.len(), out.display());
    Ok(())
}

fn cmd_analyze(input: PathBuf, out: Option<PathBuf>, bin_width: f64) -> Result<()> {
    let log_path = if input.is_dir() {
        input.join("events.csv")
    } else {
        input.clone()
    };
    let out_dir = match out {
        Some(dir) => dir,
        None => log_path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."))
            .to_path_buf(),
    };
    fs::create_dir_all(&out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    let file = File::open(&log_path)
        .with_context(|| format!("cannot open event log {}", log_path.display()))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .transpose()?
        .ok_or_else(|| anyhow!("event log {} is empty", log_path.display()))?;
    if header.trim_end() != CSV_HEADER {
        bail!(
            "{} does not look like an event log: unexpected header {:?}",
            log_path.display(),
            header
        );
    }

    let mut histogram_builder = FinalHistogramBuilder::new();
    let mut action_builder = ActionCountsBuilder::new(bin_width)?;
    let scatter_path = out_dir.join("scatter.csv");
    let mut scatter = BufWriter::new(
        File::create(&scatter_path)
            .with_context(|| format!("cannot write {}", scatter_path.display()))?,
    );
    writeln!(scatter, "{SCATTER_CSV_HEADER}")?;
    let mut rows = 0u64;
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let record = EventRecord::from_csv_row(&line)
            .map_err(|e| anyhow!("{} line {}: {e}", log_path.display(), idx + 2))?;
        histogram_builder.observe(&record);
        action_builder.observe(&record);
        if let Some(point) = scatter_point(&record) {
            write_scatter_row(&point, &mut scatter)?;
        }
        rows += 1;
    }
    scatter.flush()?;

    let histogram = histogram_builder.finish();
    let points = loglog_points(&histogram);
    let loglog_path = out_dir.join("loglog.csv");
    let mut w = BufWriter::new(
        File::create(&loglog_path)
            .with_context(|| format!("cannot write {}", loglog_path.display()))?,
    );
    write_loglog_csv(&points, &mut w)?;
    w.flush()?;

    let counts = action_builder.finish();
    let counts_path = out_dir.join("action_counts.csv");
    let mut w = BufWriter::new(
        File::create(&counts_path)
            .with_context(|| format!("cannot write {}", counts_path.display()))?,
    );
    counts.write_csv(&mut w)?;
    w.flush()?;

    println!(
        "analyzed {rows} events -> loglog.csv, action_counts.csv, scatter.csv in {}",
        out_dir.display()
    );
    Ok(())
}

fn cmd_curves(theta_max: f64, theta_1: f64, samples: usize, out: PathBuf) -> Result<()> {
    let params = SpiralParams {
        theta_1,
        ..SpiralParams::default()
    };
    if theta_1 > theta_max {
        eprintln!(
            "warning: theta1 = {theta_1} exceeds theta-max = {theta_max}; spread curve omitted"
        );
    }
    let curves = spiral_reference(theta_max, &params, samples)?;
    let mut w = BufWriter::new(
        File::create(&out).with_context(|| format!("cannot write {}", out.display()))?,
    );
    write_spiral_csv(&curves, &mut w)?;
    w.flush()?;
    println!(
        "wrote {} base and {} spread samples to {}",
        curves.base.len(),
        curves.spread.len(),
        out.display()
    );
    Ok(())
}

fn cmd_ingest(input: PathBuf, out: PathBuf, cleaned: Option<PathBuf>) -> Result<()> {
    let file =
        File::open(&input).with_context(|| format!("cannot open {}", input.display()))?;
    let report = parse_user_group(file)?;
    for row in report.skipped.iter().take(20) {
        eprintln!("{}:{}: skipped: {}", input.display(), row.line, row.reason);
    }
    if report.skipped.len() > 20 {
        eprintln!("... and {} more skipped rows", report.skipped.len() - 20);
    }
    eprintln!(
        "ingest: kept {} records, dropped {} duplicate pairs, skipped {} rows",
        report.records.len(),
        report.duplicates,
        report.skipped.len()
    );
    if let Some(cleaned_path) = cleaned {
        let mut w = BufWriter::new(File::create(&cleaned_path).with_context(|| {
            format!("cannot write {}", cleaned_path.display())
        })?);
        write_records_csv(&report.records, &mut w)?;
        w.flush()?;
    }
    let histogram = empirical_histogram(&report.records);
    let mut w = BufWriter::new(
        File::create(&out).with_context(|| format!("cannot write {}", out.display()))?,
    );
    histogram.write_csv(&mut w)?;
    w.flush()?;
    println!(
        "wrote histogram of {} groups to {}",
        histogram.total(),
        out.display()
    );
    Ok(())
}
