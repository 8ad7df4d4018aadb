//! Writing a run's artifacts to a directory: event log, project table,
//! final histogram, and a manifest that doubles as a replayable config.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use crate::analytics::dev_project_histogram;
use crate::config::render_config;
use crate::engine::{EngineError, SimConfig, SimState, Simulation};
use crate::event::{CsvSink, EventRecord, EventSink};
use crate::model::TaskKind;

pub const EVENTS_FILE: &str = "events.csv";
pub const PROJECTS_FILE: &str = "projects.csv";
pub const HISTOGRAM_FILE: &str = "histogram.csv";
pub const MANIFEST_FILE: &str = "manifest.txt";

pub const PROJECTS_CSV_HEADER: &str =
    "project_id,category,origin,task_network_communication,task_database,task_graphics,member_count,completed";

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

fn io_at(path: &Path) -> impl FnOnce(io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// What a completed run left on disk.
#[derive(Debug)]
pub struct RunArtifacts {
    pub dir: PathBuf,
    pub state: SimState,
    pub event_rows: u64,
    pub duration: Duration,
}

/// Runs `config` and writes all four artifacts into `dir` (created if
/// needed), streaming the event log so memory use stays flat. `label` is an
/// optional sweep-point tag recorded in the manifest.
pub fn simulate_to_dir(
    config: &SimConfig,
    dir: &Path,
    label: Option<&str>,
) -> Result<RunArtifacts, OutputError> {
    fs::create_dir_all(dir).map_err(io_at(dir))?;
    let started = Instant::now();
    let events_path = dir.join(EVENTS_FILE);
    let file = File::create(&events_path).map_err(io_at(&events_path))?;
    let mut sink =
        CsvSink::new(BufWriter::new(file)).map_err(io_at(&events_path))?;
    let state = Simulation::run(config.clone(), &mut sink)?;
    let event_rows = sink.rows;
    sink.flush().map_err(io_at(&events_path))?;
    drop(sink);
    let duration = started.elapsed();
    write_side_artifacts(config, &state, dir, event_rows, duration, label)?;
    Ok(RunArtifacts {
        dir: dir.to_path_buf(),
        state,
        event_rows,
        duration,
    })
}

/// Writes all four artifacts for an already-completed run whose events are
/// in memory.
pub fn write_run_outputs(
    config: &SimConfig,
    state: &SimState,
    events: &[EventRecord],
    dir: &Path,
) -> Result<(), OutputError> {
    fs::create_dir_all(dir).map_err(io_at(dir))?;
    let events_path = dir.join(EVENTS_FILE);
    let file = File::create(&events_path).map_err(io_at(&events_path))?;
    let mut sink =
        CsvSink::new(BufWriter::new(file)).map_err(io_at(&events_path))?;
    for event in events {
        sink.record(event).map_err(io_at(&events_path))?;
    }
    sink.flush().map_err(io_at(&events_path))?;
    write_side_artifacts(config, state, dir, events.len() as u64, Duration::ZERO, None)
}

/// Writes the project table, histogram, and manifest for a finished run
/// whose event log has already been streamed elsewhere.
pub fn write_side_artifacts(
    config: &SimConfig,
    state: &SimState,
    dir: &Path,
    event_rows: u64,
    duration: Duration,
    label: Option<&str>,
) -> Result<(), OutputError> {
    let projects_path = dir.join(PROJECTS_FILE);
    let file = File::create(&projects_path).map_err(io_at(&projects_path))?;
    let mut w = BufWriter::new(file);
    write_project_table(state, &mut w).map_err(io_at(&projects_path))?;
    w.flush().map_err(io_at(&projects_path))?;

    let histogram_path = dir.join(HISTOGRAM_FILE);
    let file = File::create(&histogram_path).map_err(io_at(&histogram_path))?;
    let mut w = BufWriter::new(file);
    dev_project_histogram(state)
        .write_csv(&mut w)
        .map_err(io_at(&histogram_path))?;
    w.flush().map_err(io_at(&histogram_path))?;

    let manifest_path = dir.join(MANIFEST_FILE);
    let file = File::create(&manifest_path).map_err(io_at(&manifest_path))?;
    let mut w = BufWriter::new(file);
    write_manifest(&mut w, config, state, event_rows, duration, label)
        .map_err(io_at(&manifest_path))?;
    w.flush().map_err(io_at(&manifest_path))?;
    Ok(())
}

/// One row per project ever created, in id order.
pub fn write_project_table<W: Write>(state: &SimState, mut w: W) -> io::Result<()> {
    writeln!(w, "{PROJECTS_CSV_HEADER}")?;
    for p in &state.projects {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            p.id.0,
            p.category.as_str(),
            p.origin.as_str(),
            p.tasks[TaskKind::NetworkCommunication],
            p.tasks[TaskKind::Database],
            p.tasks[TaskKind::Graphics],
            p.members.len(),
            p.completed,
        )?;
    }
    Ok(())
}

/// The manifest is a valid config file for the run it describes, with the
/// run's vitals in comment lines above the keys.
pub fn write_manifest<W: Write>(
    mut w: W,
    config: &SimConfig,
    state: &SimState,
    event_rows: u64,
    duration: Duration,
    label: Option<&str>,
) -> io::Result<()> {
    writeln!(w, "# run manifest (parseable as a config file)")?;
    writeln!(w, "# tool version: {}", env!("CARGO_PKG_VERSION"))?;
    if let Some(label) = label {
        writeln!(w, "# sweep point: {label}")?;
    }
    writeln!(w, "# steps completed: {}", state.step)?;
    writeln!(w, "# wall time: {:.3}s", duration.as_secs_f64())?;
    writeln!(w, "# event rows: {event_rows} ({EVENTS_FILE})")?;
    let completed = state.projects.iter().filter(|p| p.completed).count();
    writeln!(
        w,
        "# projects: {} total, {completed} completed ({PROJECTS_FILE})",
        state.projects.len()
    )?;
    writeln!(w, "# histogram: {HISTOGRAM_FILE}")?;
    writeln!(w, "# time-budget flags after splits: {}", state.time_flags)?;
    write!(w, "{}", render_config(config))?;
    Ok(())
}
