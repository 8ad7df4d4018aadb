//! Figure-ready aggregations over simulation output: the developers-per-
//! project histogram, its log-log projection, spiral reference curves, and
//! per-task-bucket action counts.
//!
//! Aggregators come in two shapes: plain functions over slices for small
//! data, and streaming builders (`observe` one event at a time) so a
//! full-scale log never has to sit in memory.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::io::{self, Write};

use crate::engine::SimState;
use crate::event::{Action, EventRecord};

/// Counts of projects keyed by developer count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Histogram {
    bins: BTreeMap<u32, u64>,
}

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn increment(&mut self, developers: u32) {
        *self.bins.entry(developers).or_insert(0) += 1;
    }

    pub fn add(&mut self, developers: u32, projects: u64) {
        if projects > 0 {
            *self.bins.entry(developers).or_insert(0) += projects;
        }
    }

    pub fn count(&self, developers: u32) -> u64 {
        self.bins.get(&developers).copied().unwrap_or(0)
    }

    /// Total projects across all bins.
    pub fn total(&self) -> u64 {
        self.bins.values().sum()
    }

    /// Projects whose developer count falls in `lo..=hi`.
    pub fn mass_between(&self, lo: u32, hi: u32) -> u64 {
        self.bins.range(lo..=hi).map(|(_, &c)| c).sum()
    }

    /// Projects with developer count at or above `lo`.
    pub fn mass_from(&self, lo: u32) -> u64 {
        self.bins.range(lo..).map(|(_, &c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Bins in ascending developer count.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.bins.iter().map(|(&d, &c)| (d, c))
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "developers,projects")?;
        for (developers, projects) in self.iter() {
            writeln!(w, "{developers},{projects}")?;
        }
        Ok(())
    }
}

/// Histogram of current rosters: every project lands in the bin of its
/// member count, including completed and deserted ones (bin zero).
pub fn dev_project_histogram(state: &SimState) -> Histogram {
    let mut h = Histogram::new();
    for project in &state.projects {
        h.increment(project.members.len() as u32);
    }
    h
}

/// Log-log projection of a histogram: `(log10 developers, log10 projects)`
/// for every bin with at least one developer and one project. Bin zero has
/// no logarithm and is dropped.
pub fn loglog_points(h: &Histogram) -> Vec<(f64, f64)> {
    h.iter()
        .filter(|&(d, c)| d >= 1 && c >= 1)
        .map(|(d, c)| ((d as f64).log10(), (c as f64).log10()))
        .collect()
}

pub fn write_loglog_csv<W: Write>(points: &[(f64, f64)], mut w: W) -> io::Result<()> {
    writeln!(w, "log10_developers,log10_projects")?;
    for (x, y) in points {
        writeln!(w, "{x},{y}")?;
    }
    Ok(())
}

/// Parameters of the spiral reference curves: a base spiral whose amplitude
/// tapers linearly to zero over one turn, and a spread curve that peels away
/// from it past `theta_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralParams {
    /// Angle at which the spread curve departs from the base spiral.
    pub theta_1: f64,
    /// Amplitude coefficient of the base spiral.
    pub amplitude: f64,
    /// How fast the spread curve drops below the base per turn.
    pub spread_slope: f64,
}

impl Default for SpiralParams {
    fn default() -> Self {
        Self {
            theta_1: std::f64::consts::PI,
            amplitude: 0.07,
            spread_slope: 1.6,
        }
    }
}

/// Base spiral radius: `a(theta) * theta` with the amplitude tapering from
/// `amplitude` at 0 to zero at one full turn, so the radius vanishes exactly
/// at both ends.
pub fn spiral_radius(theta: f64, params: &SpiralParams) -> f64 {
    let a = params.amplitude - params.amplitude * (theta / TAU);
    a * theta
}

/// Spread radius: the base spiral minus a drop growing linearly past
/// `theta_1`. Before `theta_1` the drop would be negative, so callers sample
/// it only from `theta_1` on; the curves touch exactly at `theta_1`.
pub fn spiral_spread_radius(theta: f64, params: &SpiralParams) -> f64 {
    let drop = params.spread_slope * (theta - params.theta_1) / TAU;
    spiral_radius(theta, params) - drop
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpiralCurves {
    /// `(theta, radius)` samples of the base spiral over `[0, theta_max]`.
    pub base: Vec<(f64, f64)>,
    /// `(theta, radius)` samples of the spread curve over
    /// `[theta_1, theta_max]`; empty when `theta_1 > theta_max`.
    pub spread: Vec<(f64, f64)>,
}

impl SpiralCurves {
    /// True when the spread curve had no room to exist.
    pub fn spread_is_empty(&self) -> bool {
        self.spread.is_empty()
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum AnalyticsError {
    #[error("theta_max = {0} must be positive and finite")]
    BadThetaMax(f64),
    #[error("theta_1 = {0} must be non-negative and finite")]
    BadThetaOne(f64),
    #[error("need at least 2 samples per curve, got {0}")]
    TooFewSamples(usize),
    #[error("bin width {0} must be positive and finite")]
    BadBinWidth(f64),
}

/// Samples both reference curves with `n_samples` points each, endpoints
/// included exactly: the base curve starts at `theta = 0` and both curves
/// end at `theta = theta_max`.
pub fn spiral_reference(
    theta_max: f64,
    params: &SpiralParams,
    n_samples: usize,
) -> Result<SpiralCurves, AnalyticsError> {
    if !(theta_max > 0.0) || !theta_max.is_finite() {
        return Err(AnalyticsError::BadThetaMax(theta_max));
    }
    if !(params.theta_1 >= 0.0) || !params.theta_1.is_finite() {
        return Err(AnalyticsError::BadThetaOne(params.theta_1));
    }
    if n_samples < 2 {
        return Err(AnalyticsError::TooFewSamples(n_samples));
    }
    let sample_range = |lo: f64, hi: f64| -> Vec<f64> {
        (0..n_samples)
            .map(|i| lo + (hi - lo) * (i as f64 / (n_samples - 1) as f64))
            .collect()
    };
    let base = sample_range(0.0, theta_max)
        .into_iter()
        .map(|theta| (theta, spiral_radius(theta, params)))
        .collect();
    let spread = if params.theta_1 > theta_max {
        Vec::new()
    } else {
        sample_range(params.theta_1, theta_max)
            .into_iter()
            .map(|theta| (theta, spiral_spread_radius(theta, params)))
            .collect()
    };
    Ok(SpiralCurves { base, spread })
}

pub fn write_spiral_csv<W: Write>(curves: &SpiralCurves, mut w: W) -> io::Result<()> {
    writeln!(w, "curve,theta,radius")?;
    for (theta, radius) in &curves.base {
        writeln!(w, "base,{theta},{radius}")?;
    }
    for (theta, radius) in &curves.spread {
        writeln!(w, "spread,{theta},{radius}")?;
    }
    Ok(())
}

/// Join and leave counts bucketed by the task total of the project acted
/// on. Rows are contiguous from the zero bucket to the last non-empty one.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionCounts {
    pub bin_width: f64,
    /// `rows[i]` covers task totals in `[i * bin_width, (i + 1) * bin_width)`.
    pub rows: Vec<ActionCountRow>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ActionCountRow {
    pub joins: u64,
    pub leaves: u64,
}

impl ActionCounts {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "task_total_lo,task_total_hi,joins,leaves")?;
        for (i, row) in self.rows.iter().enumerate() {
            let lo = i as f64 * self.bin_width;
            let hi = (i + 1) as f64 * self.bin_width;
            writeln!(w, "{lo},{hi},{},{}", row.joins, row.leaves)?;
        }
        Ok(())
    }
}

/// Streaming builder for [`ActionCounts`].
#[derive(Debug)]
pub struct ActionCountsBuilder {
    bin_width: f64,
    rows: Vec<ActionCountRow>,
}

impl ActionCountsBuilder {
    pub fn new(bin_width: f64) -> Result<Self, AnalyticsError> {
        if !(bin_width > 0.0) || !bin_width.is_finite() {
            return Err(AnalyticsError::BadBinWidth(bin_width));
        }
        Ok(Self {
            bin_width,
            rows: Vec::new(),
        })
    }

    pub fn observe(&mut self, event: &EventRecord) {
        let counts_join = event.action == Action::Join;
        let counts_leave = event.action == Action::Leave;
        if !counts_join && !counts_leave {
            return;
        }
        let Some(task_total) = event.task_total else {
            return;
        };
        let bin = (task_total / self.bin_width).floor() as usize;
        if self.rows.len() <= bin {
            self.rows.resize(bin + 1, ActionCountRow::default());
        }
        let row = &mut self.rows[bin];
        if counts_join {
            row.joins += 1;
        } else {
            row.leaves += 1;
        }
    }

    pub fn finish(self) -> ActionCounts {
        ActionCounts {
            bin_width: self.bin_width,
            rows: self.rows,
        }
    }
}

/// Buckets join and leave events by the task total of the project involved.
pub fn action_counts_by_task<'a, I>(events: I, bin_width: f64) -> Result<ActionCounts, AnalyticsError>
where
    I: IntoIterator<Item = &'a EventRecord>,
{
    let mut builder = ActionCountsBuilder::new(bin_width)?;
    for event in events {
        builder.observe(event);
    }
    Ok(builder.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScatterSeries {
    Create,
    Join,
}

impl ScatterSeries {
    pub fn as_str(self) -> &'static str {
        match self {
            ScatterSeries::Create => "create",
            ScatterSeries::Join => "join",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterPoint {
    pub series: ScatterSeries,
    pub task_total: f64,
    pub fitness: f64,
}

/// The (task total, fitness) point a create or join event contributes to
/// the scatter; other actions contribute nothing.
pub fn scatter_point(event: &EventRecord) -> Option<ScatterPoint> {
    let series = match event.action {
        Action::Create => ScatterSeries::Create,
        Action::Join => ScatterSeries::Join,
        _ => return None,
    };
    Some(ScatterPoint {
        series,
        task_total: event.task_total?,
        fitness: event.fitness?,
    })
}

/// Scatter of project task total against fitness at the moment of each
/// create and join.
pub fn task_fitness_scatter<'a, I>(events: I) -> Vec<ScatterPoint>
where
    I: IntoIterator<Item = &'a EventRecord>,
{
    events.into_iter().filter_map(scatter_point).collect()
}

pub const SCATTER_CSV_HEADER: &str = "series,task_total,fitness";

pub fn write_scatter_row<W: Write>(point: &ScatterPoint, mut w: W) -> io::Result<()> {
    writeln!(
        w,
        "{},{},{}",
        point.series.as_str(),
        point.task_total,
        point.fitness
    )
}

pub fn write_scatter_csv<W: Write>(points: &[ScatterPoint], mut w: W) -> io::Result<()> {
    writeln!(w, "{SCATTER_CSV_HEADER}")?;
    for point in points {
        write_scatter_row(point, &mut w)?;
    }
    Ok(())
}

/// Streaming reconstruction of the final developers-per-project histogram
/// from an event log: the last logged member count of each project wins.
#[derive(Debug, Default)]
pub struct FinalHistogramBuilder {
    last_count: BTreeMap<u32, u32>,
}

impl FinalHistogramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn observe(&mut self, event: &EventRecord) {
        if let (Some(project), Some(count)) = (event.project, event.member_count) {
            self.last_count.insert(project.0, count);
        }
    }

    pub fn finish(self) -> Histogram {
        let mut h = Histogram::new();
        for (_, count) in self.last_count {
            h.increment(count);
        }
        h
    }
}
