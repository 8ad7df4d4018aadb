//! Event records: one row per agent action, and the sinks that receive them.
//!
//! The CSV encoding is part of the deterministic contract: identical runs
//! must produce byte-identical logs. Floats are written with Rust's shortest
//! round-trip formatting; absent values are empty fields.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::behaviors::NoOpReason;
use crate::model::{AgentId, ProjectId, ProjectOrigin};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Create,
    Join,
    Leave,
    NoOp,
}

impl Action {
    pub fn as_str(self) -> &'static str {
        match self {
            Action::Create => "create",
            Action::Join => "join",
            Action::Leave => "leave",
            Action::NoOp => "noop",
        }
    }

    pub fn from_str(s: &str) -> Option<Action> {
        match s {
            "create" => Some(Action::Create),
            "join" => Some(Action::Join),
            "leave" => Some(Action::Leave),
            "noop" => Some(Action::NoOp),
            _ => None,
        }
    }
}

/// Qualifier carried in the last CSV column: the origin of a created
/// project, or the reason an agent did nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventDetail {
    None,
    Origin(ProjectOrigin),
    Reason(NoOpReason),
}

impl EventDetail {
    pub fn as_str(self) -> &'static str {
        match self {
            EventDetail::None => "",
            EventDetail::Origin(o) => o.as_str(),
            EventDetail::Reason(r) => match r {
                NoOpReason::CreateSkipped => "skip_create",
                NoOpReason::NoEligibleProjects => "no_projects",
                NoOpReason::AlreadyMember => "already_member",
                NoOpReason::CategoryMismatch => "category",
                NoOpReason::PressureBelowThreshold => "pressure",
                NoOpReason::TimeLimitExceeded => "time",
                NoOpReason::LoadBelowThreshold => "below_threshold",
                NoOpReason::NoMemberships => "no_memberships",
                NoOpReason::Idle => "idle",
            },
        }
    }

    pub fn from_str(s: &str) -> Option<EventDetail> {
        Some(match s {
            "" => EventDetail::None,
            "new" => EventDetail::Origin(ProjectOrigin::New),
            "sub" => EventDetail::Origin(ProjectOrigin::Sub),
            "skip_create" => EventDetail::Reason(NoOpReason::CreateSkipped),
            "no_projects" => EventDetail::Reason(NoOpReason::NoEligibleProjects),
            "already_member" => EventDetail::Reason(NoOpReason::AlreadyMember),
            "category" => EventDetail::Reason(NoOpReason::CategoryMismatch),
            "pressure" => EventDetail::Reason(NoOpReason::PressureBelowThreshold),
            "time" => EventDetail::Reason(NoOpReason::TimeLimitExceeded),
            "below_threshold" => EventDetail::Reason(NoOpReason::LoadBelowThreshold),
            "no_memberships" => EventDetail::Reason(NoOpReason::NoMemberships),
            "idle" => EventDetail::Reason(NoOpReason::Idle),
            _ => return None,
        })
    }
}

/// One logged action. Project-scoped fields are absent when the action had
/// no project in hand (for example a skipped create).
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub step: u32,
    pub agent: AgentId,
    pub action: Action,
    pub project: Option<ProjectId>,
    /// Sum of the project's task amounts after the action.
    pub task_total: Option<f64>,
    /// Roster size after the action.
    pub member_count: Option<u32>,
    /// Project fitness at this step.
    pub fitness: Option<f64>,
    /// The quantity that drove the decision: the founding draw, the
    /// triggering load, the join pressure, or the leave load.
    pub driving_value: Option<f64>,
    pub detail: EventDetail,
}

pub const CSV_HEADER: &str =
    "step,agent_id,action,project_id,project_task_total,member_count,fitness,driving_value,detail";

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ParseEventError {
    #[error("expected 9 fields, found {0}")]
    FieldCount(usize),
    #[error("bad {field}: {value:?}")]
    BadField { field: &'static str, value: String },
}

fn push_opt_f64(out: &mut String, v: Option<f64>) {
    if let Some(x) = v {
        write!(out, "{x}").expect("writing to a String cannot fail");
    }
}

impl EventRecord {
    /// Appends this record as one CSV line (with trailing newline).
    pub fn write_csv_row(&self, out: &mut String) {
        write!(out, "{},{},{},", self.step, self.agent.0, self.action.as_str())
            .expect("writing to a String cannot fail");
        if let Some(p) = self.project {
            write!(out, "{}", p.0).expect("writing to a String cannot fail");
        }
        out.push(',');
        push_opt_f64(out, self.task_total);
        out.push(',');
        if let Some(m) = self.member_count {
            write!(out, "{m}").expect("writing to a String cannot fail");
        }
        out.push(',');
        push_opt_f64(out, self.fitness);
        out.push(',');
        push_opt_f64(out, self.driving_value);
        out.push(',');
        out.push_str(self.detail.as_str());
        out.push('\n');
    }

    pub fn to_csv_row(&self) -> String {
        let mut s = String::new();
        self.write_csv_row(&mut s);
        s
    }

    /// Parses one data line (no trailing newline).
    pub fn from_csv_row(line: &str) -> Result<EventRecord, ParseEventError> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(ParseEventError::FieldCount(fields.len()));
        }
        let bad = |field: &'static str, value: &str| ParseEventError::BadField {
            field,
            value: value.to_string(),
        };
        let step = fields[0].parse().map_err(|_| bad("step", fields[0]))?;
        let agent = AgentId(fields[1].parse().map_err(|_| bad("agent_id", fields[1]))?);
        let action = Action::from_str(fields[2]).ok_or_else(|| bad("action", fields[2]))?;
        let parse_opt_u32 = |field: &'static str, s: &str| -> Result<Option<u32>, ParseEventError> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| bad(field, s))
            }
        };
        let parse_opt_f64 = |field: &'static str, s: &str| -> Result<Option<f64>, ParseEventError> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| bad(field, s))
            }
        };
        Ok(EventRecord {
            step,
            agent,
            action,
            project: parse_opt_u32("project_id", fields[3])?.map(ProjectId),
            task_total: parse_opt_f64("project_task_total", fields[4])?,
            member_count: parse_opt_u32("member_count", fields[5])?,
            fitness: parse_opt_f64("fitness", fields[6])?,
            driving_value: parse_opt_f64("driving_value", fields[7])?,
            detail: EventDetail::from_str(fields[8]).ok_or_else(|| bad("detail", fields[8]))?,
        })
    }
}

/// Receives events as the engine produces them.
pub trait EventSink {
    fn record(&mut self, event: &EventRecord) -> io::Result<()>;
}

/// Keeps every event in memory. Fine for small runs and tests.
#[derive(Debug, Default)]
pub struct CollectSink {
    pub events: Vec<EventRecord>,
}

impl EventSink for CollectSink {
    fn record(&mut self, event: &EventRecord) -> io::Result<()> {
        self.events.push(event.clone());
        Ok(())
    }
}

/// Counts events without storing them.
#[derive(Debug, Default)]
pub struct CountSink {
    pub count: u64,
}

impl EventSink for CountSink {
    fn record(&mut self, _event: &EventRecord) -> io::Result<()> {
        self.count += 1;
        Ok(())
    }
}

/// Streams events to a CSV writer; the header goes out on construction.
/// Full-scale runs produce tens of millions of rows, so nothing is retained.
pub struct CsvSink<W: Write> {
    writer: W,
    buf: String,
    pub rows: u64,
}

impl<W: Write> CsvSink<W> {
    pub fn new(mut writer: W) -> io::Result<Self> {
        writer.write_all(CSV_HEADER.as_bytes())?;
        writer.write_all(b"\n")?;
        Ok(Self {
            writer,
            buf: String::with_capacity(128),
            rows: 0,
        })
    }

    pub fn into_inner(self) -> W {
        self.writer
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.writer.flush()
    }
}

impl<W: Write> EventSink for CsvSink<W> {
    fn record(&mut self, event: &EventRecord) -> io::Result<()> {
        self.buf.clear();
        event.write_csv_row(&mut self.buf);
        self.writer.write_all(self.buf.as_bytes())?;
        self.rows += 1;
        Ok(())
    }
}
