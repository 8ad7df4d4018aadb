//! Cleaning of real-world membership exports: `user_id`/`group_id` tables
//! in CSV or TSV form, turned into the same developers-per-project histogram
//! the simulator produces.
//!
//! Parsing is forgiving about rows (malformed ones are skipped and counted)
//! but strict about shape: the required columns must exist or the whole
//! parse fails.

use std::collections::HashSet;
use std::io::{self, BufRead, BufReader, Read, Write};

use crate::analytics::Histogram;

/// One membership fact: a user belongs to a group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MembershipRecord {
    pub user_id: String,
    pub group_id: String,
}

/// A row the parser refused, with the 1-based line number in the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedRow {
    pub line: u64,
    pub reason: String,
}

/// Parse output: surviving records in input order (exact duplicates
/// removed), plus the rows that were skipped.
#[derive(Debug, Default)]
pub struct ParseReport {
    pub records: Vec<MembershipRecord>,
    pub skipped: Vec<SkippedRow>,
    /// Exact duplicate pairs dropped silently.
    pub duplicates: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("input is empty; expected a header row")]
    EmptyInput,
    #[error("missing required column {0:?}")]
    MissingColumn(&'static str),
    #[error("read failed: {0}")]
    Io(#[from] io::Error),
}

/// Parses a membership export. The delimiter is sniffed from the header
/// row: tab-separated if the header contains a tab, comma-separated
/// otherwise. Unknown columns are carried along and ignored.
pub fn parse_user_group<R: Read>(input: R) -> Result<ParseReport, IngestError> {
    let mut reader = BufReader::new(input);
    let mut header = String::new();
    if reader.read_line(&mut header)? == 0 {
        return Err(IngestError::EmptyInput);
    }
    let header = header.trim_end_matches(['\n', '\r']);
    let header = header.strip_prefix('\u{feff}').unwrap_or(header);
    let delimiter = if header.contains('\t') { b'\t' } else { b',' };
    let columns: Vec<&str> = header
        .split(delimiter as char)
        .map(|c| c.trim())
        .collect();
    let user_col = columns
        .iter()
        .position(|&c| c == "user_id")
        .ok_or(IngestError::MissingColumn("user_id"))?;
    let group_col = columns
        .iter()
        .position(|&c| c == "group_id")
        .ok_or(IngestError::MissingColumn("group_id"))?;

    let mut csv_reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);

    let mut report = ParseReport::default();
    let mut seen: HashSet<(String, String)> = HashSet::new();
    for (row_idx, result) in csv_reader.records().enumerate() {
        // The header was consumed before the csv reader saw the stream.
        let line = row_idx as u64 + 2;
        let record = match result {
            Ok(r) => r,
            Err(e) => {
                report.skipped.push(SkippedRow {
                    line,
                    reason: format!("unparsable row: {e}"),
                });
                continue;
            }
        };
        if record.len() == 1 && record[0].trim().is_empty() {
            // Blank line; not worth reporting.
            continue;
        }
        let field = |idx: usize, name: &str| -> Result<String, String> {
            match record.get(idx) {
                Some(raw) => {
                    let trimmed = raw.trim();
                    if trimmed.is_empty() {
                        Err(format!("empty {name}"))
                    } else {
                        Ok(trimmed.to_string())
                    }
                }
                None => Err(format!("row too short, no {name}")),
            }
        };
        let user_id = match field(user_col, "user_id") {
            Ok(v) => v,
            Err(reason) => {
                report.skipped.push(SkippedRow { line, reason });
                continue;
            }
        };
        let group_id = match field(group_col, "group_id") {
            Ok(v) => v,
            Err(reason) => {
                report.skipped.push(SkippedRow { line, reason });
                continue;
            }
        };
        if seen.insert((user_id.clone(), group_id.clone())) {
            report.records.push(MembershipRecord { user_id, group_id });
        } else {
            report.duplicates += 1;
        }
    }
    Ok(report)
}

/// Developers-per-group histogram of a cleaned record set. Duplicate pairs
/// are collapsed defensively even though the parser already drops them.
pub fn empirical_histogram(records: &[MembershipRecord]) -> Histogram {
    let mut unique: HashSet<(&str, &str)> = HashSet::with_capacity(records.len());
    let mut per_group: std::collections::BTreeMap<&str, u32> = std::collections::BTreeMap::new();
    for record in records {
        if unique.insert((record.user_id.as_str(), record.group_id.as_str())) {
            *per_group.entry(record.group_id.as_str()).or_insert(0) += 1;
        }
    }
    let mut h = Histogram::new();
    for (_, developers) in per_group {
        h.increment(developers);
    }
    h
}

/// Re-emits cleaned records as comma-separated `user_id,group_id` rows, the
/// canonical form whose re-parse is a fixed point.
pub fn write_records_csv<W: Write>(records: &[MembershipRecord], mut w: W) -> io::Result<()> {
    writeln!(w, "user_id,group_id")?;
    for record in records {
        writeln!(w, "{},{}", record.user_id, record.group_id)?;
    }
    Ok(())
}
