use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::Cost;
use crate::graph::Vertex;

pub const CSV_HEADER: [&str; 8] = ["instance", "n", "m", "k", "opt", "time_ms", "labels", "config"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?}, expected json or csv")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub bound: String,
    pub prune: String,
    pub root: String,
}

impl std::fmt::Display for RunSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "bound={};prune={};root={}", self.bound, self.prune, self.root)
    }
}

/// Result of one solve. Edge endpoints are 1-based, as in STP files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub opt: Cost,
    pub edges: Vec<[Vertex; 2]>,
    pub config: RunSummary,
    pub time_ms: f64,
    /// Peak number of stored labels.
    pub labels: u64,
    pub permanent_labels: u64,
}

impl SolutionRecord {
    /// Edges as 0-based vertex pairs.
    pub fn zero_based_edges(&self) -> Option<Vec<(Vertex, Vertex)>> {
        self.edges
            .iter()
            .map(|&[u, v]| Some((u.checked_sub(1)?, v.checked_sub(1)?)))
            .collect()
    }
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("malformed solution JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
}

pub fn write_solution(record: &SolutionRecord, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(record).expect("records always serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = CsvTable::new();
            w.push(record, None);
            w.finish()
        }
    }
}

pub fn parse_solution_json(text: &str) -> Result<SolutionRecord, RecordError> {
    Ok(serde_json::from_str(text)?)
}

/// CSV table with the fixed header, optionally followed by an `error` column.
pub struct CsvTable {
    writer: csv::Writer<Vec<u8>>,
    with_error: bool,
    wrote_header: bool,
}

impl CsvTable {
    pub fn new() -> Self {
        Self::build(false)
    }

    pub fn with_error_column() -> Self {
        Self::build(true)
    }

    fn build(with_error: bool) -> Self {
        CsvTable {
            writer: csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new()),
            with_error,
            wrote_header: false,
        }
    }

    fn header(&mut self) {
        if self.wrote_header {
            return;
        }
        self.wrote_header = true;
        let mut row: Vec<&str> = CSV_HEADER.to_vec();
        if self.with_error {
            row.push("error");
        }
        self.writer.write_record(row).expect("in-memory CSV write");
    }

    pub fn push(&mut self, record: &SolutionRecord, error: Option<&str>) {
        self.header();
        let mut row = vec![
            record.instance.clone(),
            record.n.to_string(),
            record.m.to_string(),
            record.k.to_string(),
            record.opt.to_string(),
            format!("{:.3}", record.time_ms),
            record.labels.to_string(),
            record.config.to_string(),
        ];
        if self.with_error {
            row.push(error.unwrap_or_default().to_string());
        }
        self.writer.write_record(row).expect("in-memory CSV write");
    }

    /// A row for an instance that produced no solution.
    pub fn push_failure(&mut self, instance: &str, config: &RunSummary, error: &str) {
        self.header();
        let mut row = vec![
            instance.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            config.to_string(),
        ];
        if self.with_error {
            row.push(error.to_string());
        }
        self.writer.write_record(row).expect("in-memory CSV write");
    }

    pub fn finish(mut self) -> String {
        self.header();
        let bytes = self.writer.into_inner().expect("in-memory CSV flush");
        String::from_utf8(bytes).expect("CSV fields are UTF-8")
    }
}

impl Default for CsvTable {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> SolutionRecord {
        SolutionRecord {
            instance: "b01".into(),
            n: 50,
            m: 63,
            k: 9,
            opt: 82,
            edges: vec![[1, 2], [2, 7]],
            config: RunSummary {
                bound: "max(jterm:2,onetree)".into(),
                prune: "full".into(),
                root: "last".into(),
            },
            time_ms: 12.25,
            labels: 1234,
            permanent_labels: 456,
        }
    }

    #[test]
    fn json_round_trip() {
        let r = record();
        let text = write_solution(&r, Format::Json);
        assert_eq!(parse_solution_json(&text).unwrap(), r);
        let first_keys: Vec<&str> = text
            .lines()
            .skip(1)
            .take(5)
            .map(|l| l.trim().split('"').nth(1).unwrap())
            .collect();
        assert_eq!(first_keys, ["instance", "n", "m", "k", "opt"]);
    }

    #[test]
    fn empty_tree_record() {
        let mut r = record();
        r.opt = 0;
        r.edges.clear();
        r.k = 1;
        let back = parse_solution_json(&write_solution(&r, Format::Json)).unwrap();
        assert_eq!(back.zero_based_edges(), Some(vec![]));
        assert_eq!(back, r);
    }

    #[test]
    fn csv_header_and_quoting() {
        let text = write_solution(&record(), Format::Csv);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("instance,n,m,k,opt,time_ms,labels,config"));
        assert_eq!(
            lines.next(),
            Some("b01,50,63,9,82,12.250,1234,\"bound=max(jterm:2,onetree);prune=full;root=last\"")
        );
        assert_eq!(lines.next(), None);
        assert_eq!(CsvTable::new().finish(), "instance,n,m,k,opt,time_ms,labels,config\n");
    }

    #[test]
    fn error_column() {
        let mut t = CsvTable::with_error_column();
        t.push(&record(), None);
        t.push_failure("x", &record().config, "time limit");
        let text = t.finish();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].ends_with(",config,error"));
        assert!(lines[1].ends_with(','));
        assert!(lines[2].starts_with("x,,,,,,,") && lines[2].ends_with(",time limit"));
    }
}
