//! Plain CSV tables with shortest round-trip float formatting.

use std::path::Path;

use memsim_core::experiments::{DaSweepPoint, LearningCurvePoint};
use memsim_core::signal::Trace;

use crate::error::{CliError, Result};

/// Shortest decimal string that parses back to exactly `v`.
pub fn format_f64(v: f64) -> String {
    format!("{v:?}")
}

/// A named set of equal-length columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if header.len() != columns.len() || header.is_empty() {
            return Err(CliError::Usage("table needs one header per column".into()));
        }
        let n = columns[0].len();
        if columns.iter().any(|c| c.len() != n) {
            return Err(CliError::Usage("table columns differ in length".into()));
        }
        Ok(Self { header, columns })
    }

    pub fn rows(&self) -> usize {
        self.columns[0].len()
    }

    /// `time_s` followed by one column per trace, every `stride`-th sample.
    pub fn from_traces(traces: &[(&str, &Trace)], stride: usize) -> Result<Self> {
        let Some((_, first)) = traces.first() else {
            return Err(CliError::Usage("no traces to write".into()));
        };
        let grid = *first.grid();
        if traces.iter().any(|(_, t)| *t.grid() != grid) {
            return Err(CliError::Usage("traces must share one grid".into()));
        }
        let stride = stride.max(1);
        let mut header = vec!["time_s".to_string()];
        let mut columns = vec![(0..grid.n_steps())
            .step_by(stride)
            .map(|k| grid.time(k))
            .collect()];
        for (name, t) in traces {
            header.push(name.to_string());
            columns.push(t.values().iter().step_by(stride).copied().collect());
        }
        Self::new(header, columns)
    }

    pub fn from_curve(points: &[LearningCurvePoint]) -> Self {
        Self {
            header: vec!["delta_t_s".into(), "dw_v".into()],
            columns: vec![
                points.iter().map(|p| p.delta_t.seconds()).collect(),
                points.iter().map(|p| p.dw).collect(),
            ],
        }
    }

    pub fn from_da_sweep(points: &[DaSweepPoint]) -> Self {
        Self {
            header: vec!["wiper".into(), "peak_v".into()],
            columns: vec![
                points.iter().map(|p| p.wiper).collect(),
                points.iter().map(|p| p.peak).collect(),
            ],
        }
    }

    pub fn to_csv_string(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let written = w.write_record(&self.header).and_then(|()| {
            (0..self.rows())
                .try_for_each(|r| w.write_record(self.columns.iter().map(|c| format_f64(c[r]))))
        });
        written.expect("writing to memory cannot fail");
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .from_reader(text.as_bytes());
        let bad = |e: csv::Error| CliError::Config(format!("csv: {e}"));
        let header: Vec<String> = rdr
            .headers()
            .map_err(bad)?
            .iter()
            .map(str::to_string)
            .collect();
        if header.is_empty() {
            return Err(CliError::Config("empty csv".into()));
        }
        let mut columns = vec![Vec::new(); header.len()];
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(bad)?;
            for (col, cell) in columns.iter_mut().zip(rec.iter()) {
                col.push(cell.parse().map_err(|_| {
                    CliError::Config(format!("csv row {}: bad number '{cell}'", i + 2))
                })?);
            }
        }
        Self::new(header, columns)
    }
}

pub fn write_csv(table: &Table, path: &Path) -> Result<()> {
    std::fs::write(path, table.to_csv_string()).map_err(|e| CliError::io(path, e))
}
