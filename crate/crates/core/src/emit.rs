//! Output files: the sweep trace as CSV or JSON and the event report as JSON.
//! Numbers are written in shortest round-trip form, so identical tables give
//! byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::EventReport;
use crate::sweep::{SweepRow, SweepTable};

pub const TRACE_HEADER: [&str; 5] = ["gamma0_t", "c0", "e_cc", "e_rr", "e_gme"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format {other:?} (expected csv or json)"))),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_trace_csv<W: Write>(table: &SweepTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for r in &table.rows {
        w.write_record([r.gamma0_t.to_string(), r.c0.to_string(), cell(r.e_cc), cell(r.e_rr), cell(r.e_gme)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_json<W: Write>(table: &SweepTable, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, table)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_events_json<W: Write>(report: &EventReport, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn parse_cell(s: &str, line: usize, column: &str) -> Result<Option<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| Error::Config(format!("trace line {line}: bad {column} value {s:?}")))
}

/// Reads a trace written by [`write_trace_csv`].
pub fn read_trace_csv<R: Read>(input: R) -> Result<SweepTable> {
    let mut rd = csv::Reader::from_reader(input);
    let header: Vec<String> = rd.headers()?.iter().map(str::to_owned).collect();
    if header != TRACE_HEADER {
        return Err(Error::Config(format!("unexpected trace header {header:?}")));
    }
    let mut table = SweepTable::default();
    for (k, rec) in rd.records().enumerate() {
        let rec = rec?;
        let line = k + 2;
        let get = |i: usize| parse_cell(rec.get(i).unwrap_or(""), line, TRACE_HEADER[i]);
        let required = |i: usize| {
            get(i)?.ok_or_else(|| Error::Config(format!("trace line {line}: missing {}", TRACE_HEADER[i])))
        };
        table.rows.push(SweepRow {
            gamma0_t: required(0)?,
            c0: required(1)?,
            e_cc: get(2)?,
            e_rr: get(3)?,
            e_gme: get(4)?,
            margin_cc: None,
            margin_rr: None,
        });
    }
    Ok(table)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes `trace.<ext>` and `events.json` into `dir`, creating it if
/// needed. Returns the paths written.
pub fn emit(table: &SweepTable, report: &EventReport, format: Format, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let trace = dir.join(format!("trace.{}", format.extension()));
    let mut w = create(&trace)?;
    match format {
        Format::Csv => write_trace_csv(table, &mut w)?,
        Format::Json => write_trace_json(table, &mut w)?,
    }
    w.flush()?;
    let events = dir.join("events.json");
    let mut w = create(&events)?;
    write_events_json(report, &mut w)?;
    w.flush()?;
    Ok(vec![trace, events])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepTable {
        SweepTable {
            rows: vec![
                SweepRow { gamma0_t: 0.0, c0: 1.0, e_cc: Some(0.5), e_rr: Some(0.0), e_gme: None, margin_cc: None, margin_rr: None },
                SweepRow { gamma0_t: 0.1, c0: 0.95, e_cc: None, e_rr: Some(1e-9), e_gme: Some(0.125), margin_cc: None, margin_rr: None },
            ],
            diagnostics: vec![],
        }
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_trace_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "gamma0_t,c0,e_cc,e_rr,e_gme\n0,1,0.5,0,\n0.1,0.95,,0.000000001,0.125\n");
        let back = read_trace_csv(text.as_bytes()).unwrap();
        assert_eq!(back, sample());
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(read_trace_csv("t,c0\n0,1\n".as_bytes()).is_err());
        assert!(read_trace_csv("gamma0_t,c0,e_cc,e_rr,e_gme\n0,x,,,\n".as_bytes()).is_err());
    }

    #[test]
    fn emit_writes_both_files() {
        let dir = tempfile::tempdir().unwrap();
        let paths = emit(&sample(), &EventReport::default(), Format::Csv, dir.path()).unwrap();
        assert!(paths.iter().all(|p| p.exists()));
        let ev: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&paths[1]).unwrap()).unwrap();
        for key in ["esd_time", "esb_time", "dead_window", "freeze_windows", "revival_times"] {
            assert!(ev.get(key).is_some(), "{key}");
        }
    }
}
