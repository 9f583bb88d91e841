//! Result files: JSON summaries and per-replication trace CSVs.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), which is
//! enough to read back the identical `f64`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random_sets::Interval;
use crate::slln::{SllnReport, TracePoint};

pub const TRACE_HEADER: [&str; 5] = ["n", "min_avg", "max_avg", "dist_lo", "dist_hi"];

pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Compact JSON with floats in 17-significant-digit exponent form.
struct SignificantDigits;

impl serde_json::ser::Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SignificantDigits);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Io(io::Error::other(e)))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// One row of a trace file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub n: u64,
    pub min_avg: f64,
    pub max_avg: f64,
    pub dist_lo: f64,
    pub dist_hi: f64,
}

impl TraceRow {
    pub fn new(point: &TracePoint, target: Interval) -> Self {
        TraceRow {
            n: point.n,
            min_avg: point.min_avg,
            max_avg: point.max_avg,
            dist_lo: (point.min_avg - target.lo()).abs(),
            dist_hi: (point.max_avg - target.hi()).abs(),
        }
    }
}

pub fn write_trace_csv<W: Write>(writer: W, trace: &[TracePoint], target: Interval) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    let io_err = |e: csv::Error| Error::Io(io::Error::other(e));
    csv.write_record(TRACE_HEADER).map_err(io_err)?;
    for p in trace {
        let row = TraceRow::new(p, target);
        csv.write_record([
            row.n.to_string(),
            format_f64(row.min_avg),
            format_f64(row.max_avg),
            format_f64(row.dist_lo),
            format_f64(row.dist_hi),
        ])
        .map_err(io_err)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_trace_csv<R: Read>(reader: R) -> Result<Vec<TraceRow>> {
    let mut csv = csv::Reader::from_reader(reader);
    let headers = csv.headers().map_err(|e| Error::Parse(e.to_string()))?;
    if headers.iter().ne(TRACE_HEADER) {
        return Err(Error::Parse(format!("unexpected trace header {headers:?}")));
    }
    csv.deserialize()
        .map(|row| row.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

/// What `simulate` writes as its summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub command: String,
    pub pass: bool,
    pub exact_bridge_ok: bool,
    pub trace_files: Vec<String>,
    pub report: SllnReport,
}

pub fn trace_file_name(replication: u64) -> String {
    format!("trace_r{replication}.csv")
}

/// Writes `summary.json` and one trace CSV per replication into `dir`.
pub fn emit_simulation(
    report: &SllnReport,
    dir: &Path,
) -> Result<(SimulationSummary, Vec<PathBuf>)> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(report.replications.len() + 1);
    let mut names = Vec::with_capacity(report.replications.len());
    for r in &report.replications {
        let name = trace_file_name(r.replication);
        let path = dir.join(&name);
        let file = io::BufWriter::new(fs::File::create(&path)?);
        write_trace_csv(file, &r.trace, report.target)?;
        paths.push(path);
        names.push(name);
    }
    let summary = SimulationSummary {
        command: "simulate".into(),
        pass: report.pass && report.exact_bridge_ok(),
        exact_bridge_ok: report.exact_bridge_ok(),
        trace_files: names,
        report: report.clone(),
    };
    let path = dir.join("summary.json");
    fs::write(&path, to_json(&summary)?)?;
    paths.push(path);
    Ok((summary, paths))
}
