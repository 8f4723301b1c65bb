//! Report envelopes and deterministic serialization.
//!
//! Every float is written as `{:.16e}` (17 significant digits), so a parsed
//! report reproduces the exact f64 bits and identical configurations produce
//! byte-identical output. Non-finite values serialize as JSON null. CSV uses
//! the same float rendering under a fixed header row.

use serde::Serialize;
use std::io::{self, Write};
use std::path::Path;
use trigdet::{ComparisonEntry, ComparisonReport, Region, RunLengthRow};

/// Echo of the parsed invocation, embedded in every JSON report.
#[derive(Debug, Default, Serialize)]
pub struct ConfigEcho {
    pub subcommand: &'static str,
    pub b: Option<f64>,
    pub a_mag: Option<f64>,
    pub a_phase: Option<f64>,
    pub k_max: Option<usize>,
    pub window: Option<usize>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub pattern: Option<String>,
    pub source: Option<String>,
    pub sweep: Option<bool>,
    pub jobs: Option<usize>,
    pub format: String,
    pub out: Option<String>,
    pub svg: Option<String>,
}

/// Top-level JSON document: configuration echo, tool version, seed (null for
/// deterministic subcommands), subcommand results, and the overall verdict.
#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub config: ConfigEcho,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub results: T,
    pub pass: bool,
}

/// Region listing plus the derived quantities a reader wants next to it.
#[derive(Debug, Serialize)]
pub struct RegionReport<'a> {
    pub area: f64,
    pub breakpoints: &'a [f64],
    pub region: &'a Region,
}

/// Bits drawn by one of the two samplers.
#[derive(Debug, Serialize)]
pub struct SampleReport {
    pub source: String,
    pub n: usize,
    pub bits: String,
}

/// Per-symbol roll-up of a sweep report; the full entry list is dropped and
/// only the worst scored entry is kept.
#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub check: String,
    pub b: f64,
    pub a_mag: f64,
    pub a_phase: f64,
    pub max_len: usize,
    pub tolerance: f64,
    pub max_abs_diff: f64,
    pub pass: bool,
    pub worst: Option<ComparisonEntry>,
}

impl From<&ComparisonReport> for SweepSummary {
    fn from(report: &ComparisonReport) -> Self {
        Self {
            check: report.check.clone(),
            b: report.b,
            a_mag: report.a_mag,
            a_phase: report.a_phase,
            max_len: report.max_len,
            tolerance: report.tolerance,
            max_abs_diff: report.max_abs_diff,
            pass: report.pass,
            worst: report.worst_entry().cloned(),
        }
    }
}

struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes one JSON document, newline-terminated.
pub fn to_json_line<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision);
    value.serialize(&mut ser).expect("reports serialize");
    out.push(b'\n');
    out
}

/// Writes bytes to the given path, or to stdout when no path is given.
pub fn write_output(bytes: &[u8], out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| format!("cannot write stdout: {e}")),
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_bytes(build: impl FnOnce(&mut csv::Writer<Vec<u8>>)) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    build(&mut w);
    w.into_inner().expect("in-memory csv flushes")
}

/// Run-probability table as CSV.
pub fn probs_csv(rows: &[RunLengthRow]) -> Vec<u8> {
    csv_bytes(|w| {
        w.write_record(["k", "det", "recurrence", "closed", "factor"])
            .expect("in-memory csv");
        for r in rows {
            w.write_record([
                r.k.to_string(),
                fmt(r.det),
                fmt(r.recurrence),
                fmt(r.closed),
                fmt(r.factor),
            ])
            .expect("in-memory csv");
        }
    })
}

/// Per-pattern rows of a single comparison report as CSV.
pub fn entries_csv(report: &ComparisonReport) -> Vec<u8> {
    csv_bytes(|w| {
        w.write_record(["check", "label", "lhs", "rhs", "abs_diff", "scored"])
            .expect("in-memory csv");
        for e in &report.entries {
            w.write_record([
                report.check.clone(),
                e.label.clone(),
                fmt(e.lhs),
                fmt(e.rhs),
                fmt(e.abs_diff),
                e.scored.to_string(),
            ])
            .expect("in-memory csv");
        }
    })
}

/// Per-symbol summary rows of a sweep as CSV.
pub fn sweep_csv(summaries: &[SweepSummary]) -> Vec<u8> {
    csv_bytes(|w| {
        w.write_record([
            "check",
            "b",
            "a_mag",
            "a_phase",
            "max_len",
            "tolerance",
            "max_abs_diff",
            "pass",
        ])
        .expect("in-memory csv");
        for s in summaries {
            w.write_record([
                s.check.clone(),
                fmt(s.b),
                fmt(s.a_mag),
                fmt(s.a_phase),
                s.max_len.to_string(),
                fmt(s.tolerance),
                fmt(s.max_abs_diff),
                s.pass.to_string(),
            ])
            .expect("in-memory csv");
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Probe {
        x: f64,
        y: f64,
    }

    #[test]
    fn floats_round_trip_to_the_same_bits() {
        let probe = Probe {
            x: 0.1 + 0.2,
            y: 1.0 / 3.0,
        };
        let bytes = to_json_line(&probe);
        let parsed: serde_json::Value = serde_json::from_slice(&bytes).expect("valid json");
        assert_eq!(
            parsed["x"].as_f64().expect("x is a number").to_bits(),
            probe.x.to_bits(),
            "17 significant digits must reproduce the exact bits"
        );
        assert_eq!(
            parsed["y"].as_f64().expect("y is a number").to_bits(),
            probe.y.to_bits()
        );
    }

    #[test]
    fn serialization_is_byte_deterministic() {
        let probe = Probe {
            x: 2.0_f64.sqrt(),
            y: -1e-300,
        };
        assert_eq!(to_json_line(&probe), to_json_line(&probe));
    }

    #[test]
    fn non_finite_floats_become_null() {
        let probe = Probe {
            x: f64::NAN,
            y: f64::INFINITY,
        };
        let bytes = to_json_line(&probe);
        let parsed: serde_json::Value = serde_json::from_slice(&bytes).expect("valid json");
        assert!(parsed["x"].is_null(), "NaN must serialize as null");
        assert!(parsed["y"].is_null(), "infinity must serialize as null");
    }

    #[test]
    fn probs_csv_header_is_fixed() {
        let rows = vec![RunLengthRow {
            k: 0,
            det: 0.4,
            recurrence: 0.4,
            closed: 0.4,
            factor: 0.4,
        }];
        let bytes = probs_csv(&rows);
        let text = String::from_utf8(bytes).expect("csv is utf-8");
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("k,det,recurrence,closed,factor"));
        let row = lines.next().expect("one data row");
        assert!(
            row.starts_with("0,4.0000000000000002e-1"),
            "row renders floats at full precision: {row}"
        );
    }
}
