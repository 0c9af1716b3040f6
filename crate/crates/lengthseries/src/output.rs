//! Line-delimited JSON and CSV records for reports and verdicts.

use std::io::Write;

use anyhow::Result;
use lengthseries_core::bqcheck::{BQVerdict, EscapeKind, SearchStats};
use lengthseries_core::identities::{BundleReport, SumReport};
use serde::Serialize;

use crate::input::{pair, Pair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Lines,
    Csv,
}

/// One partial sum; the row shape shared by both formats.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckpointRecord {
    pub series: String,
    pub depth: u64,
    pub partial_re: f64,
    pub partial_im: f64,
    pub residual: f64,
    pub terms_used: usize,
}

pub const CSV_HEADER: [&str; 6] = ["series", "depth", "partial_re", "partial_im", "residual", "terms_used"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRecord {
    pub record: &'static str,
    pub series: String,
    pub target: Pair,
    pub modulus: String,
    /// `+1` or `−1` for sign-ambiguous targets; `+1` otherwise.
    pub sign: i8,
    pub value: Pair,
    pub residual: f64,
    pub terms_used: usize,
    pub max_tail_term: f64,
    pub nonfinite_terms: usize,
    pub tolerance: f64,
    pub met: bool,
}

pub fn checkpoints(r: &SumReport) -> Vec<CheckpointRecord> {
    r.partials
        .iter()
        .map(|c| CheckpointRecord {
            series: r.mode.name().to_string(),
            depth: c.depth,
            partial_re: c.partial.re,
            partial_im: c.partial.im,
            residual: c.residual,
            terms_used: c.terms_used,
        })
        .collect()
}

pub fn summary(r: &SumReport, tol: f64) -> SummaryRecord {
    SummaryRecord {
        record: "summary",
        series: r.mode.name().to_string(),
        target: pair(r.target.value()),
        modulus: r.target.modulus().to_string(),
        sign: r.sign,
        value: pair(r.value),
        residual: r.residual,
        terms_used: r.terms_used,
        max_tail_term: r.max_tail_term,
        nonfinite_terms: r.nonfinite_terms,
        tolerance: tol,
        met: r.meets(tol),
    }
}

/// Writes the checkpoints of several reports. In line mode each report is
/// followed by its summary record; CSV carries checkpoint rows only, under a
/// single header.
pub fn write_reports<W: Write>(out: &mut W, reports: &[&SumReport], format: Format, tol: f64) -> Result<()> {
    match format {
        Format::Lines => {
            for r in reports {
                for c in checkpoints(r) {
                    serde_json::to_writer(&mut *out, &c)?;
                    writeln!(out)?;
                }
                serde_json::to_writer(&mut *out, &summary(r, tol))?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut *out);
            w.write_record(CSV_HEADER)?;
            for r in reports {
                for c in checkpoints(r) {
                    w.serialize(c)?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BundleRecord {
    pub record: &'static str,
    pub l_a: Pair,
    pub cusp_ratio: Option<Pair>,
}

pub fn bundle_record(b: &BundleReport) -> BundleRecord {
    BundleRecord { record: "bundle", l_a: pair(b.l_a.value()), cusp_ratio: b.cusped.as_ref().map(|c| pair(c.lambda)) }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRecord {
    pub circular: String,
    pub kind: &'static str,
    pub moduli: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub record: &'static str,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Pair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Regions `a b c` of each certificate vertex.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subtree: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pruned: Vec<String>,
    pub vertices_explored: usize,
    pub small_regions: usize,
    pub max_depth_reached: usize,
    pub guard_violations: usize,
}

pub fn verdict_record(v: &BQVerdict, stats: &SearchStats) -> VerdictRecord {
    let mut r = VerdictRecord {
        record: "verdict",
        verdict: v.label(),
        slope: None,
        trace: None,
        count: None,
        bound: None,
        reason: None,
        subtree: Vec::new(),
        witnesses: Vec::new(),
        pruned: Vec::new(),
        vertices_explored: stats.vertices,
        small_regions: stats.small_regions,
        max_depth_reached: stats.max_depth_reached,
        guard_violations: stats.guard_violations,
    };
    match v {
        BQVerdict::Accepted(cert) => {
            r.subtree = cert.subtree.vertices().map(|t| t.to_string()).collect();
            r.witnesses = cert
                .witnesses
                .iter()
                .map(|w| WitnessRecord {
                    circular: w.circular.to_string(),
                    kind: match w.kind {
                        EscapeKind::Standard => "standard",
                        EscapeKind::Fan => "fan",
                    },
                    moduli: w.moduli,
                })
                .collect();
            r.pruned = cert.pruned.iter().map(|e| e.to_string()).collect();
        }
        BQVerdict::RejectedInterval { slope, trace } => {
            r.slope = Some(slope.to_string());
            r.trace = Some(pair(*trace));
        }
        BQVerdict::RejectedInfinitelyMany { count, bound } => {
            r.count = Some(*count);
            r.bound = Some(*bound);
        }
        BQVerdict::Undetermined { reason, .. } => r.reason = Some(reason.clone()),
    }
    r
}

pub fn write_json_line<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}
