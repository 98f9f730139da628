//! Report documents for analyses and oracle runs.

use std::fmt::Write as _;

use serde::Serialize;

use crate::engine::{Analysis, TraceStep};
use crate::network::Network;
use crate::oracle::{CertStatus, KalmanReport};
use crate::vset::VertexSet;

/// Compactness of the energy level sets is assumed, never verified.
pub const UNCHECKED: &[&str] = &["compact level sets"];

/// Ids of a vertex set, ascending.
pub fn set_ids(net: &Network, set: &VertexSet) -> Vec<String> {
    let mut ids: Vec<String> = set.iter().map(|i| net.id(i).to_string()).collect();
    ids.sort();
    ids
}

#[derive(Debug, Serialize)]
pub struct StepDoc {
    pub rule: &'static str,
    pub controller: Option<String>,
    pub operands: Vec<Vec<String>>,
    pub produced: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct AnalysisDoc {
    pub verdict: &'static str,
    pub method: &'static str,
    pub controlled: Vec<String>,
    pub blocking: Vec<Vec<String>>,
    /// Hypotheses on the Hamiltonian that the analysis takes for granted.
    pub unchecked: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<StepDoc>>,
}

pub fn step_doc(net: &Network, step: &TraceStep) -> StepDoc {
    StepDoc {
        rule: step.rule.name(),
        controller: step.controller.map(|c| net.id(c).to_string()),
        operands: step.operands.iter().map(|s| set_ids(net, s)).collect(),
        produced: set_ids(net, &step.produced),
    }
}

pub fn analysis_doc(net: &Network, analysis: &Analysis, with_trace: bool) -> AnalysisDoc {
    AnalysisDoc {
        verdict: analysis.verdict.status.name(),
        method: analysis.verdict.method.name(),
        controlled: set_ids(net, &analysis.verdict.controlled),
        blocking: analysis.blocking.iter().map(|s| set_ids(net, s)).collect(),
        unchecked: UNCHECKED.to_vec(),
        trace: with_trace.then(|| analysis.trace.iter().map(|s| step_doc(net, s)).collect()),
    }
}

fn braces(ids: &[String]) -> String {
    format!("{{{}}}", ids.join(", "))
}

pub fn analysis_text(net: &Network, analysis: &Analysis, with_trace: bool) -> String {
    let doc = analysis_doc(net, analysis, with_trace);
    let mut out = String::new();
    writeln!(out, "verdict: {} (method: {})", doc.verdict, doc.method).unwrap();
    writeln!(out, "controlled: {}", braces(&doc.controlled)).unwrap();
    if !doc.blocking.is_empty() {
        let groups: Vec<String> = doc.blocking.iter().map(|b| braces(b)).collect();
        writeln!(out, "blocking: {}", groups.join(" ")).unwrap();
    }
    writeln!(out, "unchecked: {}", doc.unchecked.join(", ")).unwrap();
    for (i, step) in doc.trace.iter().flatten().enumerate() {
        let ctl = step
            .controller
            .as_ref()
            .map(|c| format!(" at {c}"))
            .unwrap_or_default();
        let ops: Vec<String> = step.operands.iter().map(|o| braces(o)).collect();
        let ops = if ops.is_empty() {
            String::new()
        } else {
            format!(" from {}", ops.join(", "))
        };
        writeln!(out, "{:>4}. {}{ctl}{ops} -> {}", i + 1, step.rule, braces(&step.produced)).unwrap();
    }
    out
}

pub fn certificate_text(net: &Network, cert: &CertStatus) -> String {
    let space = crate::oracle::PhaseSpace::new(net);
    let mut out = String::new();
    let status = match cert.status {
        crate::oracle::Certification::Certified => "certified",
        crate::oracle::Certification::Inconclusive => "inconclusive",
    };
    writeln!(out, "status: {status}").unwrap();
    writeln!(out, "dimension: {}", cert.dim).unwrap();
    writeln!(
        out,
        "fields: {} kept, {} evaluated, {} generations",
        cert.fields.len(),
        cert.fields_used,
        cert.generations
    )
    .unwrap();
    if let Some(seed) = cert.seed {
        writeln!(out, "seed: {seed}").unwrap();
    }
    for (x, rank) in cert.points.iter().zip(&cert.ranks) {
        let coords: Vec<String> = (0..space.dim())
            .map(|i| format!("{}={}", space.name(i), crate::rational::format_rational(&x[i])))
            .collect();
        writeln!(out, "rank {rank} at {}", coords.join(" ")).unwrap();
    }
    out
}

#[derive(Debug, Serialize)]
pub struct KalmanDoc {
    pub controllable: bool,
    pub rank: usize,
    pub dim: usize,
    pub deficit: usize,
}

pub fn kalman_doc(report: &KalmanReport) -> KalmanDoc {
    KalmanDoc {
        controllable: report.controllable(),
        rank: report.rank,
        dim: report.dim,
        deficit: report.dim - report.rank,
    }
}

pub fn kalman_text(report: &KalmanReport) -> String {
    format!(
        "kalman: {} (rank {} of {}, deficit {})\n",
        if report.controllable() { "controllable" } else { "not controllable" },
        report.rank,
        report.dim,
        report.dim - report.rank
    )
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serializes");
    out.push('\n');
    out
}
