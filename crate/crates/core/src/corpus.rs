//! The bundled corpus of example networks with recorded verdicts.

use serde::Deserialize;

use crate::engine::{run_algorithm, run_ck, singleton_criterion};
use crate::exec::Execution;
use crate::network::{parse_network, Mode, Network};
use crate::oracle::kalman_check;
use crate::report::set_ids;

pub struct CorpusEntry {
    pub name: &'static str,
    pub network: &'static str,
    pub expected: &'static str,
}

macro_rules! entry {
    ($name:literal) => {
        CorpusEntry {
            name: $name,
            network: include_str!(concat!("../corpus/", $name, ".json")),
            expected: include_str!(concat!("../corpus/", $name, ".expected.json")),
        }
    };
}

pub static CORPUS: &[CorpusEntry] = &[
    entry!("anharmon_k1"),
    entry!("anharmon_k2"),
    entry!("anharmon_k3"),
    entry!("chain3"),
    entry!("chain5"),
    entry!("chain8"),
    entry!("constant_force_different"),
    entry!("constant_force_same"),
    entry!("cylinder"),
    entry!("grid"),
    entry!("mirrored"),
    entry!("pair"),
    entry!("path4_masses"),
    entry!("refinement"),
    entry!("star"),
    entry!("star3"),
    entry!("star_translates"),
    entry!("tapered"),
    entry!("triangle"),
    entry!("triangular_strip"),
    entry!("unmirrored"),
];

/// Recorded outcome for a corpus network. Anharmonic entries list the
/// verdict of each method; harmonic ones the Kalman answer.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub note: String,
    pub mode: String,
    #[serde(default)]
    pub algorithm: Option<String>,
    #[serde(default)]
    pub ck: Option<String>,
    #[serde(default)]
    pub singleton: Option<bool>,
    /// Blocking groups reported by the refinement algorithm.
    #[serde(default)]
    pub blocking: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub kalman: Option<bool>,
}

impl CorpusEntry {
    pub fn load(&self) -> Network {
        parse_network(self.network).unwrap_or_else(|e| panic!("corpus {}: {e}", self.name))
    }

    pub fn expected(&self) -> Expected {
        serde_json::from_str(self.expected).unwrap_or_else(|e| panic!("corpus {}: {e}", self.name))
    }
}

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusOutcome {
    pub name: &'static str,
    pub note: String,
    /// One line per disagreement with the recorded expectation.
    pub mismatches: Vec<String>,
}

impl CorpusOutcome {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn compare<T: PartialEq + std::fmt::Debug>(out: &mut Vec<String>, what: &str, expected: &Option<T>, got: T) {
    if let Some(e) = expected {
        if *e != got {
            out.push(format!("{what}: expected {e:?}, got {got:?}"));
        }
    }
}

/// Runs every check recorded for one entry.
pub fn check_entry(entry: &'static CorpusEntry) -> CorpusOutcome {
    let expected = entry.expected();
    let mut mismatches = Vec::new();
    let outcome = |mismatches| CorpusOutcome {
        name: entry.name,
        note: expected.note.clone(),
        mismatches,
    };
    let net = match parse_network(entry.network) {
        Ok(net) => net,
        Err(e) => return outcome(vec![format!("parse: {e}")]),
    };
    let mode = match net.mode() {
        Mode::Anharmonic => "anharmonic",
        Mode::Harmonic => "harmonic",
        Mode::Unsupported(_) => "unsupported",
    };
    compare(&mut mismatches, "mode", &Some(expected.mode.clone()), mode.to_string());
    if expected.algorithm.is_some() || expected.blocking.is_some() {
        match run_algorithm(&net) {
            Ok(a) => {
                compare(&mut mismatches, "algorithm", &expected.algorithm, a.verdict.status.name().to_string());
                let blocking: Vec<Vec<String>> = a.blocking.iter().map(|s| set_ids(&net, s)).collect();
                compare(&mut mismatches, "blocking", &expected.blocking, blocking);
            }
            Err(e) => mismatches.push(format!("algorithm: {e}")),
        }
    }
    if expected.ck.is_some() {
        match run_ck(&net) {
            Ok(a) => compare(&mut mismatches, "ck", &expected.ck, a.verdict.status.name().to_string()),
            Err(e) => mismatches.push(format!("ck: {e}")),
        }
    }
    if expected.singleton.is_some() {
        match singleton_criterion(&net) {
            Ok(s) => compare(&mut mismatches, "singleton", &expected.singleton, s),
            Err(e) => mismatches.push(format!("singleton: {e}")),
        }
    }
    if expected.kalman.is_some() {
        match kalman_check(&net) {
            Ok(k) => compare(&mut mismatches, "kalman", &expected.kalman, k),
            Err(e) => mismatches.push(format!("kalman: {e}")),
        }
    }
    outcome(mismatches)
}

pub fn run_corpus(exec: Execution) -> Vec<CorpusOutcome> {
    exec.map(CORPUS.iter().collect(), check_entry)
}
