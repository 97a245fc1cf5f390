//! Verification ledgers: one entry per checked identity, with the formula it
//! checks and a witness on failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::models::PqcModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub id: String,
    /// The formula being checked.
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Entry {
    pub fn from_result(id: &str, anchor: &str, res: Result<(), String>) -> Self {
        let (status, witness) = match res {
            Ok(()) => (Status::Pass, None),
            Err(w) => (Status::Fail, Some(w)),
        };
        Entry {
            id: id.into(),
            anchor: anchor.into(),
            status,
            witness,
        }
    }

    pub fn skipped(id: &str, anchor: &str, reason: &str) -> Self {
        Entry {
            id: id.into(),
            anchor: anchor.into(),
            status: Status::Skipped,
            witness: Some(reason.into()),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ledger {
    pub suite: String,
    pub entries: Vec<Entry>,
}

impl Ledger {
    pub fn new(suite: &str) -> Self {
        Ledger {
            suite: suite.into(),
            entries: Vec::new(),
        }
    }

    pub fn check(&mut self, id: &str, anchor: &str, res: Result<(), String>) -> bool {
        let e = Entry::from_result(id, anchor, res);
        let ok = !e.failed();
        self.entries.push(e);
        ok
    }

    pub fn skip(&mut self, id: &str, anchor: &str, reason: &str) {
        self.entries.push(Entry::skipped(id, anchor, reason));
    }

    pub fn extend(&mut self, other: Ledger) {
        self.entries.extend(other.entries);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| !e.failed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.failed())
    }

    pub fn get(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelSummary {
    pub name: String,
    pub n: usize,
    pub dim: usize,
    pub metadata: BTreeMap<String, String>,
}

impl ModelSummary {
    pub fn of(m: &PqcModel) -> Self {
        ModelSummary {
            name: m.name.clone(),
            n: m.n,
            dim: m.dim(),
            metadata: m.metadata.clone(),
        }
    }
}

/// Deterministic report. Wall-clock timing is printed by the CLI on stderr
/// and never stored here, so JSON output is byte-identical across runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub engine_version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Free-form results such as a classification label.
    pub results: BTreeMap<String, String>,
    pub ledgers: Vec<Ledger>,
    pub status: Status,
}

pub const REPORT_SCHEMA: u32 = 1;

impl Report {
    pub fn new(command: &str, model: Option<&PqcModel>) -> Self {
        Report {
            schema: REPORT_SCHEMA,
            engine_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            model: model.map(ModelSummary::of),
            seed: None,
            results: BTreeMap::new(),
            ledgers: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn push(&mut self, ledger: Ledger) {
        self.ledgers.push(ledger);
        self.refresh_status();
    }

    pub fn refresh_status(&mut self) {
        self.status = if self.ledgers.iter().all(Ledger::passed) {
            Status::Pass
        } else {
            Status::Fail
        };
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(m) = &self.model {
            let _ = writeln!(out, "model: {} (n = {}, dim = {})", m.name, m.n, m.dim);
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        for (k, v) in &self.results {
            let _ = writeln!(out, "{k}: {v}");
        }
        for l in &self.ledgers {
            let _ = writeln!(out, "[{}]", l.suite);
            for e in &l.entries {
                let _ = write!(out, "  {:<7} {:<28} {}", e.status.as_str(), e.id, e.anchor);
                if let Some(w) = &e.witness {
                    let _ = write!(out, "\n          -> {w}");
                }
                out.push('\n');
            }
        }
        let _ = writeln!(out, "status: {}", self.status.as_str());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_entries() {
        let mut r = Report::new("t", None);
        let mut l = Ledger::new("s");
        l.check("a", "x = x", Ok(()));
        r.push(l.clone());
        assert!(r.passed());
        l.check("b", "y = 0", Err("y = 1".into()));
        r.push(l);
        assert!(!r.passed());
        assert!(r.to_text().contains("FAIL"));
        assert!(r.to_json().contains("\"fail\""));
    }
}
