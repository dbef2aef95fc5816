//! The JSON report of a run. Field order and map ordering are fixed, so
//! equal inputs give byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;
use svlab_core::certificates::{NormKind, Verdict};
use svlab_core::inference::{GromovReport, ProvenanceNode, Row};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    AssertionFailed,
    Inconsistent,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inconsistency: Option<String>,
    pub table: Vec<TableEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub complexes: Vec<PlainComplex>,
    pub ledger: Vec<LedgerEntry>,
    pub queries: Vec<QueryEntry>,
    pub assertions: Vec<AssertionEntry>,
    pub gromov: Vec<GromovReport>,
    pub cobordisms: Vec<CobordismEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableEntry {
    #[serde(flatten)]
    pub row: Row,
    /// Rule ids behind each known entry of the row.
    pub provenance: BTreeMap<String, Vec<String>>,
}

/// A construction result that is not an oriented manifold.
#[derive(Clone, Debug, Serialize)]
pub struct PlainComplex {
    pub name: String,
    pub dim: usize,
    pub facets: usize,
    pub chi: i64,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerEntry {
    pub index: usize,
    pub line: usize,
    pub manifold: String,
    pub kind: NormKind,
    pub bound: String,
    pub witness: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct QueryEntry {
    pub line: usize,
    pub target: String,
    pub invariant: String,
    pub answer: String,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub detail: serde_json::Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<ProvenanceNode>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssertionEntry {
    pub line: usize,
    pub statement: String,
    pub passed: bool,
    pub actual: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<ProvenanceNode>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CobordismEntry {
    pub name: String,
    pub body: String,
    pub source: String,
    pub target: String,
    pub amenable: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::AssertionFailed => 1,
            Status::Inconsistent => 2,
        }
    }

    /// Plain-text summary. With `explain`, every query and assertion is
    /// followed by its derivation.
    pub fn render(&self, explain: bool) -> String {
        let mut out = String::new();
        let tree = |out: &mut String, p: &[ProvenanceNode]| {
            for n in p {
                for l in n.render().lines() {
                    let _ = writeln!(out, "    {l}");
                }
            }
        };
        for q in &self.queries {
            let _ = writeln!(out, "{}.{} = {}", q.target, q.invariant, q.answer);
            if let Some(text) = q.detail.get("text").and_then(|t| t.as_str()) {
                for l in text.lines() {
                    let _ = writeln!(out, "    {l}");
                }
            }
            if explain {
                tree(&mut out, &q.provenance);
            }
        }
        for a in &self.assertions {
            let mark = if a.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "{mark} line {}: {}  (actual {})", a.line, a.statement, a.actual);
            if explain || !a.passed {
                tree(&mut out, &a.provenance);
            }
        }
        for c in &self.ledger {
            let verdict = match &c.verdict {
                Verdict::Pass => "verified".to_string(),
                Verdict::Fail(r) => format!("REJECTED: {r}"),
            };
            let _ = writeln!(
                out,
                "certificate #{}: {} {} <= {} ({}) {verdict}",
                c.index, c.kind, c.manifold, c.bound, c.witness
            );
        }
        if let Some(msg) = &self.inconsistency {
            let _ = writeln!(out, "inconsistency: {msg}");
        }
        let passed = self.assertions.iter().filter(|a| a.passed).count();
        let _ = writeln!(
            out,
            "{}: {passed}/{} assertions passed",
            match self.status {
                Status::Ok => "ok",
                Status::AssertionFailed => "assertion failed",
                Status::Inconsistent => "inconsistent",
            },
            self.assertions.len()
        );
        out
    }
}
