//! The machine-readable report emitted by every subcommand.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use qmason::theorems::{Premise, Verdict};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremiseDoc {
    pub name: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl From<&Premise> for PremiseDoc {
    fn from(p: &Premise) -> Self {
        PremiseDoc { name: p.name.to_string(), holds: p.holds, witness: p.witness.clone() }
    }
}

/// Outcome of a command. `Ok` is used by plain computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DocVerdict {
    Ok,
    Holds,
    Violated,
    NotApplicable,
}

impl From<Verdict> for DocVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Holds => DocVerdict::Holds,
            Verdict::Violated => DocVerdict::Violated,
            Verdict::NotApplicable => DocVerdict::NotApplicable,
        }
    }
}

impl DocVerdict {
    pub fn exit_code(self) -> i32 {
        match self {
            DocVerdict::Ok | DocVerdict::Holds => 0,
            DocVerdict::Violated | DocVerdict::NotApplicable => 1,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            DocVerdict::Ok => "ok",
            DocVerdict::Holds => "holds",
            DocVerdict::Violated => "violated",
            DocVerdict::NotApplicable => "not-applicable",
        }
    }
}

/// Every number is a canonical exact string; there are no JSON numbers
/// apart from `schema_version`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub command: String,
    pub arguments: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    pub premises: Vec<PremiseDoc>,
    pub quantities: BTreeMap<String, String>,
    pub flags: BTreeMap<String, bool>,
    pub verdict: DocVerdict,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub payload: Value,
}

impl ReportDocument {
    pub fn new(command: &str, arguments: &[String], q: Option<String>) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            arguments: arguments.to_vec(),
            q,
            premises: Vec::new(),
            quantities: BTreeMap::new(),
            flags: BTreeMap::new(),
            verdict: DocVerdict::Ok,
            payload: Value::Null,
        }
    }

    pub fn quantity(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.quantities.insert(key.to_string(), value.to_string());
        self
    }

    pub fn flag(&mut self, key: &str, value: bool) -> &mut Self {
        self.flags.insert(key.to_string(), value);
        self
    }

    pub fn premises(&mut self, premises: &[Premise]) -> &mut Self {
        self.premises = premises.iter().map(PremiseDoc::from).collect();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(q) = &self.q {
            let _ = writeln!(out, "q: {q}");
        }
        for p in &self.premises {
            let mark = if p.holds { "ok" } else { "FAILS" };
            let _ = write!(out, "premise {}: {mark}", p.name);
            if let Some(w) = &p.witness {
                let _ = write!(out, " ({w})");
            }
            out.push('\n');
        }
        for (k, v) in &self.quantities {
            let _ = writeln!(out, "{k}: {v}");
        }
        for (k, v) in &self.flags {
            let _ = writeln!(out, "{k}: {v}");
        }
        if !self.payload.is_null() {
            let _ = writeln!(out, "payload: {}", self.payload);
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.as_str());
        out
    }
}
