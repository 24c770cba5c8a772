use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Inconclusive,
    Violated,
}

impl Status {
    /// The worse of the two outcomes.
    pub fn merge(self, other: Status) -> Status {
        self.max(other)
    }
}

/// Outcome of one checked claim. A violated report always carries a witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub status: Status,
    #[serde(default)]
    pub residuals: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(claim: impl Into<String>) -> Self {
        Self {
            claim: claim.into(),
            status: Status::Verified,
            residuals: BTreeMap::new(),
            witness: None,
            tolerances: BTreeMap::new(),
            seeds: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_tolerances(mut self, tol: &Tolerances) -> Self {
        self.tolerances.insert("abs".into(), tol.abs);
        self.tolerances.insert("rel".into(), tol.rel);
        self.tolerances.insert("alg".into(), tol.alg);
        self.tolerances.insert("iso".into(), tol.iso);
        self
    }

    pub fn tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.into(), value);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seeds.push(seed);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Keeps the largest value seen under `name`.
    pub fn residual(&mut self, name: &str, value: f64) {
        let slot = self.residuals.entry(name.into()).or_insert(0.0);
        if value > *slot || value.is_nan() {
            *slot = value;
        }
    }

    /// Records a failure. The first witness is kept.
    pub fn violate(&mut self, witness: serde_json::Value) {
        self.status = Status::Violated;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    pub fn inconclusive(&mut self, note: impl Into<String>) {
        self.status = self.status.merge(Status::Inconclusive);
        self.notes.push(note.into());
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }

    /// Folds `other` into `self` as a sub-check, prefixing its residual names.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.status = self.status.merge(other.status);
        for (k, v) in other.residuals {
            self.residual(&format!("{}.{}", other.claim, k), v);
        }
        if self.witness.is_none() {
            if let Some(w) = other.witness {
                self.witness = Some(serde_json::json!({ "claim": other.claim, "witness": w }));
            }
        }
        for s in other.seeds {
            if !self.seeds.contains(&s) {
                self.seeds.push(s);
            }
        }
        self.notes.extend(other.notes);
    }
}

/// Worst status across a batch; `Verified` when empty.
pub fn overall(reports: &[VerificationReport]) -> Status {
    reports.iter().fold(Status::Verified, |acc, r| acc.merge(r.status))
}
