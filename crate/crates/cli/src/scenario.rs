//! Scenario files: named spaces, candidate structures, operators, oracles and
//! suites of claims.

use std::collections::BTreeMap;
use std::path::Path;

use istruct::ideals::IdealOracle;
use istruct::linalg::{self, Matrix};
use istruct::pelczynski::{ChainDerivation, RuleId, SumExpr};
use istruct::{NormedSpace, Tolerances};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA: &str = "istruct/1";

#[derive(Clone, Debug, Deserialize)]
pub struct Scenario {
    pub schema: String,
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub spaces: BTreeMap<String, NormedSpace>,
    #[serde(default)]
    pub structures: BTreeMap<String, StructureSpec>,
    #[serde(default)]
    pub operators: BTreeMap<String, OperatorSpec>,
    #[serde(default)]
    pub oracles: BTreeMap<String, IdealOracle>,
    #[serde(default)]
    pub suites: BTreeMap<String, Vec<ClaimSpec>>,
}

/// An i-operator candidate; validated only when a claim uses it.
#[derive(Clone, Debug, Deserialize)]
pub struct StructureSpec {
    pub space: String,
    #[serde(rename = "A", with = "linalg::rows")]
    pub a: Matrix,
}

#[derive(Clone, Debug, Deserialize)]
pub struct OperatorSpec {
    pub domain: String,
    pub codomain: String,
    #[serde(rename = "T", with = "linalg::rows")]
    pub t: Matrix,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    #[default]
    Holds,
    /// Negative control: the claim is verified when the check fails.
    Fails,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ClaimSpec {
    #[serde(flatten)]
    pub claim: Claim,
    #[serde(default)]
    pub expect: Expect,
    #[serde(default)]
    pub label: Option<String>,
}

fn d_samples() -> usize {
    200
}
fn d_min_dim() -> usize {
    2
}
fn d_max_dim() -> usize {
    8
}
fn d_count() -> usize {
    10
}
fn d_half() -> usize {
    3
}
fn d_budget() -> usize {
    2000
}
fn d_depth() -> usize {
    10
}
fn d_corpus() -> usize {
    100
}
fn d_small() -> usize {
    2
}
fn d_real_dim() -> usize {
    4
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "claim", rename_all = "snake_case")]
pub enum Claim {
    ComplexificationNorm {
        space: String,
        x: Vec<f64>,
        y: Vec<f64>,
        #[serde(default)]
        expected: Option<f64>,
        #[serde(default)]
        tol: Option<f64>,
    },
    ClosedForm {
        #[serde(default = "d_samples")]
        samples: usize,
        #[serde(default = "d_min_dim")]
        min_dim: usize,
        #[serde(default = "d_max_dim")]
        max_dim: usize,
    },
    IOperator {
        structure: String,
    },
    NaturalIOperator {
        space: String,
    },
    SearchIOperator {
        space: String,
        #[serde(default = "d_budget")]
        budget: usize,
    },
    Prop1Witness {
        structure: String,
        #[serde(rename = "T", with = "linalg::rows")]
        t: Matrix,
    },
    Prop1Roundtrip {
        #[serde(default)]
        operator: Option<String>,
        #[serde(default = "d_count")]
        count: usize,
        #[serde(default = "d_half")]
        max_half_dim: usize,
    },
    Squares {
        #[serde(default)]
        structure: Option<String>,
        #[serde(default = "d_count")]
        count: usize,
        #[serde(default = "d_half")]
        max_half_dim: usize,
    },
    RealCartesian {
        #[serde(default, rename = "T", with = "linalg::rows_opt")]
        t: Option<Matrix>,
        #[serde(default = "d_count")]
        count: usize,
        #[serde(default = "d_real_dim")]
        max_dim: usize,
    },
    ComplexCartesian {
        #[serde(default)]
        operator: Option<String>,
        #[serde(default = "d_count")]
        count: usize,
        #[serde(default = "d_half")]
        max_half_dim: usize,
    },
    TheoremReal {
        oracle: String,
        #[serde(default = "d_corpus")]
        count: usize,
        #[serde(default = "d_real_dim")]
        max_dim: usize,
    },
    TheoremComplex {
        oracle: String,
        #[serde(default = "d_corpus")]
        count: usize,
        #[serde(default = "d_small")]
        max_half_dim: usize,
    },
    SelfConjugacy {
        oracle: String,
        #[serde(default = "d_corpus")]
        count: usize,
        #[serde(default = "d_small")]
        max_half_dim: usize,
    },
    PelczynskiChain {
        #[serde(default)]
        chain: Option<ChainDerivation>,
    },
    PelczynskiSearch {
        from: SumExpr,
        to: SumExpr,
        #[serde(default = "d_depth")]
        max_depth: usize,
        #[serde(default)]
        rules: Option<Vec<RuleId>>,
    },
    PelczynskiHypotheses {
        structure: String,
        #[serde(rename = "R", with = "linalg::rows")]
        r: Matrix,
        #[serde(rename = "S", with = "linalg::rows")]
        s: Matrix,
    },
}

impl Claim {
    pub fn name(&self) -> &'static str {
        match self {
            Claim::ComplexificationNorm { .. } => "complexification_norm",
            Claim::ClosedForm { .. } => "closed_form",
            Claim::IOperator { .. } => "i_operator",
            Claim::NaturalIOperator { .. } => "natural_i_operator",
            Claim::SearchIOperator { .. } => "search_i_operator",
            Claim::Prop1Witness { .. } => "prop1_witness",
            Claim::Prop1Roundtrip { .. } => "prop1_roundtrip",
            Claim::Squares { .. } => "squares",
            Claim::RealCartesian { .. } => "real_cartesian",
            Claim::ComplexCartesian { .. } => "complex_cartesian",
            Claim::TheoremReal { .. } => "theorem_real",
            Claim::TheoremComplex { .. } => "theorem_complex",
            Claim::SelfConjugacy { .. } => "self_conjugacy",
            Claim::PelczynskiChain { .. } => "pelczynski_chain",
            Claim::PelczynskiSearch { .. } => "pelczynski_search",
            Claim::PelczynskiHypotheses { .. } => "pelczynski_hypotheses",
        }
    }

    fn references(&self) -> Vec<(&'static str, &str)> {
        match self {
            Claim::ComplexificationNorm { space, .. }
            | Claim::NaturalIOperator { space }
            | Claim::SearchIOperator { space, .. } => vec![("space", space)],
            Claim::IOperator { structure }
            | Claim::Prop1Witness { structure, .. }
            | Claim::PelczynskiHypotheses { structure, .. } => vec![("structure", structure)],
            Claim::Squares {
                structure: Some(structure),
                ..
            } => vec![("structure", structure)],
            Claim::Prop1Roundtrip {
                operator: Some(op), ..
            }
            | Claim::ComplexCartesian {
                operator: Some(op), ..
            } => vec![("operator", op)],
            Claim::TheoremReal { oracle, .. }
            | Claim::TheoremComplex { oracle, .. }
            | Claim::SelfConjugacy { oracle, .. } => vec![("oracle", oracle)],
            _ => Vec::new(),
        }
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let scenario: Scenario = serde_json::from_str(text).map_err(CliError::Parse)?;
        if scenario.schema != SCHEMA {
            return Err(CliError::Schema(scenario.schema));
        }
        scenario.resolve()?;
        Ok(scenario)
    }

    /// Every name used anywhere refers to a declared entry.
    fn resolve(&self) -> Result<(), CliError> {
        let missing = |what: &str, name: &str, at: &str| {
            Err(CliError::Resolve(format!("{at}: unknown {what} \"{name}\"")))
        };
        for (name, s) in &self.structures {
            if !self.spaces.contains_key(&s.space) {
                return missing("space", &s.space, &format!("structure {name}"));
            }
        }
        for (name, op) in &self.operators {
            for end in [&op.domain, &op.codomain] {
                if !self.structures.contains_key(end) {
                    return missing("structure", end, &format!("operator {name}"));
                }
            }
        }
        for (suite, claims) in &self.suites {
            for (i, c) in claims.iter().enumerate() {
                for (what, name) in c.claim.references() {
                    let known = match what {
                        "space" => self.spaces.contains_key(name),
                        "structure" => self.structures.contains_key(name),
                        "operator" => self.operators.contains_key(name),
                        _ => self.oracles.contains_key(name),
                    };
                    if !known {
                        return missing(what, name, &format!("suite {suite}, claim {}", i + 1));
                    }
                }
            }
        }
        Ok(())
    }

    /// Suite names, sorted.
    pub fn suite_names(&self) -> Vec<&str> {
        self.suites.keys().map(String::as_str).collect()
    }
}
