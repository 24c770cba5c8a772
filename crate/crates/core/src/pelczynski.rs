//! Multiset rewriting over direct sums of `X`, `Y`, `Z` with `±A`, used to
//! check the decomposition chain from `[X, A]` to `[X, −A]`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::report::VerificationReport;

/// Largest expression explored by [`search_chain`].
pub const MAX_ATOMS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    X,
    Y,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-", alias = "−")]
    Minus,
}

/// A summand carrying `A` (`+`) or `−A` (`−`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom(pub Label, pub Sign);

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.1 {
            Sign::Plus => "⁺",
            Sign::Minus => "⁻",
        };
        write!(f, "{:?}{s}", self.0)
    }
}

const fn atom(l: Label, s: Sign) -> Atom {
    Atom(l, s)
}

pub const XP: Atom = atom(Label::X, Sign::Plus);
pub const XM: Atom = atom(Label::X, Sign::Minus);
pub const YP: Atom = atom(Label::Y, Sign::Plus);
pub const YM: Atom = atom(Label::Y, Sign::Minus);
pub const ZP: Atom = atom(Label::Z, Sign::Plus);
pub const ZM: Atom = atom(Label::Z, Sign::Minus);

/// A direct sum up to reordering, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SumExpr(Vec<Atom>);

impl<'de> Deserialize<'de> for SumExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let atoms = Vec::<Atom>::deserialize(d)?;
        SumExpr::new(atoms).map_err(serde::de::Error::custom)
    }
}

impl SumExpr {
    pub fn new(mut atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidDescriptor("direct sum must be nonempty".into()));
        }
        atoms.sort();
        Ok(Self(atoms))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self` with one copy of each atom in `pattern` removed, if all present.
    fn remove(&self, pattern: &[Atom]) -> Option<Vec<Atom>> {
        let mut rest = self.0.clone();
        for a in pattern {
            let i = rest.iter().position(|b| b == a)?;
            rest.remove(i);
        }
        Some(rest)
    }
}

impl fmt::Display for SumExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("⊕")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Build a [`SumExpr`] from a nonempty atom list.
#[macro_export]
macro_rules! sum {
    ($($a:expr),+ $(,)?) => {
        $crate::pelczynski::SumExpr::new(vec![$($a),+]).expect("nonempty")
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
}

impl RuleId {
    pub const ALL: [RuleId; 6] = [RuleId::R3, RuleId::R4, RuleId::R5, RuleId::R6, RuleId::R7, RuleId::R8];

    /// `(lhs, rhs)`; every rule holds in both directions.
    pub fn sides(self) -> (&'static [Atom], &'static [Atom]) {
        match self {
            RuleId::R3 => (&[XP], &[YP, ZP]),
            RuleId::R7 => (&[XM], &[YM, ZM]),
            RuleId::R8 => (&[YP], &[XM]),
            RuleId::R4 => (&[YM], &[XP]),
            RuleId::R5 => (&[XP], &[XP, XP]),
            RuleId::R6 => (&[XM], &[XM, XM]),
        }
    }
}

impl std::str::FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "R3" => RuleId::R3,
            "R4" => RuleId::R4,
            "R5" => RuleId::R5,
            "R6" => RuleId::R6,
            "R7" => RuleId::R7,
            "R8" => RuleId::R8,
            other => return Err(Error::UnknownRule(other.into())),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "fwd")]
    Forward,
    #[serde(rename = "bwd")]
    Backward,
}

/// Every expression reachable by one application of `rule` in `dir`, sorted.
pub fn apply_rule(expr: &SumExpr, rule: RuleId, dir: Direction) -> Vec<SumExpr> {
    let (lhs, rhs) = rule.sides();
    let (from, to) = match dir {
        Direction::Forward => (lhs, rhs),
        Direction::Backward => (rhs, lhs),
    };
    // A multiset has one distinct match per rule side.
    match expr.remove(from) {
        Some(mut rest) => {
            rest.extend_from_slice(to);
            vec![SumExpr::new(rest).expect("rule sides are nonempty")]
        }
        None => Vec::new(),
    }
}

/// Parse a rule id given as text.
pub fn apply_named_rule(expr: &SumExpr, rule: &str, dir: Direction) -> Result<Vec<SumExpr>> {
    Ok(apply_rule(expr, rule.parse()?, dir))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub expr: SumExpr,
    pub rule: RuleId,
    pub dir: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDerivation {
    pub from: SumExpr,
    pub to: SumExpr,
    pub steps: Vec<Step>,
}

/// The decomposition chain from `X⁺` to `X⁻`.
pub fn bundled_chain() -> ChainDerivation {
    serde_json::from_str(include_str!("../fixtures/pelczynski_chain.json")).expect("bundled chain parses")
}

/// Steps are numbered from 1; a violation witness names the first bad step.
pub fn check_derivation(chain: &ChainDerivation) -> VerificationReport {
    let mut report = VerificationReport::new("pelczynski.chain");
    report.residual("steps", chain.steps.len() as f64);
    let mut current = &chain.from;
    for (i, step) in chain.steps.iter().enumerate() {
        let next = apply_rule(current, step.rule, step.dir);
        if !next.contains(&step.expr) {
            report.violate(serde_json::json!({
                "step": i + 1,
                "rule": step.rule,
                "dir": step.dir,
                "from": current.to_string(),
                "claimed": step.expr.to_string(),
                "reachable": next.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }));
            return report;
        }
        current = &step.expr;
    }
    if current != &chain.to {
        report.violate(serde_json::json!({
            "step": chain.steps.len(),
            "endpoint": current.to_string(),
            "declared": chain.to.to_string(),
        }));
    }
    report
}

/// Breadth-first search with rules tried in `rules` order, forward before
/// backward, so the result is deterministic. Expressions above
/// [`MAX_ATOMS`] are pruned.
pub fn search_chain(from: &SumExpr, to: &SumExpr, max_depth: usize, rules: &[RuleId]) -> Option<ChainDerivation> {
    let mut parent: HashMap<SumExpr, Option<(SumExpr, Step)>> = HashMap::new();
    parent.insert(from.clone(), None);
    let mut queue = VecDeque::from([(from.clone(), 0usize)]);
    while let Some((expr, depth)) = queue.pop_front() {
        if &expr == to {
            let mut steps = Vec::new();
            let mut cur = expr;
            while let Some(Some((prev, step))) = parent.get(&cur).cloned() {
                steps.push(step);
                cur = prev;
            }
            steps.reverse();
            return Some(ChainDerivation {
                from: from.clone(),
                to: to.clone(),
                steps,
            });
        }
        if depth == max_depth {
            continue;
        }
        for &rule in rules {
            for dir in [Direction::Forward, Direction::Backward] {
                for next in apply_rule(&expr, rule, dir) {
                    if next.len() > MAX_ATOMS || parent.contains_key(&next) {
                        continue;
                    }
                    let step = Step {
                        expr: next.clone(),
                        rule,
                        dir,
                    };
                    parent.insert(next.clone(), Some((expr.clone(), step)));
                    queue.push_back((next, depth + 1));
                }
            }
        }
    }
    None
}

/// All expressions reachable from `from` within `max_depth` steps and
/// `max_atoms` atoms.
pub fn reachable(from: &SumExpr, max_depth: usize, max_atoms: usize, rules: &[RuleId]) -> Vec<SumExpr> {
    let mut seen = vec![from.clone()];
    let mut frontier = vec![from.clone()];
    for _ in 0..max_depth {
        let mut next_frontier = Vec::new();
        for expr in &frontier {
            for &rule in rules {
                for dir in [Direction::Forward, Direction::Backward] {
                    for next in apply_rule(expr, rule, dir) {
                        if next.len() <= max_atoms && !seen.contains(&next) {
                            seen.push(next.clone());
                            next_frontier.push(next);
                        }
                    }
                }
            }
        }
        if next_frontier.is_empty() {
            break;
        }
        frontier = next_frontier;
    }
    seen.sort();
    seen
}

/// Checks the operator hypotheses behind the chain: `RS = I`, `R` respects
/// `(A, −A)`, `S` respects `(−A, A)`, `SR` is a projection, and
/// `X = range(SR) ⊕ ker(SR)` by dimension count.
pub fn factorization_hypothesis_check(r: &Matrix, s: &Matrix, a: &Matrix, tol: f64) -> Result<VerificationReport> {
    let n = a.nrows();
    for (name, m) in [("R", r), ("S", s), ("A", a)] {
        if m.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!("{name} must be {n}x{n}")));
        }
    }
    let mut report = VerificationReport::new("pelczynski.hypotheses").tolerance("alg", tol);
    let id = Matrix::identity(n, n);
    let rs = linalg::max_deviation(&(r * s), &id);
    let r_respect = linalg::max_abs(&(r * a + a * r));
    let s_respect = linalg::max_abs(&(s * a + a * s));
    let p = s * r;
    let projection = linalg::max_deviation(&(&p * &p), &p);
    let y = linalg::numerical_rank(&p);
    let z = linalg::numerical_rank(&(&id - &p));
    report.residual("rs_identity", rs);
    report.residual("r_respect", r_respect);
    report.residual("s_respect", s_respect);
    report.residual("projection", projection);
    report.residual("dim_y", y as f64);
    report.residual("dim_z", z as f64);
    for (check, value) in [
        ("rs_identity", rs),
        ("r_respect", r_respect),
        ("s_respect", s_respect),
        ("projection", projection),
    ] {
        if !(value <= tol) {
            report.violate(serde_json::json!({ "check": check, "residual": value }));
        }
    }
    if y + z != n {
        report.violate(serde_json::json!({ "check": "decomposition", "dim_y": y, "dim_z": z, "dim_x": n }));
    }
    Ok(report)
}
