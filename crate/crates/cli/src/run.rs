//! Executes claims and assembles the report array.

use std::time::{SystemTime, UNIX_EPOCH};

use istruct::complex_structures::natural_i_operator_with;
use istruct::ideals::{self, SquareNorm};
use istruct::linalg::{self, Matrix};
use istruct::morphisms::{make_respecting, RespectingOperator};
use istruct::pelczynski::{self, RuleId};
use istruct::report::Status;
use istruct::sampling::{gaussian_matrix, gaussian_vector, rng};
use istruct::{corpus, theory, Error};
use istruct::{
    complexification_norm, search_i_operator, validate_i_operator, ComplexStructure, SearchOutcome, Tolerances,
    ValidationOptions, VerificationReport,
};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::scenario::{Claim, ClaimSpec, Expect, Scenario};
use crate::CliError;

/// One report in the output array.
#[derive(Clone, Debug, Serialize)]
pub struct ReportEntry {
    pub suite: String,
    pub index: usize,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub report: VerificationReport,
    pub timestamp: String,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol_alg: Option<f64>,
    pub tol_iso: Option<f64>,
}

struct Ctx<'a> {
    scenario: &'a Scenario,
    tol: Tolerances,
}

fn timestamp() -> String {
    let now = SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default();
    format!("{}.{:03}", now.as_secs(), now.subsec_millis())
}

/// Seed of the `index`-th claim: a fixed odd-multiplier mix of the base.
pub fn claim_seed(base: u64, index: usize) -> u64 {
    base ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs every claim of `suite`; reports come back in declaration order.
pub fn run_suite(scenario: &Scenario, suite: &str, overrides: Overrides) -> Result<Vec<ReportEntry>, CliError> {
    let claims = scenario
        .suites
        .get(suite)
        .ok_or_else(|| CliError::Resolve(format!("unknown suite \"{suite}\"")))?;
    let mut tol = scenario.tolerances;
    if let Some(v) = overrides.tol_alg {
        tol.alg = v;
    }
    if let Some(v) = overrides.tol_iso {
        tol.iso = v;
    }
    let base = overrides.seed.unwrap_or(scenario.seed);
    let ctx = Ctx { scenario, tol };
    Ok(claims
        .par_iter()
        .enumerate()
        .map(|(index, spec)| {
            let seed = claim_seed(base, index);
            let report = execute(&ctx, spec, seed);
            ReportEntry {
                suite: suite.to_string(),
                index: index + 1,
                kind: spec.claim.name(),
                label: spec.label.clone(),
                report,
                timestamp: timestamp(),
            }
        })
        .collect())
}

pub fn worst(entries: &[ReportEntry]) -> Status {
    entries.iter().fold(Status::Verified, |acc, e| acc.merge(e.report.status))
}

fn execute(ctx: &Ctx, spec: &ClaimSpec, seed: u64) -> VerificationReport {
    let mut report = match evaluate(ctx, &spec.claim, seed) {
        Ok(r) => r,
        Err(e) => {
            let mut r = VerificationReport::new(spec.claim.name());
            r.violate(json!({ "error": e.to_string() }));
            r
        }
    };
    if !report.seeds.contains(&seed) {
        report.seeds.insert(0, seed);
    }
    if spec.expect == Expect::Fails {
        report.note("negative control: verified when the underlying check fails");
        report.status = match report.status {
            Status::Violated => Status::Verified,
            Status::Verified => {
                report.witness = Some(json!({ "expected": "failure", "observed": "verified" }));
                Status::Violated
            }
            Status::Inconclusive => Status::Inconclusive,
        };
    }
    report
}

fn options(ctx: &Ctx, seed: u64) -> ValidationOptions {
    ValidationOptions {
        tolerances: ctx.tol,
        seed,
        ..ValidationOptions::default()
    }
}

fn structure(ctx: &Ctx, name: &str, seed: u64) -> Result<ComplexStructure, Error> {
    let spec = &ctx.scenario.structures[name];
    validate_i_operator(&ctx.scenario.spaces[&spec.space], &spec.a, &options(ctx, seed))
}

fn operator(ctx: &Ctx, name: &str, seed: u64) -> Result<RespectingOperator, Error> {
    let spec = &ctx.scenario.operators[name];
    let domain = structure(ctx, &spec.domain, seed)?;
    let codomain = structure(ctx, &spec.codomain, seed)?;
    make_respecting(&domain, &codomain, &spec.t, &ctx.tol)
}

fn absorb_all(claim: &str, reports: Vec<VerificationReport>, tol: &Tolerances) -> VerificationReport {
    let mut out = VerificationReport::new(claim).with_tolerances(tol);
    let count = reports.len();
    for r in reports {
        out.status = out.status.merge(r.status);
        for (k, v) in r.residuals {
            out.residual(&k, v);
        }
        if out.witness.is_none() {
            out.witness = r.witness;
        }
        for n in r.notes {
            if !out.notes.contains(&n) {
                out.notes.push(n);
            }
        }
    }
    out.residual("instances", count as f64);
    out
}

fn evaluate(ctx: &Ctx, claim: &Claim, seed: u64) -> Result<VerificationReport, Error> {
    let tol = &ctx.tol;
    let mut g = rng(seed);
    Ok(match claim {
        Claim::ComplexificationNorm {
            space,
            x,
            y,
            expected,
            tol: abs,
        } => {
            let base = &ctx.scenario.spaces[space];
            let (x, y) = (istruct::Vector::from_column_slice(x), istruct::Vector::from_column_slice(y));
            let value = complexification_norm(base, &x, &y)?;
            let mut r = VerificationReport::new("spaces.complexification_norm");
            r.residual("value", value);
            let reference = match (expected, base.gram()) {
                (Some(e), _) => Some((*e, abs.unwrap_or(1e-6))),
                (None, Some(gram)) => {
                    let q = (x.dot(&(&gram * &x)) + y.dot(&(&gram * &y))) / 2.0;
                    Some((q.sqrt(), abs.unwrap_or(1e-10 * q.sqrt().max(1.0))))
                }
                _ => None,
            };
            if let Some((e, bound)) = reference {
                let err = (value - e).abs();
                r.residual("error", err);
                r = r.tolerance("value", bound);
                if !(err <= bound) {
                    r.violate(json!({ "x": x.as_slice(), "y": y.as_slice(), "value": value, "expected": e }));
                }
            }
            r
        }
        Claim::ClosedForm {
            samples,
            min_dim,
            max_dim,
        } => {
            let mut r = VerificationReport::new("spaces.closed_form").tolerance("relative", 1e-10);
            let (lo, hi) = ((*min_dim).max(1), (*max_dim).max(*min_dim).max(1));
            for _ in 0..*samples {
                let n = g.random_range(lo..=hi);
                let base = corpus::random_euclidean(n, &mut g);
                let gram = base.gram().expect("quadratic");
                let x = gaussian_vector(n, &mut g);
                let y = gaussian_vector(n, &mut g);
                let exact = ((x.dot(&(&gram * &x)) + y.dot(&(&gram * &y))) / 2.0).sqrt();
                let got = complexification_norm(&base, &x, &y)?;
                let rel = (got - exact).abs() / exact;
                r.residual("relative_error", rel);
                if rel > 1e-10 {
                    r.violate(json!({ "x": x.as_slice(), "y": y.as_slice(), "G": linalg::to_rows(&gram) }));
                }
            }
            r
        }
        Claim::IOperator { structure: name } => {
            let mut r = VerificationReport::new("structures.i_operator").with_tolerances(tol);
            match structure(ctx, name, seed) {
                Ok(s) => {
                    let c = s.certificate();
                    r.residual("algebraic", c.algebraic_residual);
                    r.residual("isometry", c.isometry_residual);
                }
                Err(Error::InvalidIOperator { reason, certificate }) => {
                    r.residual("algebraic", certificate.algebraic_residual);
                    r.residual("isometry", certificate.isometry_residual);
                    r.violate(json!({ "reason": reason, "certificate": certificate }));
                }
                Err(e) => return Err(e),
            }
            r
        }
        Claim::NaturalIOperator { space } => {
            let mut r = VerificationReport::new("structures.natural_i_operator")
                .tolerance("algebraic", 1e-12)
                .tolerance("isometry", 1e-8);
            let s = natural_i_operator_with(&ctx.scenario.spaces[space], &options(ctx, seed))?;
            let c = s.certificate();
            r.residual("algebraic", c.algebraic_residual);
            r.residual("isometry", c.isometry_residual);
            if c.algebraic_residual > 1e-12 || c.isometry_residual > 1e-8 {
                r.violate(json!({ "certificate": c }));
            }
            r
        }
        Claim::SearchIOperator { space, budget } => {
            let mut r = VerificationReport::new("structures.search");
            match search_i_operator(&ctx.scenario.spaces[space], *budget, seed, &options(ctx, seed))? {
                SearchOutcome::Found(s) => {
                    r.residual("isometry", s.certificate().isometry_residual);
                    r.note(format!("found A = {:?}", linalg::to_rows(s.operator())));
                }
                SearchOutcome::NotFound {
                    best_residual,
                    proof: Some(proof),
                } => {
                    r.violate(json!({ "proof": proof, "best_residual": best_residual }));
                }
                SearchOutcome::NotFound { best_residual, .. } => {
                    if let Some(b) = best_residual {
                        r.residual("best_residual", b);
                    }
                    r.inconclusive("budget exhausted without a validated candidate");
                }
            }
            r
        }
        Claim::Prop1Witness { structure: name, t } => {
            let s = structure(ctx, name, seed)?;
            let w = theory::build_complexification_witness(&s, t, tol)?;
            let mut r = VerificationReport::new("prop1.witness").with_tolerances(tol);
            let n = t.nrows();
            let id = Matrix::identity(n, n);
            let dev = linalg::max_deviation(&(w.s.matrix() * w.s_inverse.matrix()), &id);
            r.residual("s_s_inverse", dev);
            r.residual("respect", w.s.respect_residual());
            r.residual("norm_s", w.norm_bound.s_norm);
            r.residual("norm_bound", w.norm_bound.bound);
            if dev > tol.iso || (w.norm_bound.exact() && w.norm_bound.gap() > 1e-6) {
                r.violate(json!({ "norm_bound": w.norm_bound, "inverse_deviation": dev }));
            }
            r
        }
        Claim::Prop1Roundtrip {
            operator: Some(name),
            ..
        } => theory::verify_prop1_roundtrip(&operator(ctx, name, seed)?, tol),
        Claim::Prop1Roundtrip {
            operator: None,
            count,
            max_half_dim,
        } => {
            let mut reports = Vec::new();
            for _ in 0..*count {
                let h = g.random_range(1..=(*max_half_dim).max(1));
                reports.push(theory::verify_prop1_roundtrip(&corpus::complexification_iso(h, &mut g)?, tol));
            }
            absorb_all("prop1.roundtrip", reports, tol)
        }
        Claim::Squares {
            structure: Some(name),
            ..
        } => theory::verify_squares(&structure(ctx, name, seed)?, SquareNorm::Auto),
        Claim::Squares {
            structure: None,
            count,
            max_half_dim,
        } => {
            let mut reports = Vec::new();
            for _ in 0..*count {
                let h = g.random_range(1..=(*max_half_dim).max(1));
                reports.push(theory::verify_squares(&corpus::integer_structure(h, &mut g)?, SquareNorm::Auto));
            }
            absorb_all("squares.isomorphism", reports, tol)
        }
        Claim::RealCartesian { t: Some(t), .. } => theory::verify_real_cartesian_identities(t),
        Claim::RealCartesian { t: None, count, max_dim } => {
            let reports = (0..*count)
                .map(|_| {
                    let m = g.random_range(1..=(*max_dim).max(1));
                    let n = g.random_range(1..=(*max_dim).max(1));
                    theory::verify_real_cartesian_identities(&gaussian_matrix(m, n, &mut g))
                })
                .collect();
            absorb_all("real.cartesian", reports, tol)
        }
        Claim::ComplexCartesian {
            operator: Some(name),
            ..
        } => theory::verify_complex_cartesian_identities(&operator(ctx, name, seed)?),
        Claim::ComplexCartesian {
            operator: None,
            count,
            max_half_dim,
        } => {
            let mut reports = Vec::new();
            for _ in 0..*count {
                let hd = (*max_half_dim).max(1);
                let dom = corpus::integer_structure(g.random_range(1..=hd), &mut g)?;
                let cod = corpus::integer_structure(g.random_range(1..=hd), &mut g)?;
                let op = corpus::integer_respecting(&dom, &cod, &mut g)?;
                reports.push(theory::verify_complex_cartesian_identities(&op));
            }
            absorb_all("complex.cartesian", reports, tol)
        }
        Claim::TheoremReal { oracle, count, max_dim } => {
            let corpus = corpus::real_operators(*count, *max_dim, &mut g);
            theory::verify_theorem_real(&ctx.scenario.oracles[oracle], &corpus)?
        }
        Claim::TheoremComplex {
            oracle,
            count,
            max_half_dim,
        } => {
            let oracle = &ctx.scenario.oracles[oracle];
            let corpus = corpus::complex_operators(*count, *max_half_dim, &mut g)?;
            let audit = ideals::audit_self_conjugacy(oracle, &corpus, SquareNorm::Auto)?;
            let mut r = theory::verify_theorem_complex(oracle, &corpus, audit.is_verified())?;
            r.residual("certified_self_conjugate", if audit.is_verified() { 1.0 } else { 0.0 });
            r
        }
        Claim::SelfConjugacy {
            oracle,
            count,
            max_half_dim,
        } => {
            let corpus = corpus::complex_operators(*count, *max_half_dim, &mut g)?;
            ideals::audit_self_conjugacy(&ctx.scenario.oracles[oracle], &corpus, SquareNorm::Auto)?
        }
        Claim::PelczynskiChain { chain } => {
            let chain = chain.clone().unwrap_or_else(pelczynski::bundled_chain);
            pelczynski::check_derivation(&chain)
        }
        Claim::PelczynskiSearch {
            from,
            to,
            max_depth,
            rules,
        } => {
            let rules: Vec<RuleId> = rules.clone().unwrap_or_else(|| RuleId::ALL.to_vec());
            let mut r = VerificationReport::new("pelczynski.search");
            match pelczynski::search_chain(from, to, *max_depth, &rules) {
                Some(chain) => {
                    r.residual("length", chain.steps.len() as f64);
                    r.absorb(pelczynski::check_derivation(&chain));
                }
                None => r.violate(json!({
                    "from": from.to_string(),
                    "to": to.to_string(),
                    "max_depth": max_depth,
                    "rules": rules,
                    "result": "not_found",
                })),
            }
            r
        }
        Claim::PelczynskiHypotheses { structure: name, r, s } => {
            let st = structure(ctx, name, seed)?;
            pelczynski::factorization_hypothesis_check(r, s, st.operator(), tol.alg)?
        }
    })
}
