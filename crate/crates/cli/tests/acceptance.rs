//! End-to-end acceptance checks, one line per criterion.
//!
//! Built with `harness = false` so the lines are visible in a plain
//! `cargo test` run; any failing criterion makes the process exit nonzero.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use istruct::ideals::{self, ComplexOperator, IdealOracle, SquareNorm};
use istruct::pelczynski::{self, RuleId, Step, XM, XP};
use istruct::sampling::{gaussian_matrix, gaussian_vector, rng};
use istruct::{
    complexification_norm, corpus, direct_sum, linalg, natural_i_operator, sum, theory,
    validate_i_operator, Error, Functional, Matrix, NormedSpace, SumMode, Tolerances,
    ValidationOptions,
};
use rand::Rng;
use serde_json::json;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn residual(r: &istruct::VerificationReport, name: &str) -> f64 {
    r.residuals.get(name).copied().unwrap_or(0.0)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut g = rng(1);
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let n = g.random_range(2..=8);
        let base = corpus::random_euclidean(n, &mut g);
        let gram = base.gram().expect("quadratic");
        let x = gaussian_vector(n, &mut g);
        let y = gaussian_vector(n, &mut g);
        let exact = ((x.dot(&(&gram * &x)) + y.dot(&(&gram * &y))) / 2.0).sqrt();
        let got = complexification_norm(&base, &x, &y).map_err(err)?;
        worst = worst.max((got - exact).abs() / exact);
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-10, || format!("relative error {worst:e}"))?;
    ensure(elapsed < Duration::from_secs(2), || format!("took {elapsed:?}"))?;
    Ok(format!("max relative error {worst:.1e} in {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let base = NormedSpace::lp(2, 1.0).map_err(err)?;
    let x = istruct::Vector::from_vec(vec![1.0, 0.0]);
    let y = istruct::Vector::from_vec(vec![0.0, 1.0]);
    let got = complexification_norm(&base, &x, &y).map_err(err)?;
    let expected = (1.0 + 2.0 / std::f64::consts::PI).sqrt();
    let dev = (got - expected).abs();
    ensure(dev <= 1e-6, || format!("{got} vs {expected}"))?;
    Ok(format!("{got:.12} (deviation {dev:.1e})"))
}

fn criterion_3() -> Outcome {
    let families = [
        json!({"dim": 2, "norm": {"kind": "lp", "p": 2}}),
        json!({"dim": 2, "norm": {"kind": "lp", "p": 1}}),
        json!({"dim": 2, "norm": {"kind": "lp", "p": 3}}),
        json!({"dim": 2, "norm": {"kind": "lp", "p": "inf"}}),
        json!({"dim": 2, "norm": {"kind": "wlp", "p": 3, "weights": [1, 2]}}),
        json!({"dim": 3, "norm": {"kind": "quad", "G": [[2, 0.5, 0], [0.5, 1, 0.25], [0, 0.25, 3]]}}),
        json!({"dim": 2, "norm": {"kind": "poly", "functionals": [[1, 0], [0.5, 0.8660254037844386], [-0.5, 0.8660254037844386]]}}),
        json!({"dim": 3, "norm": {"kind": "sum",
            "left": {"dim": 2, "norm": {"kind": "lp", "p": 1}},
            "right": {"dim": 1, "norm": {"kind": "lp", "p": 2}}}}),
        json!({"dim": 2, "norm": {"kind": "pull", "map": [[1, 1], [0, 1]], "base": {"kind": "lp", "p": 1}}}),
        json!({"dim": 2, "norm": {"kind": "cplx", "base": {"kind": "lp", "p": 2}}}),
    ];
    let (mut alg, mut iso) = (0.0_f64, 0.0_f64);
    for f in &families {
        let base: NormedSpace = serde_json::from_value(f.clone()).map_err(|e| e.to_string())?;
        let s = natural_i_operator(&base).map_err(|e| format!("{f}: {e}"))?;
        let c = s.certificate();
        ensure(c.algebraic_residual <= 1e-12 && c.isometry_residual <= 1e-8, || {
            format!("{f}: residuals {:e} / {:e}", c.algebraic_residual, c.isometry_residual)
        })?;
        alg = alg.max(c.algebraic_residual);
        iso = iso.max(c.isometry_residual);
    }

    let l1 = NormedSpace::lp(2, 1.0).map_err(err)?;
    let rot = Matrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let reject = || match validate_i_operator(&l1, &rot, &ValidationOptions::default()) {
        Err(Error::InvalidIOperator { certificate, .. }) => certificate.witness.clone().ok_or("no witness".to_string()),
        Err(e) => Err(e.to_string()),
        Ok(_) => Err("rotation accepted on l1".to_string()),
    };
    let (w1, w2) = (reject()?, reject()?);
    ensure(w1 == w2, || "witness differs between runs".into())?;
    let again = w1.evaluate(&l1, &rot).map_err(err)?;
    ensure(again > 1e-8 && (again - w1.residual).abs() <= 1e-12, || {
        format!("witness residual {again:e} does not reproduce {:e}", w1.residual)
    })?;
    Ok(format!(
        "{} families (max algebraic {alg:.1e}, isometry {iso:.1e}); l1 rotation rejected, witness residual {:.3}",
        families.len(),
        w1.residual
    ))
}

fn criterion_4() -> Outcome {
    let mut g = rng(4);
    let tol = Tolerances::default();
    let (mut inv, mut gap, mut comp) = (0.0_f64, f64::NEG_INFINITY, 0.0_f64);
    for k in 0..50 {
        let iso = corpus::complexification_iso(1 + k % 4, &mut g).map_err(err)?;
        let r = theory::verify_prop1_roundtrip(&iso, &tol);
        ensure(r.is_verified(), || format!("witness {k}: {:?} {:?}", r.status, r.witness))?;
        inv = inv.max(residual(&r, "involution"));
        gap = gap.max(residual(&r, "norm_gap"));
        comp = comp.max(residual(&r, "s_s_inverse")).max(residual(&r, "s_inverse_s"));
    }
    ensure(inv <= 1e-8, || format!("involution residual {inv:e}"))?;
    ensure(gap <= 1e-6, || format!("norm bound exceeded by {gap:e}"))?;
    ensure(comp <= 1e-8, || format!("inverse deviation {comp:e}"))?;
    Ok(format!("50 witnesses: involution {inv:.1e}, norm gap {gap:.2e}, inverse {comp:.1e}"))
}

fn criterion_5() -> Outcome {
    let mut g = rng(5);
    for k in 0..50 {
        let s = corpus::integer_structure(1 + k % 3, &mut g).map_err(err)?;
        let iso = theory::squares_isomorphism(&s).map_err(err)?;
        ensure(iso.respect_residual() == 0.0, || {
            format!("structure {k}: respect residual {:e}", iso.respect_residual())
        })?;
        let r = theory::verify_squares(&s, SquareNorm::Auto);
        ensure(r.is_verified(), || format!("structure {k}: {:?}", r.witness))?;
    }
    Ok("50 structures: respect residual exactly 0, inverse within 1e-12".into())
}

fn criterion_6() -> Outcome {
    let mut g = rng(6);
    for k in 0..200 {
        let (m, n) = (g.random_range(1..=5), g.random_range(1..=5));
        let r = theory::verify_real_cartesian_identities(&gaussian_matrix(m, n, &mut g));
        ensure(r.is_verified(), || format!("real operator {k}: {:?}", r.witness))?;
    }
    for k in 0..200 {
        let dom = corpus::integer_structure(g.random_range(1..=3), &mut g).map_err(err)?;
        let cod = corpus::integer_structure(g.random_range(1..=3), &mut g).map_err(err)?;
        let op = corpus::integer_respecting(&dom, &cod, &mut g).map_err(err)?;
        let r = theory::verify_complex_cartesian_identities(&op);
        ensure(r.is_verified(), || format!("complex operator {k}: {:?}", r.witness))?;
    }
    Ok("200 real and 200 complex operators: every identity exact".into())
}

fn oracle(v: serde_json::Value) -> Result<IdealOracle, String> {
    serde_json::from_value(v).map_err(|e| e.to_string())
}

fn criterion_7() -> Outcome {
    let mut g = rng(7);
    let reals = corpus::real_operators(100, 4, &mut g);
    for d in [
        json!({"type": "all"}),
        json!({"type": "norm", "functional": "operator_norm", "bound": 2.0}),
        json!({"type": "predicate", "predicate": {"name": "max_abs_entry_at_most", "bound": 1.0}}),
    ] {
        let o = oracle(json!({"kind": "real", "descriptor": d}))?;
        let r = theory::verify_theorem_real(&o, &reals).map_err(err)?;
        ensure(r.is_verified(), || format!("real family {d}: {:?}", r.witness))?;
    }

    let complexes: Vec<ComplexOperator> = corpus::complex_operators(100, 2, &mut g).map_err(err)?;
    let mut certified = 0;
    for d in [
        json!({"type": "all"}),
        json!({"type": "norm", "functional": "operator_norm", "bound": 6.0}),
        json!({"type": "predicate", "predicate": {"name": "max_abs_entry_at_most", "bound": 3.0}}),
        json!({"type": "predicate", "predicate": {"name": "domain_entry_positive", "row": -1, "col": -2}}),
    ] {
        let o = oracle(json!({"kind": "complex", "descriptor": d}))?;
        let audit = ideals::audit_self_conjugacy(&o, &complexes, SquareNorm::Auto).map_err(err)?;
        let r = theory::verify_theorem_complex(&o, &complexes, audit.is_verified()).map_err(err)?;
        ensure(r.is_verified(), || format!("complex family {d}: {:?}", r.witness))?;
        certified += usize::from(audit.is_verified());
    }
    ensure(certified == 3, || format!("{certified} of 3 self-conjugate oracles certified"))?;

    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let (n, m) = (g.random_range(1..=4), g.random_range(1..=4));
        let (x, y) = (corpus::random_euclidean(n, &mut g), corpus::random_euclidean(m, &mut g));
        let t = gaussian_matrix(m, n, &mut g);
        let single = ideals::ideal_norm(Functional::HilbertSchmidt, &t, &x, &y).map_err(err)?.value;
        let cx = direct_sum(&x, &x, SumMode::Complexification).map_err(err)?;
        let cy = direct_sum(&y, &y, SumMode::Complexification).map_err(err)?;
        let double = ideals::ideal_norm(Functional::HilbertSchmidt, &linalg::doubled(&t), &cx, &cy)
            .map_err(err)?
            .value;
        worst = worst.max((double - std::f64::consts::SQRT_2 * single).abs() / single);
    }
    ensure(worst <= 1e-10, || format!("HS doubling off by {worst:e}"))?;
    Ok(format!(
        "real 100x3 equal; complex inclusion 100x4, equality for 3 audited; HS doubling {worst:.1e}"
    ))
}

fn criterion_8() -> Outcome {
    let chain = pelczynski::bundled_chain();
    let r = pelczynski::check_derivation(&chain);
    ensure(r.is_verified() && chain.steps.len() == 10, || format!("bundled chain: {:?}", r.witness))?;
    for i in 0..chain.steps.len() {
        let mut mutant = chain.clone();
        let Step { rule, .. } = mutant.steps[i];
        let pos = RuleId::ALL.iter().position(|&x| x == rule).expect("known rule");
        mutant.steps[i].rule = RuleId::ALL[(pos + 1) % RuleId::ALL.len()];
        let r = pelczynski::check_derivation(&mutant);
        let step = r.witness.as_ref().and_then(|w| w["step"].as_u64());
        ensure(!r.is_verified() && step == Some(i as u64 + 1), || {
            format!("mutation at step {} reported at {step:?}", i + 1)
        })?;
    }
    let start = Instant::now();
    let found = pelczynski::search_chain(&sum![XP], &sum![XM], 10, &RuleId::ALL);
    let elapsed = start.elapsed();
    let found = found.ok_or("search found no chain")?;
    ensure(pelczynski::check_derivation(&found).is_verified(), || "found chain does not check".into())?;
    ensure(elapsed < Duration::from_secs(1), || format!("search took {elapsed:?}"))?;
    let restricted = [RuleId::R3, RuleId::R5, RuleId::R6, RuleId::R7];
    ensure(pelczynski::search_chain(&sum![XP], &sum![XM], 10, &restricted).is_none(), || {
        "found a chain without R4 and R8".into()
    })?;
    Ok(format!(
        "fixture verifies; 10/10 mutations caught; search depth {} in {elapsed:.2?}; not_found without R4/R8",
        found.steps.len()
    ))
}

fn run_full_suite(out: &Path) -> Result<String, String> {
    let scenario = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/bundled.json");
    let status = Command::new(env!("CARGO_BIN_EXE_istruct"))
        .arg("run")
        .arg(&scenario)
        .args(["--suite", "paper-all", "--out"])
        .arg(out)
        .stderr(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.code() == Some(0), || format!("run exited with {status}"))?;
    let text = std::fs::read_to_string(out).map_err(|e| e.to_string())?;
    Ok(text
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"timestamp\":"))
        .collect::<Vec<_>>()
        .join("\n"))
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = run_full_suite(&dir.path().join("a.json"))?;
    let b = run_full_suite(&dir.path().join("b.json"))?;
    ensure(a == b, || "reports differ".into())?;
    Ok(format!("two runs identical apart from timestamps ({} bytes)", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("complexification norm closed form", criterion_1),
        ("l1 spot value", criterion_2),
        ("i-operator axioms", criterion_3),
        ("complexification witness roundtrip", criterion_4),
        ("squares isomorphism", criterion_5),
        ("factorization identities", criterion_6),
        ("ideal transforms", criterion_7),
        ("decomposition chain", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
