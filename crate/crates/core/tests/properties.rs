use istruct::ideals::ideal_norm;
use istruct::pelczynski::{apply_rule, Direction, RuleId, SumExpr};
use istruct::{
    complexification_norm, conjugate_structure, direct_sum, linalg, natural_i_operator, Functional, Matrix,
    NormedSpace, SumMode, Vector,
};
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(3.0), Just(f64::INFINITY)]
}

fn vec_of(n: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3.0..3.0_f64, n).prop_map(Vector::from_vec)
}

fn spd(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-1.0..1.0_f64, n * n).prop_map(move |v| {
        let b = Matrix::from_vec(n, n, v);
        b.transpose() * &b + Matrix::identity(n, n) * 0.5
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn complexification_norm_is_a_norm(
        p in exponent(),
        (x1, y1, x2, y2) in (vec_of(2), vec_of(2), vec_of(2), vec_of(2)),
        c in -4.0..4.0_f64,
    ) {
        let base = NormedSpace::lp(2, p).unwrap();
        let n = |x: &Vector, y: &Vector| complexification_norm(&base, x, y).unwrap();
        let (a, b) = (n(&x1, &y1), n(&x2, &y2));
        let scale = a.max(b).max(1.0);
        prop_assert!(n(&(&x1 + &x2), &(&y1 + &y2)) <= a + b + 1e-9 * scale);
        prop_assert!((n(&(&x1 * c), &(&y1 * c)) - c.abs() * a).abs() <= 1e-9 * scale * c.abs().max(1.0));
    }

    #[test]
    fn real_vectors_embed_with_factor(p in exponent(), x in vec_of(3)) {
        let base = NormedSpace::lp(3, p).unwrap();
        let got = complexification_norm(&base, &x, &Vector::zeros(3)).unwrap();
        let want = base.norm(&x).unwrap() / 2.0_f64.sqrt();
        prop_assert!((got - want).abs() <= 1e-10 * want.max(1.0));
    }

    #[test]
    fn rotations_are_isometries(p in exponent(), x in vec_of(2), y in vec_of(2), theta in -3.2..3.2_f64) {
        let base = NormedSpace::lp(2, p).unwrap();
        let (c, s) = (theta.cos(), theta.sin());
        let before = complexification_norm(&base, &x, &y).unwrap();
        let after = complexification_norm(&base, &(&x * c - &y * s), &(&y * c + &x * s)).unwrap();
        prop_assert!((before - after).abs() <= 1e-9 * before.max(1.0));
    }

    #[test]
    fn euclidean_base_has_closed_form(g in spd(3), x in vec_of(3), y in vec_of(3)) {
        let base = NormedSpace::quadratic(g.clone()).unwrap();
        let want = ((x.dot(&(&g * &x)) + y.dot(&(&g * &y))) / 2.0).sqrt();
        let got = complexification_norm(&base, &x, &y).unwrap();
        prop_assert!((got - want).abs() <= 1e-10 * want.max(1e-3));
    }

    #[test]
    fn conjugation_is_an_involution(g in spd(2)) {
        let s = natural_i_operator(&NormedSpace::quadratic(g).unwrap()).unwrap();
        let twice = conjugate_structure(&conjugate_structure(&s));
        prop_assert!(twice.same_as(&s));
        let conj = conjugate_structure(&s);
        prop_assert_eq!(conj.operator(), &-s.operator());
    }

    #[test]
    fn ideal_norms_are_ordered(gx in spd(3), gy in spd(2), t in prop::collection::vec(-2.0..2.0_f64, 6)) {
        let t = Matrix::from_vec(2, 3, t);
        let (x, y) = (NormedSpace::quadratic(gx).unwrap(), NormedSpace::quadratic(gy).unwrap());
        let v = |f| ideal_norm(f, &t, &x, &y).unwrap().value;
        let (op, hs, tr) = (v(Functional::OperatorNorm), v(Functional::HilbertSchmidt), v(Functional::TraceNorm));
        prop_assert!(op <= hs * (1.0 + 1e-12) + 1e-14);
        prop_assert!(hs <= tr * (1.0 + 1e-12) + 1e-14);
        prop_assert!(hs <= op * 2.0_f64.sqrt() * (1.0 + 1e-12) + 1e-14);
    }

    #[test]
    fn doubling_scales_hilbert_schmidt(gx in spd(2), gy in spd(2), t in prop::collection::vec(-2.0..2.0_f64, 4)) {
        let t = Matrix::from_vec(2, 2, t);
        let (x, y) = (NormedSpace::quadratic(gx).unwrap(), NormedSpace::quadratic(gy).unwrap());
        let single = ideal_norm(Functional::HilbertSchmidt, &t, &x, &y).unwrap().value;
        let cx = direct_sum(&x, &x, SumMode::Complexification).unwrap();
        let cy = direct_sum(&y, &y, SumMode::Complexification).unwrap();
        let double = ideal_norm(Functional::HilbertSchmidt, &linalg::doubled(&t), &cx, &cy).unwrap().value;
        prop_assert!((double - 2.0_f64.sqrt() * single).abs() <= 1e-10 * single.max(1e-6));
    }

    #[test]
    fn rules_are_reversible(
        atoms in prop::collection::vec((0..3usize, any::<bool>()), 1..5),
        rule in prop::sample::select(RuleId::ALL.to_vec()),
    ) {
        let text: Vec<String> = atoms
            .iter()
            .map(|&(l, plus)| format!("[\"{}\", \"{}\"]", ["X", "Y", "Z"][l], if plus { "+" } else { "-" }))
            .collect();
        let expr: SumExpr = serde_json::from_str(&format!("[{}]", text.join(","))).unwrap();
        for next in apply_rule(&expr, rule, Direction::Forward) {
            prop_assert!(apply_rule(&next, rule, Direction::Backward).contains(&expr));
        }
    }

    #[test]
    fn spaces_roundtrip_through_json(p in exponent(), w in prop::collection::vec(0.1..5.0_f64, 3)) {
        let s = NormedSpace::new(3, istruct::NormDescriptor::WeightedLp { p, weights: w }).unwrap();
        let back: NormedSpace = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }
}
