//! Ideal-norm functionals, membership oracles and the real/complex ideal
//! transforms.
//!
//! Threshold oracles (norm or rank bounds) are test instruments: they are not
//! closed under addition and so are not operator ideals. The transforms only
//! ever evaluate single-operator membership, which is what is exercised here.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::morphisms::{self, RespectingOperator};
use crate::report::VerificationReport;
use crate::spaces::{direct_sum, NormedSpace, SumMode};

/// Note attached to every report produced from oracle decisions.
pub const THRESHOLD_CAVEAT: &str =
    "threshold oracles are test instruments, not operator ideals: they are not closed under addition";

/// Samples used for sampled operator-norm estimates.
const NORM_SAMPLES: usize = 4096;

/// Absolute slack on norm thresholds.
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    OperatorNorm,
    HilbertSchmidt,
    TraceNorm,
}

impl Functional {
    pub fn name(self) -> &'static str {
        match self {
            Functional::OperatorNorm => "operator_norm",
            Functional::HilbertSchmidt => "hilbert_schmidt",
            Functional::TraceNorm => "trace_norm",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdealNormValue {
    pub functional: Functional,
    pub value: f64,
    pub exact: bool,
}

/// `ρ(T)` for `T : X → Y`. Hilbert–Schmidt and trace norms need Euclidean
/// norms on both sides; the operator norm falls back to a sampled estimate.
pub fn ideal_norm(
    functional: Functional,
    t: &Matrix,
    domain: &NormedSpace,
    codomain: &NormedSpace,
) -> Result<IdealNormValue> {
    if t.shape() != (codomain.dim(), domain.dim()) {
        return Err(Error::ShapeMismatch("operator shape does not match spaces".into()));
    }
    if functional == Functional::OperatorNorm {
        let est = morphisms::operator_norm(t, domain, codomain, NORM_SAMPLES, 0)?;
        return Ok(IdealNormValue {
            functional,
            value: est.value,
            exact: est.exact,
        });
    }
    let (Some(gx), Some(gy)) = (domain.gram(), codomain.gram()) else {
        return Err(Error::UnsupportedNorm {
            functional: functional.name().into(),
            detail: "both norms must be Euclidean".into(),
        });
    };
    let sv = linalg::singular_values(&linalg::whitened(t, &gx, &gy)?);
    let value = match functional {
        Functional::HilbertSchmidt => sv.iter().map(|s| s * s).sum::<f64>().sqrt(),
        _ => sv.iter().sum(),
    };
    Ok(IdealNormValue {
        functional,
        value,
        exact: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    Real,
    Complex,
}

/// Pure decision functions of the matrix and, for complex oracles, the
/// i-operators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Predicate {
    /// `max |Tᵢⱼ| ≤ bound`.
    MaxAbsEntryAtMost { bound: f64 },
    /// `A[row, col] > 0`; negative indices count from the end.
    DomainEntryPositive { row: isize, col: isize },
    /// Accepts exactly when the domain operator is the natural one. Not an
    /// ideal; used as a mutant.
    NaturalDomainOnly,
}

impl Predicate {
    fn needs_structure(self) -> bool {
        !matches!(self, Predicate::MaxAbsEntryAtMost { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OracleDescriptor {
    Norm { functional: Functional, bound: f64 },
    Rank { r: usize },
    Predicate { predicate: Predicate },
    All,
    None,
    /// `R_ℂ` for a real oracle `R`.
    Complexify { inner: Box<IdealOracle> },
    /// `C_ℝ` for a complex oracle `C`. `norm` selects the norm on the
    /// doubled spaces; the `sum` variant is for sensitivity checks.
    RealForm {
        inner: Box<IdealOracle>,
        #[serde(default = "integral_norm")]
        norm: SumMode,
    },
    /// The conjugate of a complex oracle.
    Conjugate { inner: Box<IdealOracle> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OracleRepr")]
pub struct IdealOracle {
    kind: OracleKind,
    descriptor: OracleDescriptor,
}

#[derive(Deserialize)]
struct OracleRepr {
    kind: OracleKind,
    descriptor: OracleDescriptor,
}

impl TryFrom<OracleRepr> for IdealOracle {
    type Error = Error;

    fn try_from(r: OracleRepr) -> Result<Self> {
        IdealOracle::new(r.kind, r.descriptor)
    }
}

fn integral_norm() -> SumMode {
    SumMode::Complexification
}

fn expect_kind(oracle: &IdealOracle, kind: OracleKind) -> Result<()> {
    if oracle.kind != kind {
        return Err(Error::KindMismatch {
            expected: format!("{kind:?}").to_lowercase(),
            found: format!("{:?}", oracle.kind).to_lowercase(),
        });
    }
    Ok(())
}

impl IdealOracle {
    pub fn new(kind: OracleKind, descriptor: OracleDescriptor) -> Result<Self> {
        match &descriptor {
            OracleDescriptor::Norm { bound, .. } if !(bound.is_finite() && *bound >= 0.0) => {
                return Err(Error::InvalidDescriptor("norm bound must be finite and non-negative".into()))
            }
            OracleDescriptor::Predicate {
                predicate: Predicate::MaxAbsEntryAtMost { bound },
            } if !bound.is_finite() => return Err(Error::InvalidDescriptor("entry bound must be finite".into())),
            OracleDescriptor::Predicate { predicate } if predicate.needs_structure() && kind == OracleKind::Real => {
                return Err(Error::InvalidDescriptor("predicate reads i-operators; complex oracles only".into()))
            }
            OracleDescriptor::Complexify { inner } => {
                expect_kind(inner, OracleKind::Real)?;
                if kind != OracleKind::Complex {
                    return Err(Error::KindMismatch {
                        expected: "complex".into(),
                        found: "real".into(),
                    });
                }
            }
            OracleDescriptor::RealForm { inner, .. } => {
                expect_kind(inner, OracleKind::Complex)?;
                if kind != OracleKind::Real {
                    return Err(Error::KindMismatch {
                        expected: "real".into(),
                        found: "complex".into(),
                    });
                }
            }
            OracleDescriptor::Conjugate { inner } => {
                expect_kind(inner, OracleKind::Complex)?;
                if kind != OracleKind::Complex {
                    return Err(Error::KindMismatch {
                        expected: "complex".into(),
                        found: "real".into(),
                    });
                }
            }
            _ => {}
        }
        Ok(Self { kind, descriptor })
    }

    pub fn real(descriptor: OracleDescriptor) -> Result<Self> {
        Self::new(OracleKind::Real, descriptor)
    }

    pub fn complex(descriptor: OracleDescriptor) -> Result<Self> {
        Self::new(OracleKind::Complex, descriptor)
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    pub fn descriptor(&self) -> &OracleDescriptor {
        &self.descriptor
    }

    /// Decision ignores the i-operators (so is self-conjugate by construction).
    pub fn matrix_only(&self) -> bool {
        match &self.descriptor {
            OracleDescriptor::Predicate { predicate } => !predicate.needs_structure(),
            OracleDescriptor::Complexify { .. } => true,
            OracleDescriptor::RealForm { inner, .. } | OracleDescriptor::Conjugate { inner } => inner.matrix_only(),
            _ => true,
        }
    }
}

/// A real operator with its normed spaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealOperator {
    pub domain: NormedSpace,
    pub codomain: NormedSpace,
    #[serde(rename = "T", with = "linalg::rows")]
    pub t: Matrix,
}

impl RealOperator {
    pub fn new(t: Matrix, domain: NormedSpace, codomain: NormedSpace) -> Result<Self> {
        if t.shape() != (codomain.dim(), domain.dim()) {
            return Err(Error::ShapeMismatch("operator shape does not match spaces".into()));
        }
        Ok(Self { domain, codomain, t })
    }
}

/// Raw data of `[T, A, B]`; oracle decisions never re-validate structures.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexOperator {
    pub t: Matrix,
    pub a: Matrix,
    pub b: Matrix,
    pub domain: NormedSpace,
    pub codomain: NormedSpace,
}

impl From<&RespectingOperator> for ComplexOperator {
    fn from(op: &RespectingOperator) -> Self {
        Self {
            t: op.matrix().clone(),
            a: op.domain().operator().clone(),
            b: op.codomain().operator().clone(),
            domain: op.domain().space().clone(),
            codomain: op.codomain().space().clone(),
        }
    }
}

impl ComplexOperator {
    /// `[T, −A, −B]`.
    pub fn conjugate(&self) -> Self {
        Self {
            t: self.t.clone(),
            a: -&self.a,
            b: -&self.b,
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
        }
    }

    /// `[T ⊕ T, A ⊕ −A, B ⊕ −B]` on the square spaces chosen by `mode`.
    pub fn cartesian_square(&self, mode: SquareNorm) -> Result<Self> {
        Ok(Self {
            t: linalg::doubled(&self.t),
            a: linalg::block_diag(&self.a, &-&self.a),
            b: linalg::block_diag(&self.b, &-&self.b),
            domain: square_space(&self.domain, mode)?,
            codomain: square_space(&self.codomain, mode)?,
        })
    }
}

/// Norm on `X ⊕ X` carrying `A ⊕ ±A`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareNorm {
    /// The integral norm when `X` is Euclidean (where `A ⊕ −A` is an
    /// isometry of it), otherwise `‖x‖ + ‖y‖`.
    #[default]
    Auto,
    Complexification,
    Sum,
}

pub fn square_space(x: &NormedSpace, mode: SquareNorm) -> Result<NormedSpace> {
    let sum_mode = match mode {
        SquareNorm::Auto if x.gram().is_some() => SumMode::Complexification,
        SquareNorm::Complexification => SumMode::Complexification,
        _ => SumMode::Sum,
    };
    direct_sum(x, x, sum_mode)
}

/// `[T ⊕ T, N_X, N_Y]` with the integral complexification norms.
pub fn realified(op: &RealOperator) -> Result<ComplexOperator> {
    realified_with(op, SumMode::Complexification)
}

/// `[T ⊕ T, N_X, N_Y]` with `norm` on both doubled spaces. Rotations by
/// `N_X` are not isometries of `‖x‖ + ‖y‖` (take `y = 0`), so the `sum`
/// variant is only an equivalent renorming; it shows how norm thresholds
/// react to that choice.
pub fn realified_with(op: &RealOperator, norm: SumMode) -> Result<ComplexOperator> {
    Ok(ComplexOperator {
        t: linalg::doubled(&op.t),
        a: linalg::natural_operator(op.domain.dim()),
        b: linalg::natural_operator(op.codomain.dim()),
        domain: direct_sum(&op.domain, &op.domain, norm)?,
        codomain: direct_sum(&op.codomain, &op.codomain, norm)?,
    })
}

fn entry(m: &Matrix, row: isize, col: isize) -> Option<f64> {
    let wrap = |i: isize, n: usize| -> Option<usize> {
        let j = if i < 0 { n as isize + i } else { i };
        (0..n as isize).contains(&j).then_some(j as usize)
    };
    Some(m[(wrap(row, m.nrows())?, wrap(col, m.ncols())?)])
}

fn threshold(
    functional: Functional,
    bound: f64,
    t: &Matrix,
    x: &NormedSpace,
    y: &NormedSpace,
) -> Result<bool> {
    Ok(ideal_norm(functional, t, x, y)?.value <= bound + BOUND_TOL)
}

/// Membership of a real operator.
pub fn decide_real(oracle: &IdealOracle, op: &RealOperator) -> Result<bool> {
    expect_kind(oracle, OracleKind::Real)?;
    match &oracle.descriptor {
        OracleDescriptor::Norm { functional, bound } => threshold(*functional, *bound, &op.t, &op.domain, &op.codomain),
        OracleDescriptor::Rank { r } => Ok(linalg::numerical_rank(&op.t) <= *r),
        OracleDescriptor::Predicate {
            predicate: Predicate::MaxAbsEntryAtMost { bound },
        } => Ok(linalg::max_abs(&op.t) <= *bound),
        OracleDescriptor::Predicate { .. } => Err(Error::InvalidDescriptor("predicate needs i-operators".into())),
        OracleDescriptor::All => Ok(true),
        OracleDescriptor::None => Ok(false),
        OracleDescriptor::RealForm { inner, norm } => decide_complex(inner, &realified_with(op, *norm)?),
        OracleDescriptor::Complexify { .. } | OracleDescriptor::Conjugate { .. } => unreachable!("kind checked"),
    }
}

/// Membership of `[T, A, B]`.
pub fn decide_complex(oracle: &IdealOracle, op: &ComplexOperator) -> Result<bool> {
    expect_kind(oracle, OracleKind::Complex)?;
    match &oracle.descriptor {
        OracleDescriptor::Norm { functional, bound } => threshold(*functional, *bound, &op.t, &op.domain, &op.codomain),
        OracleDescriptor::Rank { r } => Ok(linalg::numerical_rank(&op.t) <= *r),
        OracleDescriptor::Predicate { predicate } => Ok(match *predicate {
            Predicate::MaxAbsEntryAtMost { bound } => linalg::max_abs(&op.t) <= bound,
            Predicate::DomainEntryPositive { row, col } => entry(&op.a, row, col).is_some_and(|v| v > 0.0),
            Predicate::NaturalDomainOnly => {
                op.a.nrows() % 2 == 0 && op.a == linalg::natural_operator(op.a.nrows() / 2)
            }
        }),
        OracleDescriptor::All => Ok(true),
        OracleDescriptor::None => Ok(false),
        OracleDescriptor::Complexify { inner } => decide_real(
            inner,
            &RealOperator {
                domain: op.domain.clone(),
                codomain: op.codomain.clone(),
                t: op.t.clone(),
            },
        ),
        OracleDescriptor::Conjugate { inner } => decide_complex(inner, &op.conjugate()),
        OracleDescriptor::RealForm { .. } => unreachable!("kind checked"),
    }
}

pub fn decide_respecting(oracle: &IdealOracle, op: &RespectingOperator) -> Result<bool> {
    decide_complex(oracle, &ComplexOperator::from(op))
}

/// `R_ℂ`: `[T, A, B] ∈ R_ℂ ⇔ T ∈ R`.
pub fn complexify_ideal(r: &IdealOracle) -> Result<IdealOracle> {
    expect_kind(r, OracleKind::Real)?;
    IdealOracle::complex(OracleDescriptor::Complexify { inner: Box::new(r.clone()) })
}

/// `C_ℝ`: `T ∈ C_ℝ ⇔ [T ⊕ T, N_X, N_Y] ∈ C`.
pub fn realify_ideal(c: &IdealOracle) -> Result<IdealOracle> {
    realify_ideal_with(c, SumMode::Complexification)
}

/// [`realify_ideal`] with an explicit norm on `X ⊕ X`.
pub fn realify_ideal_with(c: &IdealOracle, norm: SumMode) -> Result<IdealOracle> {
    expect_kind(c, OracleKind::Complex)?;
    IdealOracle::real(OracleDescriptor::RealForm {
        inner: Box::new(c.clone()),
        norm,
    })
}

/// `[T, A, B]` belongs to the conjugate ideal iff `[T, −A, −B] ∈ C`.
pub fn conjugate_ideal(c: &IdealOracle) -> Result<IdealOracle> {
    expect_kind(c, OracleKind::Complex)?;
    IdealOracle::complex(OracleDescriptor::Conjugate { inner: Box::new(c.clone()) })
}

struct AuditRow {
    direct: bool,
    conjugate: bool,
    square: bool,
}

/// Checks `C([T,A,B]) = C([T,−A,−B])` and `C([T⊕T, A⊕−A, B⊕−B]) ⇔ C([T,A,B])`
/// on every corpus item. Passing both certifies the oracle as self-conjugate
/// on this corpus.
pub fn audit_self_conjugacy(c: &IdealOracle, corpus: &[ComplexOperator], mode: SquareNorm) -> Result<VerificationReport> {
    expect_kind(c, OracleKind::Complex)?;
    let rows: Vec<AuditRow> = corpus
        .par_iter()
        .map(|op| {
            Ok(AuditRow {
                direct: decide_complex(c, op)?,
                conjugate: decide_complex(c, &op.conjugate())?,
                square: decide_complex(c, &op.cartesian_square(mode)?)?,
            })
        })
        .collect::<Result<_>>()?;
    let mut report = VerificationReport::new("ideal.self_conjugate");
    report.note(THRESHOLD_CAVEAT);
    let mut conj_failures = 0.0;
    let mut square_failures = 0.0;
    for (index, row) in rows.iter().enumerate() {
        if row.direct != row.conjugate {
            conj_failures += 1.0;
            report.violate(serde_json::json!({
                "check": "conjugation",
                "index": index,
                "accepts": row.direct,
                "accepts_conjugate": row.conjugate,
                "T": linalg::to_rows(&corpus[index].t),
                "A": linalg::to_rows(&corpus[index].a),
            }));
        }
        if row.direct != row.square {
            square_failures += 1.0;
            let direction = if row.square {
                "square member, operator not"
            } else {
                "operator member, square not"
            };
            report.violate(serde_json::json!({
                "check": "cartesian_square",
                "index": index,
                "direction": direction,
                "T": linalg::to_rows(&corpus[index].t),
                "A": linalg::to_rows(&corpus[index].a),
            }));
        }
    }
    report.residual("conjugation_mismatches", conj_failures);
    report.residual("square_mismatches", square_failures);
    report.residual("corpus_size", corpus.len() as f64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{gaussian_matrix, rng};

    fn l2(n: usize) -> NormedSpace {
        NormedSpace::euclidean(n)
    }

    fn real_op(t: Matrix) -> RealOperator {
        let (m, n) = t.shape();
        RealOperator::new(t, l2(n), l2(m)).unwrap()
    }

    fn norm(functional: Functional, bound: f64) -> OracleDescriptor {
        OracleDescriptor::Norm { functional, bound }
    }

    #[test]
    fn ideal_norm_examples() {
        let hs = ideal_norm(Functional::HilbertSchmidt, &Matrix::identity(2, 2), &l2(2), &l2(2)).unwrap();
        assert!((hs.value - 2f64.sqrt()).abs() < 1e-15 && hs.exact);
        let d = Matrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 4.0]);
        assert!((ideal_norm(Functional::TraceNorm, &d, &l2(2), &l2(2)).unwrap().value - 7.0).abs() < 1e-14);
        assert!((ideal_norm(Functional::OperatorNorm, &d, &l2(2), &l2(2)).unwrap().value - 4.0).abs() < 1e-14);
        let l1 = NormedSpace::lp(2, 1.0).unwrap();
        assert!(matches!(
            ideal_norm(Functional::HilbertSchmidt, &d, &l1, &l2(2)),
            Err(Error::UnsupportedNorm { .. })
        ));
    }

    #[test]
    fn doubling_laws() {
        let mut g = rng(11);
        for _ in 0..100 {
            let t = gaussian_matrix(3, 4, &mut g);
            let cx = realified(&real_op(t.clone())).unwrap();
            let hs = ideal_norm(Functional::HilbertSchmidt, &t, &l2(4), &l2(3)).unwrap().value;
            let hs2 = ideal_norm(Functional::HilbertSchmidt, &cx.t, &cx.domain, &cx.codomain).unwrap().value;
            assert!((hs2 - 2f64.sqrt() * hs).abs() <= 1e-10 * hs.max(1.0));
            let op = ideal_norm(Functional::OperatorNorm, &t, &l2(4), &l2(3)).unwrap().value;
            let op2 = ideal_norm(Functional::OperatorNorm, &cx.t, &cx.domain, &cx.codomain).unwrap().value;
            assert!((op2 - op).abs() <= 1e-10 * op.max(1.0));
            assert_eq!(linalg::numerical_rank(&cx.t), 2 * linalg::numerical_rank(&t));
        }
    }

    #[test]
    fn transform_examples() {
        let rank1 = IdealOracle::real(OracleDescriptor::Rank { r: 1 }).unwrap();
        let rc = complexify_ideal(&rank1).unwrap();
        let s = crate::natural_i_operator(&l2(1)).unwrap();
        let id = RespectingOperator::identity(&s);
        assert!(!decide_respecting(&rc, &id).unwrap());

        let hs2 = IdealOracle::real(norm(Functional::HilbertSchmidt, 2.0)).unwrap();
        let s2 = crate::natural_i_operator(&l2(2)).unwrap();
        // Identity on the complexified plane: 4x4 identity under the halved Gram, HS = 2.
        assert!(decide_respecting(&complexify_ideal(&hs2).unwrap(), &RespectingOperator::identity(&s2)).unwrap());

        let c = IdealOracle::complex(norm(Functional::HilbertSchmidt, 2f64.sqrt())).unwrap();
        let cr = realify_ideal(&c).unwrap();
        assert!(decide_real(&cr, &real_op(Matrix::identity(1, 1))).unwrap());

        let c = IdealOracle::complex(OracleDescriptor::Rank { r: 1 }).unwrap();
        assert!(!decide_real(&realify_ideal(&c).unwrap(), &real_op(Matrix::from_element(1, 1, 1e-3))).unwrap());

        let all = IdealOracle::complex(OracleDescriptor::All).unwrap();
        assert!(decide_real(&realify_ideal(&all).unwrap(), &real_op(Matrix::identity(2, 2))).unwrap());

        assert!(matches!(complexify_ideal(&c), Err(Error::KindMismatch { .. })));
        assert!(matches!(realify_ideal(&rank1), Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn real_form_norm_switch() {
        let t = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let op = real_op(t.clone());
        let opnorm = ideal_norm(Functional::OperatorNorm, &t, &l2(2), &l2(2)).unwrap().value;
        // ‖T ⊕ T‖ = ‖T‖ under either norm, so operator-norm decisions agree
        // away from the boundary. The sum norm has no Gram matrix and its
        // estimate is a sampled lower bound.
        for bound in [0.9 * opnorm, opnorm + 1e-6] {
            let c = IdealOracle::complex(norm(Functional::OperatorNorm, bound)).unwrap();
            let integral = decide_real(&realify_ideal(&c).unwrap(), &op).unwrap();
            let sum = decide_real(&realify_ideal_with(&c, SumMode::Sum).unwrap(), &op).unwrap();
            assert_eq!(integral, sum);
            assert_eq!(integral, bound > opnorm);
        }
        // ‖x‖ + ‖y‖ is not Euclidean, so Hilbert–Schmidt is unavailable there.
        let c = IdealOracle::complex(norm(Functional::HilbertSchmidt, 10.0)).unwrap();
        assert!(decide_real(&realify_ideal(&c).unwrap(), &op).unwrap());
        assert!(matches!(
            decide_real(&realify_ideal_with(&c, SumMode::Sum).unwrap(), &op),
            Err(Error::UnsupportedNorm { .. })
        ));
        // The integral norm is the default when the field is omitted.
        let text = r#"{"kind":"real","descriptor":{"type":"real_form","inner":{"kind":"complex","descriptor":{"type":"all"}}}}"#;
        let parsed: IdealOracle = serde_json::from_str(text).unwrap();
        assert_eq!(parsed, realify_ideal(&IdealOracle::complex(OracleDescriptor::All).unwrap()).unwrap());
    }

    #[test]
    fn conjugate_oracle() {
        let s = crate::natural_i_operator(&l2(1)).unwrap();
        let id = ComplexOperator::from(&RespectingOperator::identity(&s));
        let sensitive = IdealOracle::complex(OracleDescriptor::Predicate {
            predicate: Predicate::DomainEntryPositive { row: -1, col: -2 },
        })
        .unwrap();
        let conj = conjugate_ideal(&sensitive).unwrap();
        assert!(decide_complex(&sensitive, &id).unwrap());
        assert!(!decide_complex(&conj, &id).unwrap());
        let twice = conjugate_ideal(&conj).unwrap();
        assert_eq!(decide_complex(&twice, &id).unwrap(), decide_complex(&sensitive, &id).unwrap());
        let none = IdealOracle::complex(OracleDescriptor::None).unwrap();
        assert!(!decide_complex(&conjugate_ideal(&none).unwrap(), &id).unwrap());
    }

    #[test]
    fn audit_examples() {
        let s = crate::natural_i_operator(&l2(2)).unwrap();
        let t = Matrix::from_row_slice(4, 4, &[
            1.0, 0.0, -2.0, 0.0, 0.0, 3.0, 0.0, 1.0, 2.0, 0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 3.0,
        ]);
        let op = morphisms::make_respecting(&s, &s, &t, &Default::default()).unwrap();
        let corpus = vec![ComplexOperator::from(&op), ComplexOperator::from(&RespectingOperator::identity(&s))];

        let all = IdealOracle::complex(OracleDescriptor::All).unwrap();
        assert!(audit_self_conjugacy(&all, &corpus, SquareNorm::Auto).unwrap().is_verified());
        let entries = IdealOracle::complex(OracleDescriptor::Predicate {
            predicate: Predicate::MaxAbsEntryAtMost { bound: 2.5 },
        })
        .unwrap();
        assert!(audit_self_conjugacy(&entries, &corpus, SquareNorm::Auto).unwrap().is_verified());

        let n = crate::natural_i_operator(&l2(1)).unwrap();
        let corpus = vec![ComplexOperator::from(&RespectingOperator::identity(&n))];
        let sensitive = IdealOracle::complex(OracleDescriptor::Predicate {
            predicate: Predicate::DomainEntryPositive { row: -1, col: -2 },
        })
        .unwrap();
        let report = audit_self_conjugacy(&sensitive, &corpus, SquareNorm::Auto).unwrap();
        assert!(!report.is_verified());
        assert_eq!(report.residuals["conjugation_mismatches"], 1.0);
        assert_eq!(report.residuals["square_mismatches"], 1.0);
        assert!(report.notes.iter().any(|n| n == THRESHOLD_CAVEAT));
    }

    #[test]
    fn oracle_json_roundtrip_and_validation() {
        let o = complexify_ideal(&IdealOracle::real(norm(Functional::TraceNorm, 3.0)).unwrap()).unwrap();
        let text = serde_json::to_string(&o).unwrap();
        assert!(text.contains("\"kind\":\"complex\""));
        let back: IdealOracle = serde_json::from_str(&text).unwrap();
        assert_eq!(back, o);
        let bad = r#"{"kind":"real","descriptor":{"type":"predicate","predicate":{"name":"natural_domain_only"}}}"#;
        assert!(serde_json::from_str::<IdealOracle>(bad).is_err());
        let bad = r#"{"kind":"complex","descriptor":{"type":"complexify","inner":{"kind":"complex","descriptor":{"type":"all"}}}}"#;
        assert!(serde_json::from_str::<IdealOracle>(bad).is_err());
        let bad = r#"{"kind":"real","descriptor":{"type":"norm","functional":"trace_norm","bound":-1}}"#;
        assert!(serde_json::from_str::<IdealOracle>(bad).is_err());
    }
}
