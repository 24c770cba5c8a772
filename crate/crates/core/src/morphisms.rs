//! Operators `[T, A, B]` that respect i-operators (`TA = BT`).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex_structures::{conjugate_structure, natural_i_operator, ComplexStructure};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::sampling;
use crate::spaces::NormedSpace;
use crate::tolerance::Tolerances;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorRepr")]
pub struct RespectingOperator {
    domain: ComplexStructure,
    codomain: ComplexStructure,
    #[serde(rename = "T", with = "linalg::rows")]
    t: Matrix,
    #[serde(skip_serializing)]
    respect_residual: f64,
}

#[derive(Deserialize)]
struct OperatorRepr {
    domain: ComplexStructure,
    codomain: ComplexStructure,
    #[serde(rename = "T", with = "linalg::rows")]
    t: Matrix,
}

impl TryFrom<OperatorRepr> for RespectingOperator {
    type Error = Error;

    fn try_from(r: OperatorRepr) -> Result<Self> {
        make_respecting(&r.domain, &r.codomain, &r.t, &Tolerances::default())
    }
}

impl RespectingOperator {
    pub fn domain(&self) -> &ComplexStructure {
        &self.domain
    }

    pub fn codomain(&self) -> &ComplexStructure {
        &self.codomain
    }

    pub fn matrix(&self) -> &Matrix {
        &self.t
    }

    pub fn respect_residual(&self) -> f64 {
        self.respect_residual
    }

    /// Wraps `t` with its measured residual and no tolerance check, for
    /// constructions whose respect property is being verified by the caller.
    pub fn assemble(domain: &ComplexStructure, codomain: &ComplexStructure, t: Matrix) -> Result<Self> {
        if t.shape() != (codomain.dim(), domain.dim()) {
            return Err(Error::ShapeMismatch(format!(
                "operator must be {}x{}, got {}x{}",
                codomain.dim(),
                domain.dim(),
                t.nrows(),
                t.ncols()
            )));
        }
        let (respect_residual, _, _) = respect_residual(&t, domain.operator(), codomain.operator());
        Ok(Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            t,
            respect_residual,
        })
    }

    pub fn identity(s: &ComplexStructure) -> Self {
        let n = s.dim();
        Self {
            domain: s.clone(),
            codomain: s.clone(),
            t: Matrix::identity(n, n),
            respect_residual: 0.0,
        }
    }
}

/// `‖TA − BT‖_max` with the position of the largest entry.
pub fn respect_residual(t: &Matrix, a: &Matrix, b: &Matrix) -> (f64, usize, usize) {
    linalg::max_abs_entry(&(t * a - b * t))
}

pub fn make_respecting(
    domain: &ComplexStructure,
    codomain: &ComplexStructure,
    t: &Matrix,
    tol: &Tolerances,
) -> Result<RespectingOperator> {
    if t.shape() != (codomain.dim(), domain.dim()) {
        return Err(Error::ShapeMismatch(format!(
            "operator must be {}x{}, got {}x{}",
            codomain.dim(),
            domain.dim(),
            t.nrows(),
            t.ncols()
        )));
    }
    if !linalg::is_finite(t) {
        return Err(Error::NonFinite);
    }
    let (residual, row, col) = respect_residual(t, domain.operator(), codomain.operator());
    if !(residual <= tol.alg) {
        return Err(Error::RespectViolation { residual, row, col });
    }
    Ok(RespectingOperator {
        domain: domain.clone(),
        codomain: codomain.clone(),
        t: t.clone(),
        respect_residual: residual,
    })
}

/// Canonical injections `J₁x = (x, 0)`, `J₂x = (0, x)` and surjections
/// `Q₁(x, y) = x`, `Q₂(x, y) = y` for `X ⊕ X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CanonicalMap {
    J1,
    J2,
    Q1,
    Q2,
}

impl CanonicalMap {
    pub fn matrix(self, base_dim: usize) -> Matrix {
        linalg::canonical(self, base_dim)
    }
}

/// `[T ⊕ T, N_X, N_Y]`.
pub fn complexify_operator(t: &Matrix, base_x: &NormedSpace, base_y: &NormedSpace) -> Result<RespectingOperator> {
    if t.shape() != (base_y.dim(), base_x.dim()) {
        return Err(Error::ShapeMismatch(format!(
            "operator must be {}x{}, got {}x{}",
            base_y.dim(),
            base_x.dim(),
            t.nrows(),
            t.ncols()
        )));
    }
    let domain = natural_i_operator(base_x)?;
    let codomain = natural_i_operator(base_y)?;
    let doubled = linalg::doubled(t);
    let (residual, _, _) = respect_residual(&doubled, domain.operator(), codomain.operator());
    Ok(RespectingOperator {
        domain,
        codomain,
        t: doubled,
        respect_residual: residual,
    })
}

/// `[T, −A, −B]`.
pub fn conjugate_operator(op: &RespectingOperator) -> RespectingOperator {
    RespectingOperator {
        domain: conjugate_structure(&op.domain),
        codomain: conjugate_structure(&op.codomain),
        t: op.t.clone(),
        respect_residual: op.respect_residual,
    }
}

/// `f ∘ g`; the codomain of `g` must be exactly the domain of `f`.
pub fn compose(f: &RespectingOperator, g: &RespectingOperator) -> Result<RespectingOperator> {
    if !g.codomain.same_as(&f.domain) {
        return Err(Error::StructureMismatch(
            "codomain of the inner operator differs from the domain of the outer one".into(),
        ));
    }
    let t = &f.t * &g.t;
    let (residual, _, _) = respect_residual(&t, g.domain.operator(), f.codomain.operator());
    Ok(RespectingOperator {
        domain: g.domain.clone(),
        codomain: f.codomain.clone(),
        t,
        respect_residual: residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotIsomorphism {
    NonSquare,
    Singular,
}

#[derive(Clone, Debug)]
pub enum IsomorphismOutcome {
    Yes {
        inverse: RespectingOperator,
        condition_number: f64,
    },
    No(NotIsomorphism),
}

pub fn is_isomorphism(op: &RespectingOperator) -> IsomorphismOutcome {
    if op.t.nrows() != op.t.ncols() {
        return IsomorphismOutcome::No(NotIsomorphism::NonSquare);
    }
    let sv = linalg::singular_values(&op.t);
    let (top, bottom) = (sv.first().copied().unwrap_or(0.0), sv.last().copied().unwrap_or(0.0));
    if !(top > 0.0 && bottom > linalg::RANK_RTOL * top) {
        return IsomorphismOutcome::No(NotIsomorphism::Singular);
    }
    let Some(inv) = op.t.clone().try_inverse() else {
        return IsomorphismOutcome::No(NotIsomorphism::Singular);
    };
    let (residual, _, _) = respect_residual(&inv, op.codomain.operator(), op.domain.operator());
    IsomorphismOutcome::Yes {
        inverse: RespectingOperator {
            domain: op.codomain.clone(),
            codomain: op.domain.clone(),
            t: inv,
            respect_residual: residual,
        },
        condition_number: top / bottom,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    /// `true` when computed from singular values rather than sampled.
    pub exact: bool,
}

pub fn operator_norm_estimate(op: &RespectingOperator, samples: usize, seed: u64) -> Result<NormEstimate> {
    operator_norm(&op.t, op.domain.space(), op.codomain.space(), samples, seed)
}

/// `‖T‖ : X → Y`. Exact (largest singular value after whitening by the Gram
/// factors) when both norms are Euclidean, otherwise the sampled lower bound
/// `max ‖Tx‖` over seeded unit vectors of `X`.
pub fn operator_norm(
    t: &Matrix,
    domain: &NormedSpace,
    codomain: &NormedSpace,
    samples: usize,
    seed: u64,
) -> Result<NormEstimate> {
    if t.shape() != (codomain.dim(), domain.dim()) {
        return Err(Error::ShapeMismatch("operator shape does not match spaces".into()));
    }
    if let (Some(gx), Some(gy)) = (domain.gram(), codomain.gram()) {
        let w = linalg::whitened(t, &gx, &gy)?;
        return Ok(NormEstimate {
            value: linalg::singular_values(&w).first().copied().unwrap_or(0.0),
            exact: true,
        });
    }
    let vectors = sampling::unit_vectors(domain, samples.max(1), seed)?;
    let values: Vec<f64> = vectors
        .par_iter()
        .map(|x| codomain.norm_slice((t * x).as_slice()))
        .collect::<Result<_>>()?;
    Ok(NormEstimate {
        value: values.into_iter().fold(0.0, f64::max),
        exact: false,
    })
}
