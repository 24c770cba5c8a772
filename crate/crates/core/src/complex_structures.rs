//! Real spaces equipped with an i-operator.
//!
//! `[X, A]` is accepted when `A² = −I` (checked exactly from the matrix) and
//! every rotation `αI + βA` with `α² + β² = 1` preserves the norm. For
//! Euclidean norms the second condition is the algebraic pair `AᵀGA = G`,
//! `GA` antisymmetric; otherwise it is sampled over seeded unit vectors and
//! equispaced angles.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::sampling;
use crate::spaces::{direct_sum, NormedSpace, SumMode, Vector};
use crate::tolerance::Tolerances;

/// Point where `|‖αx + βAx‖ − ‖x‖|` was largest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryWitness {
    pub x: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub residual: f64,
}

impl IsometryWitness {
    /// Recomputes the residual at this witness.
    pub fn evaluate(&self, space: &NormedSpace, a: &Matrix) -> Result<f64> {
        let x = Vector::from_column_slice(&self.x);
        let rotated = &x * self.alpha + (a * &x) * self.beta;
        Ok((space.norm(&rotated)? - space.norm(&x)?).abs())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub algebraic_residual: f64,
    pub isometry_residual: f64,
    pub samples_used: usize,
    pub exact: bool,
    pub witness: Option<IsometryWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationOptions {
    pub tolerances: Tolerances,
    pub vectors: usize,
    pub angles: usize,
    pub seed: u64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            vectors: 512,
            angles: 64,
            seed: 0,
        }
    }
}

/// A validated pair `[X, A]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StructureRepr")]
pub struct ComplexStructure {
    space: NormedSpace,
    #[serde(rename = "A", with = "linalg::rows")]
    a: Matrix,
    certificate: Certificate,
}

#[derive(Deserialize)]
struct StructureRepr {
    space: NormedSpace,
    #[serde(rename = "A", with = "linalg::rows")]
    a: Matrix,
}

impl TryFrom<StructureRepr> for ComplexStructure {
    type Error = Error;

    fn try_from(r: StructureRepr) -> Result<Self> {
        validate_i_operator(&r.space, &r.a, &ValidationOptions::default())
    }
}

impl ComplexStructure {
    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn operator(&self) -> &Matrix {
        &self.a
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Same space and bit-identical i-operator.
    pub fn same_as(&self, other: &ComplexStructure) -> bool {
        self.space == other.space && self.a == other.a
    }
}

pub fn validate_i_operator(
    space: &NormedSpace,
    a: &Matrix,
    opts: &ValidationOptions,
) -> Result<ComplexStructure> {
    let n = space.dim();
    if a.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!(
            "i-operator must be {n}x{n}, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if !linalg::is_finite(a) {
        return Err(Error::NonFinite);
    }
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let tol = opts.tolerances;
    let algebraic_residual = linalg::max_abs(&(a * a + Matrix::identity(n, n)));

    let mut certificate = match space.gram() {
        Some(g) => {
            let scale = linalg::max_abs(&g);
            let ga = &g * a;
            let invariance = linalg::max_deviation(&(a.transpose() * &ga), &g);
            let antisymmetry = linalg::max_abs(&(&ga + ga.transpose()));
            Certificate {
                algebraic_residual,
                isometry_residual: invariance.max(antisymmetry) / scale,
                samples_used: 0,
                exact: true,
                witness: None,
            }
        }
        None => {
            let (residual, witness, samples) = sampled_isometry(space, a, opts)?;
            Certificate {
                algebraic_residual,
                isometry_residual: residual,
                samples_used: samples,
                exact: false,
                witness: Some(witness),
            }
        }
    };

    let alg_fail = !(algebraic_residual <= tol.alg);
    let iso_fail = !(certificate.isometry_residual <= tol.iso);
    if alg_fail || iso_fail {
        if certificate.witness.is_none() {
            let (_, witness, samples) = sampled_isometry(space, a, opts)?;
            certificate.witness = Some(witness);
            certificate.samples_used = samples;
        }
        let reason = match (alg_fail, iso_fail) {
            (true, true) => format!(
                "A² + I residual {:e} and isometry residual {:e} exceed tolerance",
                algebraic_residual, certificate.isometry_residual
            ),
            (true, false) => format!("A² + I residual {algebraic_residual:e} exceeds {:e}", tol.alg),
            _ => format!(
                "isometry residual {:e} exceeds {:e}",
                certificate.isometry_residual, tol.iso
            ),
        };
        return Err(Error::InvalidIOperator {
            reason,
            certificate: Box::new(certificate),
        });
    }
    Ok(ComplexStructure {
        space: space.clone(),
        a: a.clone(),
        certificate,
    })
}

/// Worst `|‖αx + βAx‖ − ‖x‖|` over seeded unit vectors × equispaced angles.
/// The witness is the first sample, in (vector, angle) order, within rounding
/// of the worst.
fn sampled_isometry(
    space: &NormedSpace,
    a: &Matrix,
    opts: &ValidationOptions,
) -> Result<(f64, IsometryWitness, usize)> {
    let vectors = sampling::unit_vectors(space, opts.vectors.max(1), opts.seed)?;
    let angles: Vec<(f64, f64)> = (0..opts.angles.max(1))
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / opts.angles.max(1) as f64;
            (theta.cos(), theta.sin())
        })
        .collect();
    let table: Vec<Vec<f64>> = vectors
        .par_iter()
        .map(|x| -> Result<Vec<f64>> {
            let ax = a * x;
            let nx = space.norm_slice(x.as_slice())?;
            angles
                .iter()
                .map(|&(alpha, beta)| {
                    let v = x * alpha + &ax * beta;
                    Ok((space.norm_slice(v.as_slice())? - nx).abs())
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let residual = table.iter().flatten().fold(0.0_f64, |m, &r| m.max(r));
    // The first sample within rounding of the maximum, so the witness does
    // not depend on last-bit noise between symmetric samples.
    let near = residual - 1e-14 * residual.max(1.0);
    let (i, k) = table
        .iter()
        .enumerate()
        .find_map(|(i, row)| row.iter().position(|&r| r >= near).map(|k| (i, k)))
        .unwrap_or((0, 0));
    let witness = IsometryWitness {
        x: vectors[i].iter().copied().collect(),
        alpha: angles[k].0,
        beta: angles[k].1,
        residual: table[i][k],
    };
    Ok((residual, witness, vectors.len() * angles.len()))
}

/// `[X, −A]`; residuals are those of `[X, A]`.
pub fn conjugate_structure(s: &ComplexStructure) -> ComplexStructure {
    let mut certificate = s.certificate.clone();
    if let Some(w) = certificate.witness.as_mut() {
        w.beta = -w.beta;
    }
    ComplexStructure {
        space: s.space.clone(),
        a: -&s.a,
        certificate,
    }
}

/// `[X ⊕ X, N_X]` with the integral complexification norm and
/// `N_X(x₁, x₂) = (−x₂, x₁)`.
pub fn natural_i_operator(base: &NormedSpace) -> Result<ComplexStructure> {
    natural_i_operator_with(base, &ValidationOptions::default())
}

pub fn natural_i_operator_with(base: &NormedSpace, opts: &ValidationOptions) -> Result<ComplexStructure> {
    let space = direct_sum(base, base, SumMode::Complexification)?;
    validate_i_operator(&space, &linalg::natural_operator(base.dim()), opts)
}

/// `(α + iβ)·x := αx + βAx`.
pub fn complex_scalar_action(s: &ComplexStructure, alpha: f64, beta: f64, x: &Vector) -> Result<Vector> {
    s.space.check(x)?;
    Ok(x * alpha + (&s.a * x) * beta)
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found(ComplexStructure),
    /// `proof` is set only when non-existence is actually proved.
    NotFound {
        best_residual: Option<f64>,
        proof: Option<String>,
    },
}

/// Heuristic search for an i-operator on `space`.
///
/// Candidates are similarity transforms `P J P⁻¹` of the canonical block
/// rotation `J`, so `A² = −I` holds by construction; each restart draws a
/// random orthogonal `P` and runs coordinate descent on the entries of `P`
/// against a small sampled isometry residual. `budget` counts objective
/// evaluations. A candidate is returned only after full validation.
pub fn search_i_operator(
    space: &NormedSpace,
    budget: usize,
    seed: u64,
    opts: &ValidationOptions,
) -> Result<SearchOutcome> {
    let n = space.dim();
    if n % 2 != 0 {
        return Ok(SearchOutcome::NotFound {
            best_residual: None,
            proof: Some("odd dimension".into()),
        });
    }
    let canonical = linalg::natural_operator(n / 2);

    // Euclidean norms: the canonical rotation transported by the Cholesky
    // factor of G is an isometry.
    if let Some(l) = space.gram().as_ref().and_then(linalg::cholesky_lower) {
        if let Some(l_inv_t) = l.transpose().try_inverse() {
            let candidate = l_inv_t * &canonical * l.transpose();
            if let Ok(s) = validate_i_operator(space, &candidate, opts) {
                return Ok(SearchOutcome::Found(s));
            }
        }
    }

    let mut rng = sampling::rng(seed);
    let probe = ValidationOptions {
        vectors: 24,
        angles: 16,
        seed: rng.random(),
        ..*opts
    };
    let probe_vectors = sampling::unit_vectors(space, probe.vectors, probe.seed)?;
    let objective = |p: &Matrix| -> Result<Option<(f64, Matrix)>> {
        let Some(p_inv) = p.clone().try_inverse() else {
            return Ok(None);
        };
        let a = p * &canonical * p_inv;
        if !linalg::is_finite(&a) {
            return Ok(None);
        }
        let mut worst = linalg::max_abs(&(&a * &a + Matrix::identity(n, n)));
        for x in &probe_vectors {
            let ax = &a * x;
            let nx = space.norm(x)?;
            for k in 0..probe.angles {
                let theta = 2.0 * PI * k as f64 / probe.angles as f64;
                let v = x * theta.cos() + &ax * theta.sin();
                worst = worst.max((space.norm(&v)? - nx).abs());
            }
        }
        Ok(Some((worst, a)))
    };

    let mut evals = 0usize;
    let mut best: Option<(f64, Matrix)> = None;
    while evals < budget {
        let mut p = sampling::orthogonal_matrix(n, &mut rng);
        let Some((mut f, mut a)) = objective(&p)? else {
            continue;
        };
        evals += 1;
        let mut step = 0.25;
        'descent: while step > 1e-10 && evals < budget {
            let mut improved = false;
            for i in 0..n {
                for j in 0..n {
                    for sign in [1.0, -1.0] {
                        if evals >= budget {
                            break 'descent;
                        }
                        let mut trial = p.clone();
                        trial[(i, j)] += sign * step;
                        evals += 1;
                        if let Some((ft, at)) = objective(&trial)? {
                            if ft < f {
                                (p, f, a) = (trial, ft, at);
                                improved = true;
                            }
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if f <= opts.tolerances.iso {
            if let Ok(s) = validate_i_operator(space, &a, opts) {
                return Ok(SearchOutcome::Found(s));
            }
        }
        if best.as_ref().is_none_or(|(bf, _)| f < *bf) {
            best = Some((f, a));
        }
    }

    let best_residual = match best {
        None => None,
        Some((_, a)) => Some(match validate_i_operator(space, &a, opts) {
            Ok(s) => return Ok(SearchOutcome::Found(s)),
            Err(Error::InvalidIOperator { certificate, .. }) => {
                certificate.algebraic_residual.max(certificate.isometry_residual)
            }
            Err(e) => return Err(e),
        }),
    };
    Ok(SearchOutcome::NotFound {
        best_residual,
        proof: None,
    })
}
