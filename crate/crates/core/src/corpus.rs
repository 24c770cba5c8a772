//! Seeded generators for test and scenario corpora.

use rand::Rng;

use crate::complex_structures::{natural_i_operator, validate_i_operator, ComplexStructure, ValidationOptions};
use crate::error::Result;
use crate::ideals::{ComplexOperator, RealOperator};
use crate::linalg::{self, Matrix};
use crate::morphisms::{make_respecting, RespectingOperator};
use crate::sampling::gaussian_matrix;
use crate::spaces::{direct_sum, NormedSpace, SumMode};
use crate::tolerance::Tolerances;

/// Symmetric positive definite with eigenvalues in roughly `[0.5, n + 2]`.
pub fn random_spd<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let b = gaussian_matrix(n, n, rng) / (n as f64).sqrt();
    let g = b.transpose() * &b + Matrix::identity(n, n) * 0.5;
    (&g + g.transpose()) * 0.5
}

pub fn random_euclidean<R: Rng + ?Sized>(n: usize, rng: &mut R) -> NormedSpace {
    NormedSpace::quadratic(random_spd(n, rng)).expect("random Gram matrix is positive definite")
}

/// An integer matrix of determinant one and its integer inverse, as a
/// product of `2n` elementary shears.
pub fn unimodular<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Matrix, Matrix) {
    let mut p = Matrix::identity(n, n);
    let mut inv = Matrix::identity(n, n);
    if n < 2 {
        return (p, inv);
    }
    for _ in 0..2 * n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        // P ← P(I + cEᵢⱼ): column j gains c·column i.
        let updated = p.column(j) + p.column(i) * c;
        p.column_mut(j).copy_from(&updated);
        // P⁻¹ ← (I − cEᵢⱼ)P⁻¹: row i loses c·row j.
        let row = inv.row(j) * c;
        let updated = inv.row(i) - row;
        inv.row_mut(i).copy_from(&updated);
    }
    (p, inv)
}

/// `[X, A]` with `A = P N P⁻¹` for integer unimodular `P`, and `X` the
/// Euclidean space pulled back through `P⁻¹`. `A² = −I` holds exactly in
/// floating point.
pub fn integer_structure<R: Rng + ?Sized>(half_dim: usize, rng: &mut R) -> Result<ComplexStructure> {
    let n = 2 * half_dim;
    let (p, inv) = unimodular(n, rng);
    let a = &p * linalg::natural_operator(half_dim) * &inv;
    let space = NormedSpace::pullback(inv, &NormedSpace::euclidean(n))?;
    validate_i_operator(&space, &a, &ValidationOptions::default())
}

/// `T = R − BRA` for integer `R`: `TA = RA + BR = BT` without rounding when
/// the i-operators are integer.
pub fn integer_respecting<R: Rng + ?Sized>(
    domain: &ComplexStructure,
    codomain: &ComplexStructure,
    rng: &mut R,
) -> Result<RespectingOperator> {
    let r = Matrix::from_fn(codomain.dim(), domain.dim(), |_, _| rng.random_range(-2..=2) as f64);
    let t = &r - codomain.operator() * &r * domain.operator();
    make_respecting(domain, codomain, &t, &Tolerances::default())
}

/// Same construction for arbitrary structures, with Gaussian `R`.
pub fn random_respecting<R: Rng + ?Sized>(
    domain: &ComplexStructure,
    codomain: &ComplexStructure,
    rng: &mut R,
) -> Result<RespectingOperator> {
    let r = gaussian_matrix(codomain.dim(), domain.dim(), rng);
    let t = &r - codomain.operator() * &r * domain.operator();
    make_respecting(domain, codomain, &t, &Tolerances::default())
}

/// `[[P, −Q], [Q, P]]`, which commutes with `N_Y`; `P` is kept near `2I` so
/// the result is well conditioned.
pub fn complex_linear_iso<R: Rng + ?Sized>(half_dim: usize, rng: &mut R) -> Matrix {
    let m = half_dim;
    let p = Matrix::identity(m, m) * 2.0 + gaussian_matrix(m, m, rng) * (0.4 / (m as f64).sqrt());
    let q = gaussian_matrix(m, m, rng) * (0.4 / (m as f64).sqrt());
    let mut s = Matrix::zeros(2 * m, 2 * m);
    s.view_mut((0, 0), (m, m)).copy_from(&p);
    s.view_mut((0, m), (m, m)).copy_from(&-&q);
    s.view_mut((m, 0), (m, m)).copy_from(&q);
    s.view_mut((m, m), (m, m)).copy_from(&p);
    s
}

/// An isomorphism `S : [X, A] → [Y ⊕ Y, N_Y]` for a random Euclidean `Y` of
/// dimension `half_dim`: `X = Y ⊕ Y` normed through `S`, `A = S⁻¹ N_Y S`.
pub fn complexification_iso<R: Rng + ?Sized>(half_dim: usize, rng: &mut R) -> Result<RespectingOperator> {
    let y = random_euclidean(half_dim, rng);
    let target = natural_i_operator(&y)?;
    let s = complex_linear_iso(half_dim, rng);
    let inv = s.clone().try_inverse().expect("diagonally dominant");
    let a = &inv * target.operator() * &s;
    let space = NormedSpace::pullback(s.clone(), target.space())?;
    let domain = validate_i_operator(&space, &a, &ValidationOptions::default())?;
    make_respecting(&domain, &target, &s, &Tolerances::default())
}

/// Random operators between random Euclidean spaces of dimensions `1..=max_dim`.
pub fn real_operators<R: Rng + ?Sized>(count: usize, max_dim: usize, rng: &mut R) -> Vec<RealOperator> {
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=max_dim);
            let m = rng.random_range(1..=max_dim);
            let x = random_euclidean(n, rng);
            let y = random_euclidean(m, rng);
            let t = gaussian_matrix(m, n, rng);
            RealOperator::new(t, x, y).expect("shapes agree")
        })
        .collect()
}

/// Integer respecting operators between integer structures, mixed with
/// complexified real operators.
pub fn complex_operators<R: Rng + ?Sized>(count: usize, max_half_dim: usize, rng: &mut R) -> Result<Vec<ComplexOperator>> {
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        if k % 4 == 3 {
            let n = rng.random_range(1..=max_half_dim);
            let m = rng.random_range(1..=max_half_dim);
            let x = NormedSpace::euclidean(n);
            let y = NormedSpace::euclidean(m);
            let t = linalg::doubled(&gaussian_matrix(m, n, rng));
            out.push(ComplexOperator {
                t,
                a: linalg::natural_operator(n),
                b: linalg::natural_operator(m),
                domain: direct_sum(&x, &x, SumMode::Complexification)?,
                codomain: direct_sum(&y, &y, SumMode::Complexification)?,
            });
        } else {
            let dom = integer_structure(rng.random_range(1..=max_half_dim), rng)?;
            let cod = integer_structure(rng.random_range(1..=max_half_dim), rng)?;
            out.push(ComplexOperator::from(&integer_respecting(&dom, &cod, rng)?));
        }
    }
    Ok(out)
}
