//! Dense matrix helpers on top of `nalgebra`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::morphisms::CanonicalMap;

pub type Matrix = DMatrix<f64>;

/// Numerical-rank threshold relative to the largest singular value.
pub const RANK_RTOL: f64 = 1e-10;

pub fn from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::ShapeMismatch("ragged matrix rows".into()));
    }
    let m = Matrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    if !is_finite(&m) {
        return Err(Error::NonFinite);
    }
    Ok(m)
}

pub fn to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn is_finite(m: &Matrix) -> bool {
    m.iter().all(|v| v.is_finite())
}

/// Largest absolute entry (0 for an empty matrix).
pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Largest absolute entry with its position; ties resolve to the first in
/// row-major order.
pub fn max_abs_entry(m: &Matrix) -> (f64, usize, usize) {
    let mut best = (0.0, 0, 0);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)].abs();
            if v > best.0 || v.is_nan() {
                best = (v, i, j);
            }
        }
    }
    best
}

/// `max |a - b|` over entries; `INFINITY` when the shapes differ.
pub fn max_deviation(a: &Matrix, b: &Matrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

/// `T ⊕ T : (x₁, x₂) ↦ (Tx₁, Tx₂)`.
pub fn doubled(t: &Matrix) -> Matrix {
    block_diag(t, t)
}

/// The natural i-operator `N(x₁, x₂) = (−x₂, x₁)` on `ℝⁿ ⊕ ℝⁿ`.
pub fn natural_operator(n: usize) -> Matrix {
    let mut out = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        out[(i, n + i)] = -1.0;
        out[(n + i, i)] = 1.0;
    }
    out
}

/// Complex conjugation `C(y₁, y₂) = (y₁, −y₂)` on `ℝⁿ ⊕ ℝⁿ`.
pub fn conjugation(n: usize) -> Matrix {
    Matrix::from_fn(2 * n, 2 * n, |i, j| match (i == j, i < n) {
        (true, true) => 1.0,
        (true, false) => -1.0,
        _ => 0.0,
    })
}

pub fn canonical(role: CanonicalMap, n: usize) -> Matrix {
    let eye = Matrix::identity(n, n);
    match role {
        CanonicalMap::J1 => {
            let mut m = Matrix::zeros(2 * n, n);
            m.view_mut((0, 0), (n, n)).copy_from(&eye);
            m
        }
        CanonicalMap::J2 => {
            let mut m = Matrix::zeros(2 * n, n);
            m.view_mut((n, 0), (n, n)).copy_from(&eye);
            m
        }
        CanonicalMap::Q1 => {
            let mut m = Matrix::zeros(n, 2 * n);
            m.view_mut((0, 0), (n, n)).copy_from(&eye);
            m
        }
        CanonicalMap::Q2 => {
            let mut m = Matrix::zeros(n, 2 * n);
            m.view_mut((0, n), (n, n)).copy_from(&eye);
            m
        }
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn numerical_rank(m: &Matrix) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > RANK_RTOL * top).count(),
        _ => 0,
    }
}

/// Orthonormal basis (as columns) of the column space of `m`.
///
/// The rank comes from the singular values; the basis is the dominant
/// eigenvectors of `m mᵀ`, each signed so that its largest-magnitude entry is
/// positive. nalgebra's SVD with singular vectors requested can lose accuracy
/// on rank-deficient input, the values-only path and the symmetric eigen
/// solver do not.
pub fn range_basis(m: &Matrix) -> Matrix {
    let n = m.nrows();
    let rank = numerical_rank(m);
    if rank == 0 {
        return Matrix::zeros(n, 0);
    }
    let eig = (m * m.transpose()).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut basis = Matrix::zeros(n, rank);
    for (c, &k) in order.iter().take(rank).enumerate() {
        let mut col = eig.eigenvectors.column(k).clone_owned();
        let mut pivot = 0;
        for i in 0..n {
            if col[i].abs() > col[pivot].abs() + 1e-14 {
                pivot = i;
            }
        }
        if col[pivot] < 0.0 {
            col.neg_mut();
        }
        basis.set_column(c, &col);
    }
    basis
}

/// Lower Cholesky factor `L` with `G = L Lᵀ`, or `None` when `G` is not
/// numerically positive definite.
pub fn cholesky_lower(g: &Matrix) -> Option<Matrix> {
    g.clone().cholesky().map(|c| c.l())
}

/// `L_Yᵀ T L_X⁻ᵀ`: the matrix of `T` in coordinates where both Gram
/// matrices become the identity.
pub fn whitened(t: &Matrix, gram_domain: &Matrix, gram_codomain: &Matrix) -> Result<Matrix> {
    let lx = cholesky_lower(gram_domain)
        .ok_or_else(|| Error::InvalidDescriptor("domain Gram matrix not positive definite".into()))?;
    let ly = cholesky_lower(gram_codomain)
        .ok_or_else(|| Error::InvalidDescriptor("codomain Gram matrix not positive definite".into()))?;
    let lx_inv_t = lx
        .transpose()
        .try_inverse()
        .ok_or_else(|| Error::NotInvertible("Cholesky factor".into()))?;
    Ok(ly.transpose() * t * lx_inv_t)
}

/// Row-major `[[..], ..]` serde adapter for matrices.
pub mod rows {
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    use super::Matrix;

    pub fn serialize<S: Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
        super::to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        super::from_rows(&rows).map_err(D::Error::custom)
    }
}

/// Optional variant of [`rows`].
pub mod rows_opt {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Matrix;

    pub fn serialize<S: Serializer>(m: &Option<Matrix>, s: S) -> Result<S::Ok, S::Error> {
        m.as_ref().map(super::to_rows).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Matrix>, D::Error> {
        use serde::de::Error as _;
        Option::<Vec<Vec<f64>>>::deserialize(d)?
            .map(|rows| super::from_rows(&rows).map_err(D::Error::custom))
            .transpose()
    }
}
