//! Seeded sampling helpers. All randomness in the crate flows through a
//! `ChaCha8Rng` seeded from a `u64`, so every sampled check is reproducible.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::Matrix;
use crate::spaces::{NormedSpace, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vector {
    Vector::from_fn(dim, |_, _| rng.sample(StandardNormal))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Random orthogonal matrix (QR of a Gaussian matrix with the sign of `R`'s
/// diagonal folded into `Q`).
pub fn orthogonal_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    let qr = gaussian_matrix(dim, dim, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// `count` unit vectors of `space`: the normalized coordinate vectors first,
/// then normalized Gaussian samples.
pub fn unit_vectors(space: &NormedSpace, count: usize, seed: u64) -> Result<Vec<Vector>> {
    let dim = space.dim();
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count.min(dim) {
        let mut e = Vector::zeros(dim);
        e[i] = 1.0;
        let n = space.norm(&e)?;
        out.push(e / n);
    }
    while out.len() < count {
        let g = gaussian_vector(dim, &mut rng);
        let n = space.norm(&g)?;
        if n > 0.0 {
            out.push(g / n);
        }
    }
    Ok(out)
}
