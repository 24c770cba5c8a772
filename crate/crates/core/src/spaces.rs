//! Finite-dimensional real normed spaces.
//!
//! A [`NormedSpace`] is a dimension plus a [`NormDescriptor`]. Descriptors are
//! validated once at construction; evaluation afterwards only checks the
//! vector it is given.

use std::cell::RefCell;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::quadrature::{periodic_mean, zero_angles, QuadratureConfig};
use crate::sampling;

pub type Vector = DVector<f64>;

/// Norm semantics on `ℝⁿ`; `n` itself lives on the owning [`NormedSpace`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum NormDescriptor {
    /// `(Σ |xᵢ|ᵖ)^{1/p}`, max norm for `p = ∞`.
    #[serde(rename = "lp")]
    Lp {
        #[serde(with = "exponent")]
        p: f64,
    },
    /// `(Σ wᵢ |xᵢ|ᵖ)^{1/p}`, `max wᵢ|xᵢ|` for `p = ∞`.
    #[serde(rename = "wlp")]
    WeightedLp {
        #[serde(with = "exponent")]
        p: f64,
        weights: Vec<f64>,
    },
    /// `√(xᵀ G x)`.
    #[serde(rename = "quad")]
    EuclideanQuadratic {
        #[serde(rename = "G", with = "linalg::rows")]
        gram: Matrix,
    },
    /// `max_k |⟨f_k, x⟩|`.
    #[serde(rename = "poly")]
    Polyhedral { functionals: Vec<Vec<f64>> },
    /// Integral complexification norm of the base on `ℝⁿ ⊕ ℝⁿ`.
    #[serde(rename = "cplx")]
    ComplexificationOfBase { base: Box<NormDescriptor> },
    /// `‖(x, y)‖ = ‖x‖_left + ‖y‖_right`.
    #[serde(rename = "sum")]
    SumNorm {
        left: Box<NormedSpace>,
        right: Box<NormedSpace>,
    },
    /// `‖x‖ = ‖M x‖_base` for an injective `M`; restricts a norm to a
    /// subspace given by a basis, or transports it along an isomorphism.
    #[serde(rename = "pull")]
    Pullback {
        #[serde(with = "linalg::rows")]
        map: Matrix,
        base: Box<NormDescriptor>,
    },
}

/// Real normed space `(ℝⁿ, ‖·‖)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr")]
pub struct NormedSpace {
    dim: usize,
    norm: NormDescriptor,
}

#[derive(Deserialize)]
struct SpaceRepr {
    dim: usize,
    norm: NormDescriptor,
}

impl TryFrom<SpaceRepr> for NormedSpace {
    type Error = Error;

    fn try_from(r: SpaceRepr) -> Result<Self> {
        NormedSpace::new(r.dim, r.norm)
    }
}

/// How two spaces are glued into a direct sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SumMode {
    /// Integral complexification norm; both halves must be the same space.
    Complexification,
    /// `‖x‖ + ‖y‖`.
    Sum,
}

impl NormedSpace {
    pub fn new(dim: usize, norm: NormDescriptor) -> Result<Self> {
        validate(&norm, dim)?;
        Ok(Self { dim, norm })
    }

    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        Self::new(dim, NormDescriptor::Lp { p })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self {
            dim,
            norm: NormDescriptor::Lp { p: 2.0 },
        }
    }

    pub fn quadratic(gram: Matrix) -> Result<Self> {
        let dim = gram.nrows();
        Self::new(dim, NormDescriptor::EuclideanQuadratic { gram })
    }

    /// `‖x‖ = ‖map · x‖` in `base`.
    pub fn pullback(map: Matrix, base: &NormedSpace) -> Result<Self> {
        if map.nrows() != base.dim {
            return Err(Error::DimensionMismatch {
                expected: base.dim,
                found: map.nrows(),
            });
        }
        let dim = map.ncols();
        Self::new(
            dim,
            NormDescriptor::Pullback {
                map,
                base: Box::new(base.norm.clone()),
            },
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn descriptor(&self) -> &NormDescriptor {
        &self.norm
    }

    pub fn norm(&self, x: &Vector) -> Result<f64> {
        self.check(x)?;
        eval(&self.norm, x.as_slice(), &QuadratureConfig::default())
    }

    /// Unchecked evaluation for callers that already validated `x`.
    pub(crate) fn norm_slice(&self, x: &[f64]) -> Result<f64> {
        eval(&self.norm, x, &QuadratureConfig::default())
    }

    pub(crate) fn check(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// Gram matrix `G` with `‖x‖² = xᵀGx`, when the norm is Euclidean.
    pub fn gram(&self) -> Option<Matrix> {
        gram_of(&self.norm, self.dim)
    }

    /// Half of an even-dimensional complexification space.
    pub fn complexification_base(&self) -> Option<NormedSpace> {
        match &self.norm {
            NormDescriptor::ComplexificationOfBase { base } => Some(NormedSpace {
                dim: self.dim / 2,
                norm: (**base).clone(),
            }),
            _ => None,
        }
    }

    /// Largest homogeneity / triangle-inequality defect over `samples`
    /// seeded random pairs, relative to the norms involved.
    pub fn spot_check(&self, samples: usize, seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0_f64;
        for _ in 0..samples {
            let x = sampling::gaussian_vector(self.dim, &mut rng);
            let y = sampling::gaussian_vector(self.dim, &mut rng);
            let c = sampling::gaussian_vector(1, &mut rng)[0] * 3.0;
            let (nx, ny) = (self.norm(&x)?, self.norm(&y)?);
            let nsum = self.norm(&(&x + &y))?;
            let nscaled = self.norm(&(&x * c))?;
            let scale = nx.max(ny).max(1.0);
            worst = worst
                .max((nsum - nx - ny).max(0.0) / scale)
                .max((nscaled - c.abs() * nx).abs() / scale.max(c.abs() * nx));
            if nx <= 0.0 {
                worst = f64::INFINITY;
            }
        }
        Ok(worst)
    }
}

/// `(1/2π ∫_{−π}^{π} ‖x cos φ + y sin φ‖² dφ)^{1/2}` in `base`.
pub fn complexification_norm(base: &NormedSpace, x: &Vector, y: &Vector) -> Result<f64> {
    complexification_norm_with(base, x, y, &QuadratureConfig::default())
}

pub fn complexification_norm_with(
    base: &NormedSpace,
    x: &Vector,
    y: &Vector,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    base.check(x)?;
    base.check(y)?;
    complexification_eval(&base.norm, x.as_slice(), y.as_slice(), cfg)
}

pub fn direct_sum(left: &NormedSpace, right: &NormedSpace, mode: SumMode) -> Result<NormedSpace> {
    let dim = left.dim + right.dim;
    match mode {
        SumMode::Complexification => {
            if left != right {
                return Err(Error::InvalidDescriptor(
                    "complexification requires identical halves".into(),
                ));
            }
            NormedSpace::new(
                dim,
                NormDescriptor::ComplexificationOfBase {
                    base: Box::new(left.norm.clone()),
                },
            )
        }
        SumMode::Sum => NormedSpace::new(
            dim,
            NormDescriptor::SumNorm {
                left: Box::new(left.clone()),
                right: Box::new(right.clone()),
            },
        ),
    }
}

fn valid_exponent(p: f64) -> bool {
    p >= 1.0 && !p.is_nan()
}

fn validate(desc: &NormDescriptor, dim: usize) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidDescriptor(m.to_string()));
    if dim == 0 {
        return bad("dimension must be positive");
    }
    match desc {
        NormDescriptor::Lp { p } => {
            if !valid_exponent(*p) {
                return bad("exponent must satisfy p >= 1");
            }
        }
        NormDescriptor::WeightedLp { p, weights } => {
            if !valid_exponent(*p) {
                return bad("exponent must satisfy p >= 1");
            }
            if weights.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: weights.len(),
                });
            }
            if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                return bad("weights must be positive and finite");
            }
        }
        NormDescriptor::EuclideanQuadratic { gram } => {
            if gram.shape() != (dim, dim) {
                return bad("Gram matrix must be dim x dim");
            }
            let scale = linalg::max_abs(gram).max(f64::MIN_POSITIVE);
            if linalg::max_deviation(gram, &gram.transpose()) > 1e-12 * scale {
                return bad("Gram matrix must be symmetric");
            }
            let smallest = gram.clone().symmetric_eigen().eigenvalues.min();
            if smallest <= 0.0 || linalg::cholesky_lower(gram).is_none() {
                return bad("Gram matrix must be positive definite");
            }
        }
        NormDescriptor::Polyhedral { functionals } => {
            if functionals.iter().any(|f| f.len() != dim) {
                return bad("functional length differs from dimension");
            }
            if functionals.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
            let m = Matrix::from_fn(functionals.len(), dim, |i, j| functionals[i][j]);
            if functionals.len() < dim || linalg::numerical_rank(&m) < dim {
                return bad("polyhedral functionals must span the dual space");
            }
        }
        NormDescriptor::ComplexificationOfBase { base } => {
            if dim % 2 != 0 {
                return bad("complexification needs an even dimension");
            }
            validate(base, dim / 2)?;
        }
        NormDescriptor::SumNorm { left, right } => {
            if left.dim + right.dim != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: left.dim + right.dim,
                });
            }
            validate(&left.norm, left.dim)?;
            validate(&right.norm, right.dim)?;
        }
        NormDescriptor::Pullback { map, base } => {
            if map.ncols() != dim || map.nrows() == 0 {
                return bad("pullback map must have dim columns");
            }
            if !linalg::is_finite(map) {
                return Err(Error::NonFinite);
            }
            if linalg::numerical_rank(map) < dim {
                return bad("pullback map must be injective");
            }
            validate(base, map.nrows())?;
        }
    }
    Ok(())
}

fn gram_of(desc: &NormDescriptor, dim: usize) -> Option<Matrix> {
    match desc {
        NormDescriptor::Lp { p } if *p == 2.0 || dim == 1 => Some(Matrix::identity(dim, dim)),
        NormDescriptor::WeightedLp { p, weights } if *p == 2.0 => Some(Matrix::from_diagonal(
            &DVector::from_column_slice(weights),
        )),
        NormDescriptor::WeightedLp { p, weights } if dim == 1 => {
            // (w|x|ᵖ)^{1/p} = w^{1/p}|x|; for p = ∞ this is w|x|.
            let factor = if p.is_infinite() { weights[0] } else { weights[0].powf(1.0 / p) };
            Some(Matrix::from_element(1, 1, factor * factor))
        }
        NormDescriptor::EuclideanQuadratic { gram } => Some(gram.clone()),
        NormDescriptor::ComplexificationOfBase { base } => {
            let g = gram_of(base, dim / 2)?;
            Some(linalg::block_diag(&g, &g) * 0.5)
        }
        NormDescriptor::Pullback { map, base } => {
            let g = gram_of(base, map.nrows())?;
            let pulled = map.transpose() * g * map;
            Some((&pulled + pulled.transpose()) * 0.5)
        }
        _ => None,
    }
}

fn eval(desc: &NormDescriptor, x: &[f64], cfg: &QuadratureConfig) -> Result<f64> {
    Ok(match desc {
        NormDescriptor::Lp { p } => lp(x.iter().map(|v| v.abs()), *p),
        NormDescriptor::WeightedLp { p, weights } => {
            if p.is_infinite() {
                x.iter().zip(weights).fold(0.0, |m, (v, w)| f64::max(m, w * v.abs()))
            } else {
                // (Σ wᵢ|xᵢ|ᵖ)^{1/p} = ℓp norm of (wᵢ^{1/p} xᵢ)
                lp(x.iter().zip(weights).map(|(v, w)| w.powf(1.0 / p) * v.abs()), *p)
            }
        }
        NormDescriptor::EuclideanQuadratic { gram } => {
            let n = x.len();
            let mut acc = 0.0;
            for i in 0..n {
                let mut row = 0.0;
                for j in 0..n {
                    row += gram[(i, j)] * x[j];
                }
                acc += x[i] * row;
            }
            acc.max(0.0).sqrt()
        }
        NormDescriptor::Polyhedral { functionals } => functionals
            .iter()
            .map(|f| f.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().abs())
            .fold(0.0, f64::max),
        NormDescriptor::ComplexificationOfBase { base } => {
            let h = x.len() / 2;
            complexification_eval(base, &x[..h], &x[h..], cfg)?
        }
        NormDescriptor::SumNorm { left, right } => {
            let h = left.dim;
            eval(&left.norm, &x[..h], cfg)? + eval(&right.norm, &x[h..], cfg)?
        }
        NormDescriptor::Pullback { map, base } => {
            let image = apply(map, x);
            eval(base, &image, cfg)?
        }
    })
}

fn apply(map: &Matrix, x: &[f64]) -> Vec<f64> {
    (0..map.nrows())
        .map(|i| (0..map.ncols()).map(|j| map[(i, j)] * x[j]).sum())
        .collect()
}

fn lp(abs: impl Iterator<Item = f64> + Clone, p: f64) -> f64 {
    let top = abs.clone().fold(0.0, f64::max);
    if p.is_infinite() || top == 0.0 {
        return top;
    }
    if p == 1.0 {
        return abs.sum();
    }
    if p == 2.0 {
        return top * abs.map(|v| (v / top) * (v / top)).sum::<f64>().sqrt();
    }
    top * abs.map(|v| (v / top).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn complexification_eval(
    base: &NormDescriptor,
    x: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if x.iter().chain(y).all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    let mut kinks = Vec::new();
    collect_kinks(base, x, y, &mut kinks);
    let scratch = RefCell::new(vec![0.0; x.len()]);
    let mean = periodic_mean(
        |phi| {
            let (s, c) = phi.sin_cos();
            let mut v = scratch.borrow_mut();
            for ((vi, a), b) in v.iter_mut().zip(x).zip(y) {
                *vi = a * c + b * s;
            }
            let n = eval(base, &v, cfg)?;
            Ok(n * n)
        },
        &kinks,
        cfg,
    )?;
    Ok(mean.max(0.0).sqrt())
}

/// Angles where `φ ↦ ‖x cos φ + y sin φ‖²` may lose smoothness.
fn collect_kinks(desc: &NormDescriptor, x: &[f64], y: &[f64], out: &mut Vec<f64>) {
    fn zeros(a: f64, b: f64, out: &mut Vec<f64>) {
        if let Some(z) = zero_angles(a, b) {
            out.extend(z);
        }
    }
    match desc {
        NormDescriptor::Lp { p } if *p == 2.0 || x.len() == 1 => {}
        NormDescriptor::WeightedLp { p, .. } if *p == 2.0 || x.len() == 1 => {}
        NormDescriptor::EuclideanQuadratic { .. } => {}
        NormDescriptor::Lp { p } => {
            for i in 0..x.len() {
                zeros(x[i], y[i], out);
            }
            if p.is_infinite() {
                for i in 0..x.len() {
                    for j in i + 1..x.len() {
                        zeros(x[i] - x[j], y[i] - y[j], out);
                        zeros(x[i] + x[j], y[i] + y[j], out);
                    }
                }
            }
        }
        NormDescriptor::WeightedLp { p, weights } => {
            for i in 0..x.len() {
                zeros(x[i], y[i], out);
            }
            if p.is_infinite() {
                for i in 0..x.len() {
                    for j in i + 1..x.len() {
                        let (wi, wj) = (weights[i], weights[j]);
                        zeros(wi * x[i] - wj * x[j], wi * y[i] - wj * y[j], out);
                        zeros(wi * x[i] + wj * x[j], wi * y[i] + wj * y[j], out);
                    }
                }
            }
        }
        NormDescriptor::Polyhedral { functionals } => {
            let pair = |f: &Vec<f64>| -> (f64, f64) {
                (
                    f.iter().zip(x).map(|(a, b)| a * b).sum(),
                    f.iter().zip(y).map(|(a, b)| a * b).sum(),
                )
            };
            let pairs: Vec<(f64, f64)> = functionals.iter().map(pair).collect();
            for (k, &(a, b)) in pairs.iter().enumerate() {
                zeros(a, b, out);
                for &(c, d) in &pairs[k + 1..] {
                    zeros(a - c, b - d, out);
                    zeros(a + c, b + d, out);
                }
            }
        }
        // The inner average smooths the kinks of the base; the uniform rule
        // handles what is left or reports non-convergence.
        NormDescriptor::ComplexificationOfBase { .. } => {}
        NormDescriptor::SumNorm { left, .. } => {
            let h = left.dim;
            for (xs, ys, d) in [
                (&x[..h], &y[..h], &left.norm),
                (&x[h..], &y[h..], sum_right(desc)),
            ] {
                collect_kinks(d, xs, ys, out);
                if let Some((a, b)) = dependent_direction(xs, ys) {
                    zeros(a, b, out);
                }
            }
        }
        NormDescriptor::Pullback { map, base } => {
            let (mx, my) = (apply(map, x), apply(map, y));
            collect_kinks(base, &mx, &my, out);
        }
    }
}

fn sum_right(desc: &NormDescriptor) -> &NormDescriptor {
    match desc {
        NormDescriptor::SumNorm { right, .. } => &right.norm,
        _ => unreachable!("sum_right on a non-sum descriptor"),
    }
}

/// For linearly dependent nonzero `(x, y)`, coefficients `(a, b)` with
/// `x cos φ + y sin φ = (a cos φ + b sin φ) u`.
fn dependent_direction(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let (xx, yy, xy) = (dot(x, x), dot(y, y), dot(x, y));
    if xx == 0.0 && yy == 0.0 {
        return None;
    }
    // Cauchy–Schwarz equality up to rounding; a single coordinate is always
    // dependent.
    if x.len() > 1 && xx * yy - xy * xy > 1e-12 * xx * yy {
        return None;
    }
    Some(if xx >= yy { (1.0, xy / xx) } else { (xy / yy, 1.0) })
}

mod exponent {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &f64, s: S) -> Result<S::Ok, S::Error> {
        if p.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*p)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(p),
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "Infinity") => Ok(f64::INFINITY),
            Raw::Text(t) => Err(de::Error::custom(format!("invalid exponent {t:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn one_dimensional_summand_contributes_kinks() {
        // In one coordinate the two halves are always parallel; rounding
        // used to hide that, the kink was missed and the rule did not
        // converge for some of these vectors.
        let sum = direct_sum(
            &NormedSpace::lp(2, 1.0).unwrap(),
            &NormedSpace::euclidean(1),
            SumMode::Sum,
        )
        .unwrap();
        let c = direct_sum(&sum, &sum, SumMode::Complexification).unwrap();
        let mut g = crate::sampling::rng(0);
        for _ in 0..600 {
            let x = crate::sampling::gaussian_vector(6, &mut g);
            assert!(c.norm(&x).is_ok(), "{:?}", x.as_slice());
        }
    }

    #[test]
    fn basic_norm_values() {
        assert_eq!(NormedSpace::lp(2, 2.0).unwrap().norm(&v(&[3.0, 4.0])).unwrap(), 5.0);
        assert_eq!(NormedSpace::lp(2, 1.0).unwrap().norm(&v(&[1.0, -2.0])).unwrap(), 3.0);
        let sup = NormedSpace::new(
            2,
            NormDescriptor::Polyhedral {
                functionals: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            },
        )
        .unwrap();
        assert_eq!(sup.norm(&v(&[3.0, -4.0])).unwrap(), 4.0);
        let max = NormedSpace::lp(3, f64::INFINITY).unwrap();
        assert_eq!(max.norm(&v(&[1.0, -7.5, 2.0])).unwrap(), 7.5);
    }

    #[test]
    fn norm_errors() {
        let s = NormedSpace::euclidean(2);
        assert!(matches!(
            s.norm(&v(&[1.0, 2.0, 3.0])),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(matches!(s.norm(&v(&[f64::NAN, 0.0])), Err(Error::NonFinite)));
    }

    #[test]
    fn descriptor_validation() {
        assert!(NormedSpace::lp(2, 0.5).is_err());
        assert!(NormedSpace::lp(0, 2.0).is_err());
        let not_spd = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(NormedSpace::quadratic(not_spd).is_err());
        let asym = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 2.0]);
        assert!(NormedSpace::quadratic(asym).is_err());
        let degenerate = NormDescriptor::Polyhedral {
            functionals: vec![vec![1.0, 1.0], vec![2.0, 2.0]],
        };
        assert!(NormedSpace::new(2, degenerate).is_err());
        let weights = NormDescriptor::WeightedLp {
            p: 2.0,
            weights: vec![1.0, -1.0],
        };
        assert!(NormedSpace::new(2, weights).is_err());
        let cplx = NormDescriptor::ComplexificationOfBase {
            base: Box::new(NormDescriptor::Lp { p: 2.0 }),
        };
        assert!(NormedSpace::new(3, cplx).is_err());
    }

    #[test]
    fn euclidean_complexification_closed_form() {
        let base = NormedSpace::euclidean(2);
        let one = complexification_norm(&base, &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
        assert!((one - 1.0).abs() < 1e-15);
        let half = complexification_norm(&base, &v(&[1.0, 0.0]), &v(&[0.0, 0.0])).unwrap();
        assert!((half - 0.5_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_pair_short_circuits() {
        let base = NormedSpace::lp(3, 1.0).unwrap();
        let z = Vector::zeros(3);
        assert_eq!(complexification_norm(&base, &z, &z).unwrap(), 0.0);
    }

    #[test]
    fn l1_complexification_matches_analytic_integral() {
        let base = NormedSpace::lp(2, 1.0).unwrap();
        let got = complexification_norm(&base, &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
        let expected = (1.0 + 2.0 / PI).sqrt();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }

    // Frozen from mpmath adaptive quadrature at 30 digits, split at the kinks.
    #[test]
    fn non_euclidean_complexification_reference_values() {
        let l3 = NormedSpace::lp(2, 3.0).unwrap();
        let got = complexification_norm(&l3, &v(&[1.0, 0.0]), &v(&[0.0, 0.5])).unwrap();
        assert!((got - 0.760_235_371_835_882_8).abs() < 1e-12, "{got}");
        let linf = NormedSpace::lp(2, f64::INFINITY).unwrap();
        let got = complexification_norm(&linf, &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
        assert!((got - 0.904_604_823_214_971_9).abs() < 1e-12, "{got}");
    }

    #[test]
    fn direct_sum_modes() {
        let l2 = NormedSpace::euclidean(2);
        let c = direct_sum(&l2, &l2, SumMode::Complexification).unwrap();
        assert_eq!(c.dim(), 4);
        assert!((c.norm(&v(&[1.0, 0.0, 0.0, 1.0])).unwrap() - 1.0).abs() < 1e-15);

        let l1 = NormedSpace::lp(1, 1.0).unwrap();
        let s = direct_sum(&l1, &l1, SumMode::Sum).unwrap();
        assert_eq!(s.norm(&v(&[1.0, -2.0])).unwrap(), 3.0);

        let l2_3 = NormedSpace::euclidean(3);
        assert!(direct_sum(&l2, &l2_3, SumMode::Complexification).is_err());
    }

    #[test]
    fn gram_of_complexification_halves_the_base() {
        let l2 = NormedSpace::euclidean(2);
        let c = direct_sum(&l2, &l2, SumMode::Complexification).unwrap();
        assert_eq!(c.gram().unwrap(), Matrix::identity(4, 4) * 0.5);
        assert!(NormedSpace::lp(2, 1.0).unwrap().gram().is_none());
        assert_eq!(NormedSpace::lp(1, 1.0).unwrap().gram().unwrap()[(0, 0)], 1.0);
    }

    #[test]
    fn sum_with_dependent_halves_converges() {
        let l2 = NormedSpace::euclidean(2);
        let s = direct_sum(&l2, &l2, SumMode::Sum).unwrap();
        let x = v(&[1.0, 0.0, 0.0, 1.0]);
        let y = v(&[0.0, 0.0, 1.0, 0.0]);
        // left half: (cos φ, 0) → |cos φ|; right half: (sin φ, cos φ) → 1.
        let got = complexification_norm(&s, &x, &y).unwrap();
        let expected = (0.5 + 4.0 / PI + 1.0_f64).sqrt();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn descriptor_json_roundtrip() {
        let json = r#"{"dim":2,"norm":{"kind":"lp","p":"inf"}}"#;
        let s: NormedSpace = serde_json::from_str(json).unwrap();
        assert_eq!(s.descriptor(), &NormDescriptor::Lp { p: f64::INFINITY });
        assert_eq!(serde_json::to_string(&s).unwrap(), json);

        let q = r#"{"dim":2,"norm":{"kind":"quad","G":[[2.0,0.5],[0.5,1.0]]}}"#;
        let s: NormedSpace = serde_json::from_str(q).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), q);

        let bad = r#"{"dim":2,"norm":{"kind":"quad","G":[[1.0,2.0],[2.0,1.0]]}}"#;
        assert!(serde_json::from_str::<NormedSpace>(bad).is_err());
    }
}
