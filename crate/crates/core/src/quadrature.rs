//! Mean value of a 2π-periodic function over one period.
//!
//! Smooth integrands use the uniform (trapezoid) rule, which is spectrally
//! accurate for periodic analytic functions and exact for trigonometric
//! polynomials of degree below the node count. Integrands with known kinks
//! (norms built from absolute values) are split at the kinks and each smooth
//! panel is integrated with Gauss–Legendre, since the uniform rule only
//! converges at O(h²) across a kink.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub initial_nodes: usize,
    pub max_nodes: usize,
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            initial_nodes: 64,
            max_nodes: 4096,
            rel_tol: 1e-10,
        }
    }
}

const GL_LEVELS: usize = 8;
const GL_FIRST: usize = 8;

struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn gauss_legendre(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    GaussRule { nodes, weights }
}

fn gauss_rule(level: usize) -> &'static GaussRule {
    static RULES: [OnceLock<GaussRule>; GL_LEVELS] = [const { OnceLock::new() }; GL_LEVELS];
    RULES[level].get_or_init(|| gauss_legendre(GL_FIRST << level))
}

fn converged(prev: f64, next: f64, rel_tol: f64) -> bool {
    let diff = (next - prev).abs();
    diff <= rel_tol * next.abs() || diff == 0.0
}

fn relative_change(prev: f64, next: f64) -> f64 {
    let diff = (next - prev).abs();
    if next == 0.0 {
        diff
    } else {
        diff / next.abs()
    }
}

/// `(1/2π) ∫_{−π}^{π} f(φ) dφ`.
///
/// `kinks` lists angles where `f` may fail to be smooth; an empty list selects
/// the uniform rule.
pub fn periodic_mean<F>(f: F, kinks: &[f64], cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let kinks = normalize_kinks(kinks);
    if kinks.is_empty() {
        trapezoid_mean(&f, cfg)
    } else {
        panel_mean(&f, &kinks, cfg)
    }
}

fn trapezoid_mean<F>(f: &F, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut n = cfg.initial_nodes.max(1);
    let h = |n: usize| 2.0 * PI / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        sum += f(-PI + k as f64 * h(n))?;
    }
    let mut mean = sum / n as f64;
    let mut change = f64::INFINITY;
    while 2 * n <= cfg.max_nodes {
        let step = h(2 * n);
        let mut added = 0.0;
        for k in 0..n {
            added += f(-PI + (2 * k + 1) as f64 * step)?;
        }
        sum += added;
        n *= 2;
        let next = sum / n as f64;
        change = relative_change(mean, next);
        if converged(mean, next, cfg.rel_tol) {
            return Ok(next);
        }
        mean = next;
    }
    Err(Error::QuadratureNonConvergence {
        nodes: n,
        last_change: change,
    })
}

fn panel_mean<F>(f: &F, kinks: &[f64], cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let panels: Vec<(f64, f64)> = (0..kinks.len())
        .map(|i| {
            let a = kinks[i];
            let b = if i + 1 < kinks.len() {
                kinks[i + 1]
            } else {
                kinks[0] + 2.0 * PI
            };
            (a, b)
        })
        .collect();
    let level_mean = |level: usize| -> Result<f64> {
        let rule = gauss_rule(level);
        let mut total = 0.0;
        for &(a, b) in &panels {
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let mut s = 0.0;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                s += w * f(mid + half * x)?;
            }
            total += half * s;
        }
        Ok(total / (2.0 * PI))
    };
    let mut mean = level_mean(0)?;
    let mut change = f64::INFINITY;
    for level in 1..GL_LEVELS {
        let next = level_mean(level)?;
        change = relative_change(mean, next);
        if converged(mean, next, cfg.rel_tol) {
            return Ok(next);
        }
        mean = next;
    }
    Err(Error::QuadratureNonConvergence {
        nodes: panels.len() * (GL_FIRST << (GL_LEVELS - 1)),
        last_change: change,
    })
}

/// Reduce angles into `[−π, π)`, sort and drop near-duplicates.
fn normalize_kinks(kinks: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = kinks
        .iter()
        .filter(|k| k.is_finite())
        .map(|&k| {
            let r = (k + PI).rem_euclid(2.0 * PI) - PI;
            if r >= PI {
                -PI
            } else {
                r
            }
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|b, a| (*b - *a).abs() < 1e-13);
    if out.len() > 1 && (out[0] + 2.0 * PI - out[out.len() - 1]).abs() < 1e-13 {
        out.pop();
    }
    out
}

/// Angles in `[−π, π)` where `a cos φ + b sin φ` vanishes (none when
/// `a = b = 0`).
pub fn zero_angles(a: f64, b: f64) -> Option<[f64; 2]> {
    if a == 0.0 && b == 0.0 {
        return None;
    }
    // a cos φ + b sin φ = r cos(φ − ψ), ψ = atan2(b, a); zeros at ψ ± π/2.
    let psi = b.atan2(a);
    Some([psi + 0.5 * PI, psi - 0.5 * PI])
}
