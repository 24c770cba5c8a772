use serde::{Deserialize, Serialize};

/// Tolerance set shared by the validators.
///
/// `abs`/`rel` are the generic comparison pair; `alg` bounds algebraic
/// residuals (`‖A² + I‖`, `‖TA − BT‖`), `iso` bounds isometry residuals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
    pub alg: f64,
    pub iso: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            abs: 1e-12,
            rel: 1e-9,
            alg: 1e-9,
            iso: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs + self.rel * a.abs().max(b.abs())
    }
}
