//! Points of the local models and the two standard maps between them.

use num_complex::Complex64;

use super::ModelError;

/// Drift allowed for coordinates that should lie on the unit circle.
pub const UNIT_TOL: f64 = 1e-12;

/// A point of `C^n × T^l × R^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelPoint {
    pub z: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub x: Vec<f64>,
}

/// A point of `R_{>=0}^n × R^m × T^{n+l}`, the cut-side model.
#[derive(Clone, Debug, PartialEq)]
pub struct CutPoint {
    pub s: Vec<f64>,
    pub x: Vec<f64>,
    pub tau: Vec<Complex64>,
}

impl ModelPoint {
    pub fn validate(&self) -> Result<(), ModelError> {
        check_unit(&self.b)
    }
}

impl CutPoint {
    pub fn validate(&self) -> Result<(), ModelError> {
        if let Some(v) = self.s.iter().find(|v| !(**v >= 0.0)) {
            return Err(ModelError::Domain(format!("negative orbit coordinate {v}")));
        }
        check_unit(&self.tau)
    }
}

fn check_unit(t: &[Complex64]) -> Result<(), ModelError> {
    match t.iter().find(|c| (c.norm() - 1.0).abs() > UNIT_TOL) {
        Some(c) => Err(ModelError::Domain(format!("torus coordinate {c} is off the unit circle"))),
        None => Ok(()),
    }
}

/// The model quotient map: `(z, b, x) ↦ (|z_1|², …, |z_n|²; x)`.
pub fn eval_theta(p: &ModelPoint) -> (Vec<f64>, Vec<f64>) {
    (p.z.iter().map(Complex64::norm_sqr).collect(), p.x.clone())
}

/// The model cutting map: `z_j = √s_j τ_j` for `j ≤ n`, remaining torus
/// coordinates pass through.
pub fn eval_cstd(s: &[f64], x: &[f64], tau: &[Complex64]) -> Result<ModelPoint, ModelError> {
    if tau.len() < s.len() {
        return Err(ModelError::Domain(format!("{} torus coordinates for {} orbit coordinates", tau.len(), s.len())));
    }
    if let Some(v) = s.iter().find(|v| !(**v >= 0.0)) {
        return Err(ModelError::Domain(format!("negative orbit coordinate {v}")));
    }
    let n = s.len();
    Ok(ModelPoint {
        z: s.iter().zip(tau).map(|(s, t)| t * s.sqrt()).collect(),
        b: tau[n..].to_vec(),
        x: x.to_vec(),
    })
}

/// `Π(s, x, τ) = (s, x)`.
pub fn project(p: &CutPoint) -> (Vec<f64>, Vec<f64>) {
    (p.s.clone(), p.x.clone())
}
