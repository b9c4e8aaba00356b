//! Numeric checks of the local model maps.
//!
//! A [`ModelMapSpec`] describes an equivariant map `f` between models
//! `C^n × T^l × R^m → C^{n'} × T^{l'} × R^{m'}` through its component
//! functions `A_j(s, x)` and `x'_j(s, x)`. From it we assemble `f`, the
//! induced map `G` on the cut-side models, and sample the commuting squares
//! that relate them.

pub mod expr;
pub mod generate;
pub mod maps;
pub mod point;
pub mod verify;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::lattice::IntegerMatrix;

pub use expr::Expr;
pub use maps::{assemble_f, induce_g, AssembledF, InducedG};
pub use point::{eval_cstd, eval_theta, CutPoint, ModelPoint};
pub use verify::{hadamard_positivity, verify_all, verify_descent, VerifyOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid shape: {0}")]
    Shape(String),
    #[error("invalid torus automorphism: {0}")]
    Rho(String),
    #[error("invalid expression: {0}")]
    Expr(String),
    #[error("outside the model domain: {0}")]
    Domain(String),
    #[error("component {component} is singular at this point (|A| = {modulus:e})")]
    Singular { component: usize, modulus: f64 },
    #[error("component {component} should be unit length, |A| = {modulus}")]
    NotUnit { component: usize, modulus: f64 },
    #[error("x'_{component} is not real (imaginary part {imag:e})")]
    NotReal { component: usize, imag: f64 },
}

/// Dimensions `(n, l, m)` of the source model, `(n', l', m')` of the target
/// and the number `k` of facet directions that correspond.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Shape {
    pub n: usize,
    pub l: usize,
    pub m: usize,
    pub n_prime: usize,
    pub l_prime: usize,
    pub m_prime: usize,
    pub k: usize,
}

impl Shape {
    pub fn d(&self) -> usize {
        self.n + self.l
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n + self.l != self.n_prime + self.l_prime {
            return Err(ModelError::Shape(format!(
                "torus ranks differ: n+l = {}, n'+l' = {}",
                self.n + self.l,
                self.n_prime + self.l_prime
            )));
        }
        if self.n + self.m != self.n_prime + self.m_prime {
            return Err(ModelError::Shape(format!(
                "orbit space dimensions differ: n+m = {}, n'+m' = {}",
                self.n + self.m,
                self.n_prime + self.m_prime
            )));
        }
        if self.k > self.n.min(self.n_prime) {
            return Err(ModelError::Shape(format!("k = {} exceeds min(n, n')", self.k)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelMapSpec {
    pub shape: Shape,
    /// Torus automorphism; row `j` holds the exponents of the `j`-th
    /// component character.
    pub rho: IntegerMatrix,
    /// `A_1, …, A_d`.
    pub a: Vec<Expr>,
    pub x_prime: Vec<Expr>,
    /// Replacements for some `A_j` used only when building `G`. A spec with
    /// overrides describes a lift that does not match `f`, which is how
    /// negative controls are written.
    pub lift_overrides: BTreeMap<usize, Expr>,
}

impl ModelMapSpec {
    pub fn new(shape: Shape, rho: IntegerMatrix, a: Vec<Expr>, x_prime: Vec<Expr>) -> Result<Self, ModelError> {
        let spec = Self { shape, rho, a, x_prime, lift_overrides: BTreeMap::new() };
        spec.validate()?;
        Ok(spec)
    }

    /// The identity map of `C^n × T^l × R^m`.
    pub fn identity(n: usize, l: usize, m: usize) -> Self {
        let shape = Shape { n, l, m, n_prime: n, l_prime: l, m_prime: m, k: n };
        let a = vec![Expr::constant(1.0); n + l];
        let x_prime = (0..m).map(Expr::X).collect();
        Self::new(shape, IntegerMatrix::identity(n + l), a, x_prime).expect("identity spec is valid")
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let s = &self.shape;
        s.validate()?;
        let d = s.d();
        if self.rho.rows() != d || self.rho.cols() != d {
            return Err(ModelError::Rho(format!("expected {d}x{d}, got {}x{}", self.rho.rows(), self.rho.cols())));
        }
        if d > 0 && !self.rho.is_unimodular() {
            return Err(ModelError::Rho("determinant is not ±1".into()));
        }
        for j in 0..s.k {
            let fixed = (0..d).all(|i| self.rho[(i, j)] == if i == j { BigInt::one() } else { BigInt::from(0) });
            if !fixed {
                return Err(ModelError::Rho(format!("does not fix the first {} circle factors (column {j})", s.k)));
            }
        }
        if let Some(e) = self.rho.to_rows().iter().flatten().find(|e| e.abs() > BigInt::from(i32::MAX)) {
            return Err(ModelError::Rho(format!("exponent {e} is too large to evaluate")));
        }
        if self.a.len() != d {
            return Err(ModelError::Shape(format!("expected {d} A-components, got {}", self.a.len())));
        }
        if self.x_prime.len() != s.m_prime {
            return Err(ModelError::Shape(format!("expected {} x'-components, got {}", s.m_prime, self.x_prime.len())));
        }
        if let Some(j) = self.lift_overrides.keys().find(|&&j| j >= d) {
            return Err(ModelError::Shape(format!("lift override for component {j}, but d = {d}")));
        }
        for e in self.a.iter().chain(&self.x_prime).chain(self.lift_overrides.values()) {
            let (ns, nx) = e.arity();
            if ns > s.n || nx > s.m {
                return Err(ModelError::Expr(format!("references s_{} or x_{} beyond n = {}, m = {}", ns.saturating_sub(1), nx.saturating_sub(1), s.n, s.m)));
            }
        }
        Ok(())
    }

    /// Row-major exponents of `rho` as machine integers.
    pub(crate) fn rho_exponents(&self) -> Vec<Vec<i32>> {
        self.rho
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|e| e.to_i32().expect("validated range")).collect())
            .collect()
    }

    pub fn from_json(v: &Value) -> Result<Self, ModelError> {
        let obj = v.as_object().ok_or_else(|| ModelError::Shape("model spec must be an object".into()))?;
        let field = |k: &str| obj.get(k).ok_or_else(|| ModelError::Shape(format!("missing field {k:?}")));
        let shape_v = field("shape")?;
        let dim = |k: &str| -> Result<usize, ModelError> {
            let x = shape_v.get(k).ok_or_else(|| ModelError::Shape(format!("shape is missing {k:?}")))?;
            match x {
                Value::Number(n) => n.as_u64().and_then(|n| usize::try_from(n).ok()),
                Value::String(s) => s.trim().parse().ok(),
                _ => None,
            }
            .ok_or_else(|| ModelError::Shape(format!("shape field {k:?} must be a non-negative integer")))
        };
        let shape = Shape {
            n: dim("n")?,
            l: dim("l")?,
            m: dim("m")?,
            n_prime: dim("n_prime")?,
            l_prime: dim("l_prime")?,
            m_prime: dim("m_prime")?,
            k: dim("k")?,
        };
        shape.validate()?;
        let rho_rows: Vec<Vec<BigInt>> = field("rho")?
            .as_array()
            .ok_or_else(|| ModelError::Rho("rho must be an array of rows".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| ModelError::Rho("rho rows must be arrays".into()))?
                    .iter()
                    .map(|e| crate::doc::parse_bigint(e).map_err(ModelError::Rho))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        let d = shape.d();
        let rho = IntegerMatrix::from_rows_with_cols(rho_rows, d).map_err(|e| ModelError::Rho(e.to_string()))?;
        let exprs = |k: &str| -> Result<Vec<Expr>, ModelError> {
            match obj.get(k) {
                None => Ok(Vec::new()),
                Some(Value::Array(a)) => a.iter().map(Expr::from_json).collect(),
                Some(_) => Err(ModelError::Expr(format!("{k:?} must be an array of expressions"))),
            }
        };
        let mut lift_overrides = BTreeMap::new();
        if let Some(o) = obj.get("lift_overrides") {
            let o = o.as_object().ok_or_else(|| ModelError::Expr("lift_overrides must be an object".into()))?;
            for (k, e) in o {
                let j: usize = k.parse().map_err(|_| ModelError::Expr(format!("lift override key {k:?}")))?;
                lift_overrides.insert(j, Expr::from_json(e)?);
            }
        }
        let spec = Self { shape, rho, a: exprs("a")?, x_prime: exprs("x_prime")?, lift_overrides };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Value {
        let s = &self.shape;
        let mut v = json!({
            "version": "1",
            "kind": "model_spec",
            "shape": {"n": s.n, "l": s.l, "m": s.m, "n_prime": s.n_prime, "l_prime": s.l_prime, "m_prime": s.m_prime, "k": s.k},
            "rho": self.rho.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "a": self.a.iter().map(Expr::to_json).collect::<Vec<_>>(),
            "x_prime": self.x_prime.iter().map(Expr::to_json).collect::<Vec<_>>(),
        });
        if !self.lift_overrides.is_empty() {
            v["lift_overrides"] =
                self.lift_overrides.iter().map(|(j, e)| (j.to_string(), e.to_json())).collect::<serde_json::Map<_, _>>().into();
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_rules() {
        let ok = Shape { n: 2, l: 0, m: 1, n_prime: 1, l_prime: 1, m_prime: 2, k: 1 };
        assert!(ok.validate().is_ok());
        assert!(Shape { l_prime: 0, ..ok }.validate().is_err());
        assert!(Shape { m_prime: 1, ..ok }.validate().is_err());
        assert!(Shape { k: 2, ..ok }.validate().is_err());
    }

    #[test]
    fn rho_must_fix_leading_factors() {
        let shape = Shape { n: 2, l: 0, m: 0, n_prime: 2, l_prime: 0, m_prime: 0, k: 1 };
        let a = vec![Expr::constant(1.0); 2];
        let swap = IntegerMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert!(matches!(ModelMapSpec::new(shape, swap, a.clone(), vec![]), Err(ModelError::Rho(_))));
        let shear = IntegerMatrix::from_i64(&[&[1, 2], &[0, -1]]);
        assert!(ModelMapSpec::new(shape, shear, a.clone(), vec![]).is_ok());
        let bad = IntegerMatrix::from_i64(&[&[1, 0], &[0, 2]]);
        assert!(ModelMapSpec::new(shape, bad, a, vec![]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let spec = ModelMapSpec::identity(1, 1, 1);
        let back = ModelMapSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
        let mut v = spec.to_json();
        v["a"][0] = json!(["var", "s", 3]);
        assert!(matches!(ModelMapSpec::from_json(&v), Err(ModelError::Expr(_))));
    }
}
