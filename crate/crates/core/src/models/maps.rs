//! The map `f` assembled from a spec, and the map `G` it induces on the
//! cut-side models.

use num_complex::Complex64;

use super::point::{eval_cstd, CutPoint, ModelPoint, UNIT_TOL};
use super::{Expr, ModelError, ModelMapSpec};

/// Below this modulus an `A_j` that must not vanish is treated as zero.
pub const SINGULAR_TOL: f64 = 1e-12;

/// `ρ(τ)_j = ∏_i τ_i^{ρ_{ji}}`.
fn character(row: &[i32], tau: &[Complex64]) -> Complex64 {
    row.iter().zip(tau).fold(Complex64::new(1.0, 0.0), |acc, (&e, t)| acc * t.powi(e))
}

fn real_part(e: &Expr, component: usize, s: &[f64], x: &[f64]) -> Result<f64, ModelError> {
    let v = e.eval(s, x);
    if v.im.abs() > SINGULAR_TOL * v.re.abs().max(1.0) {
        return Err(ModelError::NotReal { component, imag: v.im });
    }
    Ok(v.re)
}

fn nonvanishing(a: Complex64, component: usize) -> Result<Complex64, ModelError> {
    let modulus = a.norm();
    if modulus.is_nan() || modulus < SINGULAR_TOL {
        return Err(ModelError::Singular { component, modulus });
    }
    Ok(a)
}

fn unit(a: Complex64, component: usize) -> Result<Complex64, ModelError> {
    let modulus = a.norm();
    if modulus.is_nan() || (modulus - 1.0).abs() > UNIT_TOL {
        return Err(ModelError::NotUnit { component, modulus });
    }
    Ok(a)
}

/// The equivariant map `f : C^n × T^l × R^m → C^{n'} × T^{l'} × R^{m'}`.
#[derive(Clone, Debug)]
pub struct AssembledF<'a> {
    spec: &'a ModelMapSpec,
    rho: Vec<Vec<i32>>,
}

pub fn assemble_f(spec: &ModelMapSpec) -> Result<AssembledF<'_>, ModelError> {
    spec.validate()?;
    Ok(AssembledF { spec, rho: spec.rho_exponents() })
}

impl AssembledF<'_> {
    /// Torus coordinates `τ` recovered from a point: phases of `z_j` for
    /// `k ≤ j < n` followed by `c`. The first `k` entries are unused and set
    /// to 1.
    fn angular(&self, p: &ModelPoint) -> Result<Vec<Complex64>, ModelError> {
        let sh = &self.spec.shape;
        let mut tau = vec![Complex64::new(1.0, 0.0); sh.k];
        for (j, z) in p.z.iter().enumerate().skip(sh.k) {
            let r = z.norm();
            if r == 0.0 {
                return Err(ModelError::Domain(format!("z_{j} must be nonzero off the corresponding facets")));
            }
            tau.push(z / r);
        }
        tau.extend_from_slice(&p.b);
        Ok(tau)
    }

    pub fn eval(&self, p: &ModelPoint) -> Result<ModelPoint, ModelError> {
        let sh = &self.spec.shape;
        if p.z.len() != sh.n || p.b.len() != sh.l || p.x.len() != sh.m {
            return Err(ModelError::Domain("point does not match the source shape".into()));
        }
        p.validate()?;
        let (s, x) = super::eval_theta(p);
        let tau = self.angular(p)?;
        let d = sh.d();
        let mut z = Vec::with_capacity(sh.n_prime);
        let mut b = Vec::with_capacity(sh.l_prime);
        for j in 0..d {
            let a = self.spec.a[j].eval(&s, &x);
            let r = character(&self.rho[j], &tau);
            if j < sh.k {
                z.push(p.z[j] * r * a);
            } else if j < sh.n_prime {
                z.push(r * nonvanishing(a, j)?);
            } else {
                b.push(r * unit(a, j)?);
            }
        }
        let x = self.spec.x_prime.iter().enumerate().map(|(j, e)| real_part(e, j, &s, &x)).collect::<Result<_, _>>()?;
        Ok(ModelPoint { z, b, x })
    }

    /// `f` recomputed from `G` through the cutting maps: pick any `τ` over
    /// the point and push `G(s, x, τ)` down. The choice of `τ_j` where
    /// `z_j = 0` does not matter.
    pub fn via_lift(&self, g: &InducedG<'_>, p: &ModelPoint) -> Result<ModelPoint, ModelError> {
        let (s, x) = super::eval_theta(p);
        let tau: Vec<Complex64> = p
            .z
            .iter()
            .map(|z| if z.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { z / z.norm() })
            .chain(p.b.iter().copied())
            .collect();
        let q = g.eval(&CutPoint { s, x, tau })?;
        eval_cstd(&q.s, &q.x, &q.tau)
    }

    /// Applies `t ∈ T^d` on the source side.
    pub fn act_source(&self, t: &[Complex64], p: &ModelPoint) -> ModelPoint {
        act(t, p)
    }

    /// Applies `ρ(t)` on the target side.
    pub fn act_target(&self, t: &[Complex64], p: &ModelPoint) -> ModelPoint {
        let rt: Vec<Complex64> = self.rho.iter().map(|row| character(row, t)).collect();
        act(&rt, p)
    }
}

fn act(t: &[Complex64], p: &ModelPoint) -> ModelPoint {
    let n = p.z.len();
    ModelPoint {
        z: p.z.iter().zip(t).map(|(z, t)| z * t).collect(),
        b: p.b.iter().zip(&t[n..]).map(|(b, t)| b * t).collect(),
        x: p.x.clone(),
    }
}

/// The map `G` on `R_{>=0}^n × R^m × T^d` induced by `f`.
#[derive(Clone, Debug)]
pub struct InducedG<'a> {
    spec: &'a ModelMapSpec,
    rho: Vec<Vec<i32>>,
}

pub fn induce_g(spec: &ModelMapSpec) -> Result<InducedG<'_>, ModelError> {
    spec.validate()?;
    Ok(InducedG { spec, rho: spec.rho_exponents() })
}

impl InducedG<'_> {
    fn a(&self, j: usize) -> &Expr {
        self.spec.lift_overrides.get(&j).unwrap_or(&self.spec.a[j])
    }

    pub fn eval(&self, p: &CutPoint) -> Result<CutPoint, ModelError> {
        let sh = &self.spec.shape;
        let d = sh.d();
        if p.s.len() != sh.n || p.x.len() != sh.m || p.tau.len() != d {
            return Err(ModelError::Domain("point does not match the source shape".into()));
        }
        p.validate()?;
        let mut s = Vec::with_capacity(sh.n_prime);
        let mut tau = Vec::with_capacity(d);
        for j in 0..d {
            let a = self.a(j).eval(&p.s, &p.x);
            let r = character(&self.rho[j], &p.tau);
            if j < sh.n_prime {
                let a = nonvanishing(a, j)?;
                let modulus = a.norm();
                s.push(if j < sh.k { p.s[j] * modulus * modulus } else { modulus * modulus });
                tau.push(r * (a / modulus));
            } else {
                tau.push(r * unit(a, j)?);
            }
        }
        let x = self.spec.x_prime.iter().enumerate().map(|(j, e)| real_part(e, j, &p.s, &p.x)).collect::<Result<_, _>>()?;
        Ok(CutPoint { s, x, tau })
    }

    /// The base map `g` on orbit spaces; `G` covers it.
    pub fn base(&self, s: &[f64], x: &[f64]) -> Result<(Vec<f64>, Vec<f64>), ModelError> {
        let tau = vec![Complex64::new(1.0, 0.0); self.spec.shape.d()];
        let q = self.eval(&CutPoint { s: s.to_vec(), x: x.to_vec(), tau })?;
        Ok((q.s, q.x))
    }

    /// `s'_j` as a function of the source orbit coordinates, evaluated
    /// without domain checks so that finite differences may step across a
    /// facet. Only meaningful for `j < k`.
    pub(crate) fn facet_coordinate(&self, j: usize, s: &[f64], x: &[f64]) -> f64 {
        s[j] * self.a(j).eval(s, x).norm_sqr()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Shape, ModelMapSpec};
    use super::*;
    use crate::lattice::IntegerMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_spec() {
        let spec = ModelMapSpec::identity(1, 1, 1);
        let f = assemble_f(&spec).unwrap();
        let p = ModelPoint { z: vec![c(0.3, -1.2)], b: vec![c(0.0, 1.0)], x: vec![2.5] };
        assert_eq!(f.eval(&p).unwrap(), p);
        let g = induce_g(&spec).unwrap();
        let q = CutPoint { s: vec![1.5], x: vec![-1.0], tau: vec![c(0.6, 0.8), c(-1.0, 0.0)] };
        assert_eq!(g.eval(&q).unwrap(), q);
    }

    #[test]
    fn scaling_by_two() {
        let shape = Shape { n: 1, l: 0, m: 0, n_prime: 1, l_prime: 0, m_prime: 0, k: 1 };
        let spec = ModelMapSpec::new(shape, IntegerMatrix::identity(1), vec![Expr::constant(2.0)], vec![]).unwrap();
        let f = assemble_f(&spec).unwrap();
        let p = ModelPoint { z: vec![c(1.0, 2.0)], b: vec![], x: vec![] };
        assert_eq!(f.eval(&p).unwrap().z, vec![c(2.0, 4.0)]);
        let t = [c(0.0, 1.0)];
        let lhs = f.eval(&f.act_source(&t, &p)).unwrap();
        let rhs = f.act_target(&t, &f.eval(&p).unwrap());
        assert!((lhs.z[0] - rhs.z[0]).norm() < 1e-15);

        let g = induce_g(&spec).unwrap();
        let q = g.eval(&CutPoint { s: vec![3.0], x: vec![], tau: vec![c(0.0, -1.0)] }).unwrap();
        assert_eq!(q.s, vec![12.0]);
        assert_eq!(q.tau, vec![c(0.0, -1.0)]);
    }

    #[test]
    fn singular_component_is_reported() {
        // n = 0, n' = 1: the new coordinate z'_0 = A_0 must not vanish.
        let shape = Shape { n: 0, l: 1, m: 1, n_prime: 1, l_prime: 0, m_prime: 0, k: 0 };
        let spec = ModelMapSpec::new(shape, IntegerMatrix::identity(1), vec![Expr::X(0)], vec![]).unwrap();
        let f = assemble_f(&spec).unwrap();
        let p = ModelPoint { z: vec![], b: vec![c(1.0, 0.0)], x: vec![0.0] };
        assert!(matches!(f.eval(&p), Err(ModelError::Singular { component: 0, .. })));
        let p = ModelPoint { x: vec![0.5], ..p };
        assert_eq!(f.eval(&p).unwrap().z, vec![c(0.5, 0.0)]);
    }

    #[test]
    fn torus_components_must_be_unit() {
        let shape = Shape { n: 0, l: 1, m: 0, n_prime: 0, l_prime: 1, m_prime: 0, k: 0 };
        let spec = ModelMapSpec::new(shape, IntegerMatrix::identity(1), vec![Expr::constant(2.0)], vec![]).unwrap();
        let f = assemble_f(&spec).unwrap();
        let p = ModelPoint { z: vec![], b: vec![c(1.0, 0.0)], x: vec![] };
        assert!(matches!(f.eval(&p), Err(ModelError::NotUnit { .. })));
    }
}
