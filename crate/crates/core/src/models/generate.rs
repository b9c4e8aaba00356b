//! Deterministic model specs covering every shape with dimensions at most 2.
//!
//! Orbit coordinates are paired up by position: `(s_1..s_n, x_1..x_m)` on
//! the source and `(s'_1..s'_{n'}, x'_1..x'_{m'})` on the target. Target
//! coordinate `t` depends on source coordinate `t` and on earlier ones only,
//! with a nonzero derivative along the diagonal, so the base map is a local
//! diffeomorphism. Coefficients stay within `±2`.

use crate::lattice::IntegerMatrix;

use super::{Expr, ModelError, ModelMapSpec, Shape};

/// All shapes with every dimension in `0..=2`.
pub fn shapes() -> Vec<Shape> {
    let mut out = Vec::new();
    for n in 0..=2usize {
        for l in 0..=2usize {
            for m in 0..=2usize {
                for n_prime in 0..=2usize {
                    let (Some(l_prime), Some(m_prime)) = ((n + l).checked_sub(n_prime), (n + m).checked_sub(n_prime)) else {
                        continue;
                    };
                    if l_prime > 2 || m_prime > 2 {
                        continue;
                    }
                    for k in 0..=n.min(n_prime) {
                        out.push(Shape { n, l, m, n_prime, l_prime, m_prime, k });
                    }
                }
            }
        }
    }
    out
}

fn source_coordinate(sh: &Shape, t: usize) -> Expr {
    if t < sh.n {
        Expr::S(t)
    } else {
        Expr::X(t - sh.n)
    }
}

fn is_s(sh: &Shape, t: usize) -> bool {
    t < sh.n
}

/// `u_{t-1}^2`, a non-negative perturbation that keeps the base map
/// triangular.
fn earlier_square(sh: &Shape, t: usize) -> Option<Expr> {
    t.checked_sub(1).map(|e| Expr::pow(source_coordinate(sh, e), 2))
}

/// A phase `exp(i u)` depending on some coordinate other than `t`, or a
/// constant phase when there is none.
fn phase(sh: &Shape, t: usize, variant: usize) -> Expr {
    let dim = sh.n + sh.m;
    let other = (0..dim).map(|o| (t + 1 + o) % dim).find(|&o| o != t);
    match other {
        Some(o) if variant.is_multiple_of(2) => Expr::phase(source_coordinate(sh, o)),
        _ => Expr::complex(0.0, 1.0),
    }
}

fn torus_automorphism(sh: &Shape, variant: usize) -> IntegerMatrix {
    let d = sh.d();
    let k = sh.k;
    let mut rho = IntegerMatrix::identity(d);
    let free = d - k;
    if free >= 2 {
        if variant.is_multiple_of(2) {
            rho[(k, k + 1)] = 1.into();
        } else {
            rho[(k, k)] = 0.into();
            rho[(k + 1, k + 1)] = 0.into();
            rho[(k, k + 1)] = 1.into();
            rho[(k + 1, k)] = 1.into();
        }
    } else if free == 1 && variant % 2 == 1 {
        rho[(k, k)] = (-1).into();
    }
    // Twist the fixed factors by the last free character.
    if free > 0 {
        for j in 0..k {
            rho[(j, d - 1)] = if variant.is_multiple_of(3) { 2 } else { -1 }.into();
        }
    }
    rho
}

/// The model map for `shape`; `variant` picks among sign and phase choices.
pub fn spec_for(sh: Shape, variant: usize) -> Result<ModelMapSpec, ModelError> {
    let d = sh.d();
    let mut a = Vec::with_capacity(d);
    for j in 0..d {
        let t = j;
        let expr = if j < sh.k {
            // s'_j = s_j |A_j|^2 with |A_j| >= 1.
            let mut terms = vec![Expr::constant(1.0 + (variant % 2) as f64)];
            terms.extend(earlier_square(&sh, t));
            let base = if terms.len() == 1 { terms.pop().expect("one term") } else { Expr::add(terms) };
            Expr::mul(vec![base, phase(&sh, t, variant + j)])
        } else if j < sh.n_prime {
            // s'_j = |A_j|^2 > 0, strictly monotone in u_t.
            let base = if is_s(&sh, t) {
                let mut terms = vec![source_coordinate(&sh, t), Expr::constant(1.0)];
                terms.extend(earlier_square(&sh, t));
                Expr::add(terms)
            } else {
                // Keep the exponent bounded so values stay well scaled.
                let grow = Expr::exp(source_coordinate(&sh, t));
                match earlier_square(&sh, t) {
                    Some(e) => Expr::mul(vec![grow, Expr::add(vec![Expr::constant(1.0), e])]),
                    None => grow,
                }
            };
            Expr::mul(vec![base, phase(&sh, t, variant + j)])
        } else {
            // Torus components: unit length everywhere.
            let dim = sh.n + sh.m;
            if dim == 0 {
                Expr::complex(0.0, if (variant + j).is_multiple_of(2) { 1.0 } else { -1.0 })
            } else {
                Expr::phase(Expr::mul(vec![Expr::constant(2.0), source_coordinate(&sh, j % dim)]))
            }
        };
        a.push(expr);
    }
    let x_prime = (0..sh.m_prime)
        .map(|i| {
            let t = sh.n_prime + i;
            let lead = if is_s(&sh, t) {
                source_coordinate(&sh, t)
            } else {
                Expr::mul(vec![Expr::constant(if variant.is_multiple_of(2) { 2.0 } else { -1.0 }), source_coordinate(&sh, t)])
            };
            match earlier_square(&sh, t) {
                Some(e) => Expr::add(vec![lead, e]),
                None => lead,
            }
        })
        .collect();
    ModelMapSpec::new(sh, torus_automorphism(&sh, variant), a, x_prime)
}

/// One spec per shape, variants alternating.
pub fn shape_corpus() -> Vec<ModelMapSpec> {
    shapes()
        .into_iter()
        .enumerate()
        .map(|(i, sh)| spec_for(sh, i).expect("generated specs are valid"))
        .collect()
}

/// Negative control: the lift uses `-A_0` while `f` uses `A_0`.
pub fn corrupt(spec: &ModelMapSpec) -> Result<ModelMapSpec, ModelError> {
    if spec.shape.d() == 0 {
        return Err(ModelError::Shape("no torus component to corrupt".into()));
    }
    let mut out = spec.clone();
    out.lift_overrides.insert(0, Expr::negate(spec.a[0].clone()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_all_shapes() {
        let shapes = shapes();
        assert_eq!(shapes.len(), 80);
        let corpus = shape_corpus();
        assert_eq!(corpus.len(), shapes.len());
        assert!(corpus.iter().all(|s| s.validate().is_ok()));
        assert!(shapes.iter().any(|s| s.k < s.n_prime));
    }
}
