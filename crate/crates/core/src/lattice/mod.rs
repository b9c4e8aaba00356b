//! Exact integer lattice algebra.
//!
//! Integral vectors of the torus and weights of its dual both live in `Z^d`
//! and pair by the ordinary dot product. Every routine here is exact; there is
//! no floating point anywhere in this module.

mod matrix;
mod pair;
mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use matrix::{IntegerMatrix, LatticeVector};
pub use pair::{canonical_pair_form, classify_primitive_pair, PairCase, TrichotomyResult};
pub use snf::{hnf_rows, snf, SnfResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("zero vector has no primitivity class")]
    ZeroVector,
    #[error("vector {0} is not primitive")]
    NotPrimitive(String),
    #[error("dependent rows: rank {rank} < {rows}")]
    DependentRows { rank: usize, rows: usize },
    #[error("not extendable: invariant factors {0:?} are not all 1")]
    NotExtendable(Vec<BigInt>),
    #[error("not a sublattice")]
    NotSublattice,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("ragged rows")]
    Ragged,
    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },
}

/// True iff the entries of `v` have gcd 1.
pub fn is_primitive(v: &LatticeVector) -> Result<bool, LatticeError> {
    if v.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    Ok(v.content().is_one())
}

/// Completes `rows` (k×d) to a unimodular d×d matrix whose first k rows are
/// the input.
pub fn extend_to_basis(rows: &IntegerMatrix) -> Result<IntegerMatrix, LatticeError> {
    let (k, d) = (rows.rows(), rows.cols());
    let r = snf(rows);
    let factors = r.invariant_factors();
    if factors.len() < k {
        return Err(LatticeError::DependentRows { rank: factors.len(), rows: k });
    }
    if factors.iter().any(|f| !f.is_one()) {
        return Err(LatticeError::NotExtendable(factors));
    }
    // rows = U^{-1} [I | 0] V^{-1}, so rows are U^{-1} times the top of V^{-1}.
    let v_inv = r.v.inverse_unimodular()?;
    let u_inv = r.u.inverse_unimodular()?;
    let top = u_inv.mul(&v_inv.select_rows(0..k))?;
    debug_assert_eq!(&top, rows);
    let out = top.vstack(&v_inv.select_rows(k..d))?;
    debug_assert!(out.is_unimodular());
    Ok(out)
}

/// A saturated sublattice of `Z^d`, stored by its row Hermite basis. Models
/// subtori of `T^d`: stabilizers and circle subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subtorus {
    ambient_rank: usize,
    basis: IntegerMatrix,
}

impl Subtorus {
    pub fn trivial(d: usize) -> Self {
        Self { ambient_rank: d, basis: IntegerMatrix::zeros(0, d) }
    }

    pub fn full(d: usize) -> Self {
        Self { ambient_rank: d, basis: IntegerMatrix::identity(d) }
    }

    /// Wraps `basis` after checking independence and saturation.
    pub fn from_basis(basis: &IntegerMatrix) -> Result<Self, LatticeError> {
        let f = snf(basis).invariant_factors();
        if f.len() < basis.rows() {
            return Err(LatticeError::DependentRows { rank: f.len(), rows: basis.rows() });
        }
        if f.iter().any(|x| !x.is_one()) {
            return Err(LatticeError::NotExtendable(f));
        }
        Ok(Self { ambient_rank: basis.cols(), basis: hnf_rows(basis) })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        let m = IntegerMatrix::from_vectors(std::slice::from_ref(v), self.ambient_rank)
            .expect("vector width matches ambient rank");
        coordinates_in(&m, &self.basis).is_some()
    }

    pub fn contains_subtorus(&self, other: &Subtorus) -> bool {
        other.basis.row_vectors().iter().all(|v| self.contains(v))
    }
}

impl fmt::Display for Subtorus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{}", self.basis)
    }
}

/// `Z^d ∩ Q-span(rows)`.
pub fn saturation(rows: &IntegerMatrix) -> Result<Subtorus, LatticeError> {
    let r = snf(rows);
    let k = r.rank();
    if k < rows.rows() {
        return Err(LatticeError::DependentRows { rank: k, rows: rows.rows() });
    }
    let v_inv = r.v.inverse_unimodular()?;
    Ok(Subtorus { ambient_rank: rows.cols(), basis: hnf_rows(&v_inv.select_rows(0..k)) })
}

/// Solves `x · basis = target` (rows of `target` as integer combinations of
/// rows of `basis`). Returns `None` when some row is not in the row lattice.
pub fn coordinates_in(target: &IntegerMatrix, basis: &IntegerMatrix) -> Option<IntegerMatrix> {
    // Transposed system: basis^T · x^T = target^T, solved column by column.
    let bt = basis.transpose();
    let rows: Option<Vec<Vec<BigInt>>> = (0..target.rows())
        .map(|i| solve_integer(&bt, &target.row_vector(i)).map(|v| v.0))
        .collect();
    IntegerMatrix::from_rows_with_cols(rows?, basis.rows()).ok()
}

/// Some integer solution of `a · x = b`, if one exists.
pub fn solve_integer(a: &IntegerMatrix, b: &LatticeVector) -> Option<LatticeVector> {
    assert_eq!(a.rows(), b.dim(), "right-hand side length must match row count");
    let r = snf(a);
    let ub = r.u.apply(b);
    let factors = r.invariant_factors();
    let mut z = vec![BigInt::zero(); a.cols()];
    for (i, y) in ub.0.iter().enumerate() {
        match factors.get(i) {
            Some(f) => {
                let (q, rem) = y.div_rem(f);
                if !rem.is_zero() {
                    return None;
                }
                z[i] = q;
            }
            None if !y.is_zero() => return None,
            None => {}
        }
    }
    Some(r.v.apply(&LatticeVector(z)))
}

/// Index of the row lattice of `sub` inside that of `ambient`; both must be
/// full rank with the same number of rows.
pub fn sublattice_index(sub: &IntegerMatrix, ambient: &IntegerMatrix) -> Result<BigInt, LatticeError> {
    if sub.rows() != ambient.rows() || sub.cols() != ambient.cols() {
        return Err(LatticeError::Shape {
            expected: format!("{}x{}", ambient.rows(), ambient.cols()),
            found: format!("{}x{}", sub.rows(), sub.cols()),
        });
    }
    for m in [sub, ambient] {
        let rank = m.rank();
        if rank < m.rows() {
            return Err(LatticeError::DependentRows { rank, rows: m.rows() });
        }
    }
    let x = coordinates_in(sub, ambient).ok_or(LatticeError::NotSublattice)?;
    Ok(x.det()?.abs())
}

/// Saturated integer kernel of `lambda` (vectors `v` with `lambda · v = 0`).
pub fn kernel_subtorus(lambda: &IntegerMatrix) -> Subtorus {
    let r = snf(lambda);
    let rank = r.rank();
    // lambda · V = U^{-1} S, so columns of V past the rank span the kernel.
    let cols: Vec<LatticeVector> = (rank..lambda.cols()).map(|j| r.v.column(j)).collect();
    let basis = IntegerMatrix::from_vectors(&cols, lambda.cols()).expect("consistent width");
    Subtorus { ambient_rank: lambda.cols(), basis: hnf_rows(&basis) }
}

/// A primitive lattice vector modulo sign, kept with its first nonzero entry
/// positive. Labels unoriented circle subgroups (and real weights).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealWeight(LatticeVector);

impl RealWeight {
    pub fn new(v: LatticeVector) -> Result<Self, LatticeError> {
        if !is_primitive(&v)? {
            return Err(LatticeError::NotPrimitive(v.to_string()));
        }
        let negative = v.0.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative);
        Ok(Self(if negative { v.neg() } else { v }))
    }

    pub fn from_i64(entries: &[i64]) -> Result<Self, LatticeError> {
        Self::new(LatticeVector::from_i64(entries))
    }

    pub fn rep(&self) -> &LatticeVector {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Image under a unimodular `g`, re-canonicalized.
    pub fn transform(&self, g: &IntegerMatrix) -> Result<Self, LatticeError> {
        Self::new(g.apply(&self.0))
    }
}

impl fmt::Display for RealWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "±{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_i64(rows)
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&LatticeVector::from_i64(&[1, 0, 0])).unwrap());
        assert!(!is_primitive(&LatticeVector::from_i64(&[2, 4])).unwrap());
        assert!(is_primitive(&LatticeVector::from_i64(&[-3, 5])).unwrap());
        assert_eq!(
            is_primitive(&LatticeVector::from_i64(&[0, 0])).unwrap_err().to_string(),
            "zero vector has no primitivity class"
        );
    }

    #[test]
    fn extension_examples() {
        assert_eq!(extend_to_basis(&m(&[&[1, 0]])).unwrap(), IntegerMatrix::identity(2));
        let b = extend_to_basis(&m(&[&[1, 2]])).unwrap();
        assert_eq!(b.row(0), m(&[&[1, 2]]).row(0));
        assert_eq!(b.det().unwrap().abs(), BigInt::one());
        assert!(matches!(
            extend_to_basis(&m(&[&[1, 0], &[1, 2]])),
            Err(LatticeError::NotExtendable(_))
        ));
        assert!(matches!(
            extend_to_basis(&m(&[&[1, 2], &[2, 4]])),
            Err(LatticeError::DependentRows { .. })
        ));
    }

    #[test]
    fn saturation_examples() {
        assert_eq!(saturation(&m(&[&[1, 0]])).unwrap().basis(), &m(&[&[1, 0]]));
        assert_eq!(saturation(&m(&[&[2, 0]])).unwrap().basis(), &m(&[&[1, 0]]));
        let s = saturation(&m(&[&[1, 1, 0], &[1, -1, 0]])).unwrap();
        assert_eq!(s, Subtorus::from_basis(&m(&[&[1, 0, 0], &[0, 1, 0]])).unwrap());
        assert_eq!(saturation(s.basis()).unwrap(), s);
        assert!(saturation(&m(&[&[1, 1], &[2, 2]])).is_err());
    }

    #[test]
    fn index_examples() {
        let id = IntegerMatrix::identity(2);
        assert_eq!(sublattice_index(&id, &id).unwrap(), BigInt::one());
        assert_eq!(sublattice_index(&m(&[&[1, 0], &[1, 2]]), &id).unwrap(), BigInt::from(2));
        assert_eq!(sublattice_index(&m(&[&[1, 0], &[-3, 5]]), &id).unwrap(), BigInt::from(5));
        assert_eq!(
            sublattice_index(&id, &m(&[&[1, 0], &[1, 2]])).unwrap_err(),
            LatticeError::NotSublattice
        );
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_subtorus(&m(&[&[1, 0, -1], &[0, 1, -1]]));
        assert_eq!(k.basis(), &m(&[&[1, 1, 1]]));
        assert_eq!(kernel_subtorus(&IntegerMatrix::identity(3)).rank(), 0);
        assert_eq!(kernel_subtorus(&m(&[&[2, -2]])).basis(), &m(&[&[1, 1]]));
    }

    #[test]
    fn integer_solve() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert!(solve_integer(&a, &LatticeVector::from_i64(&[4, 9])).is_some());
        assert!(solve_integer(&a, &LatticeVector::from_i64(&[1, 0])).is_none());
        let x = solve_integer(&m(&[&[1, 1], &[1, 1]]), &LatticeVector::from_i64(&[3, 3])).unwrap();
        assert_eq!(m(&[&[1, 1], &[1, 1]]).apply(&x), LatticeVector::from_i64(&[3, 3]));
    }

    #[test]
    fn real_weight_sign() {
        let w = RealWeight::from_i64(&[0, -2, 3]).unwrap();
        assert_eq!(w.rep(), &LatticeVector::from_i64(&[0, 2, -3]));
        assert_eq!(w, RealWeight::from_i64(&[0, 2, -3]).unwrap());
        assert!(RealWeight::from_i64(&[2, 4]).is_err());
    }

    #[test]
    fn subtorus_membership() {
        let s = Subtorus::from_basis(&m(&[&[1, 1, 0]])).unwrap();
        assert!(s.contains(&LatticeVector::from_i64(&[-3, -3, 0])));
        assert!(!s.contains(&LatticeVector::from_i64(&[1, 0, 0])));
        assert!(Subtorus::from_basis(&m(&[&[2, 2, 0]])).is_err());
        assert!(Subtorus::full(3).contains_subtorus(&s));
    }
}
