//! Simplicial cochains with coefficients in `Z^d`, degree-two cohomology,
//! class comparison and pullback.
//!
//! The Chern class of a torus bundle is a Čech class in `H^2(Q; Z^d)`. Here it
//! is presented on a user-supplied triangulation of `Q`, where simplicial and
//! Čech cohomology agree. Simplices are oriented by increasing vertex index;
//! `Z^d` coefficients are handled componentwise.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::corners::{CornersError, SimplicialComplex, SimplicialMap};
use crate::lattice::{snf, IntegerMatrix, LatticeVector, SnfResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("not closed")]
    NotClosed,
    #[error("{0:?} is not a 2-simplex of the complex")]
    NotASimplex(Vec<usize>),
    #[error("conflicting values given for simplex {0:?}")]
    Conflict(Vec<usize>),
    #[error("coefficient rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("cochain has {found} values, complex has {expected} triangles")]
    WrongSize { expected: usize, found: usize },
    #[error(transparent)]
    Corners(#[from] CornersError),
}

/// A `Z^d`-valued 2-cochain: one vector per 2-simplex, in the complex's
/// lexicographic order, oriented by increasing vertex index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain2 {
    rank: usize,
    values: Vec<LatticeVector>,
}

/// Sign of the permutation sorting `s`, and the sorted list.
fn sort_with_sign(s: &[usize]) -> (Vec<usize>, i32) {
    let mut v = s.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (v, sign)
}

impl Cochain2 {
    pub fn zero(k: &SimplicialComplex, rank: usize) -> Self {
        Self { rank, values: vec![LatticeVector::zero(rank); k.simplices(2).len()] }
    }

    pub fn from_values(k: &SimplicialComplex, rank: usize, values: Vec<LatticeVector>) -> Result<Self, CohomologyError> {
        let n = k.simplices(2).len();
        if values.len() != n {
            return Err(CohomologyError::WrongSize { expected: n, found: values.len() });
        }
        if let Some(v) = values.iter().find(|v| v.dim() != rank) {
            return Err(CohomologyError::RankMismatch(rank, v.dim()));
        }
        Ok(Self { rank, values })
    }

    /// Builds a cochain from values on oriented triangles; reversing the
    /// orientation negates the value. Triangles not listed get zero.
    pub fn from_oriented(
        k: &SimplicialComplex,
        rank: usize,
        entries: &[(Vec<usize>, LatticeVector)],
    ) -> Result<Self, CohomologyError> {
        let mut values: Vec<Option<LatticeVector>> = vec![None; k.simplices(2).len()];
        for (simplex, value) in entries {
            if value.dim() != rank {
                return Err(CohomologyError::RankMismatch(rank, value.dim()));
            }
            let (sorted, sign) = sort_with_sign(simplex);
            let pos = (sorted.len() == 3 && sorted.windows(2).all(|w| w[0] < w[1]))
                .then(|| k.position(&sorted))
                .flatten()
                .ok_or_else(|| CohomologyError::NotASimplex(simplex.clone()))?;
            let v = if sign < 0 { value.neg() } else { value.clone() };
            match &values[pos] {
                Some(old) if *old != v => return Err(CohomologyError::Conflict(sorted)),
                _ => values[pos] = Some(v),
            }
        }
        Ok(Self {
            rank,
            values: values.into_iter().map(|v| v.unwrap_or_else(|| LatticeVector::zero(rank))).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn values(&self) -> &[LatticeVector] {
        &self.values
    }

    /// Value on an oriented triangle given by vertex list.
    pub fn value_on(&self, k: &SimplicialComplex, simplex: &[usize]) -> Option<LatticeVector> {
        let (sorted, sign) = sort_with_sign(simplex);
        let pos = k.position(&sorted)?;
        let v = &self.values[pos];
        Some(if sign < 0 { v.neg() } else { v.clone() })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { rank: self.rank, values: self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { rank: self.rank, values: self.values.iter().zip(&other.values).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { rank: self.rank, values: self.values.iter().map(LatticeVector::neg).collect() }
    }

    /// Applies `g` to every coefficient vector (a change of lattice basis).
    pub fn map_coefficients(&self, g: &IntegerMatrix) -> Self {
        Self { rank: g.rows(), values: self.values.iter().map(|v| g.apply(v)).collect() }
    }

    /// Coefficient component `j` as an integer column.
    fn component(&self, j: usize) -> LatticeVector {
        LatticeVector(self.values.iter().map(|v| v.0[j].clone()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(LatticeVector::is_zero)
    }
}

/// Coboundary `C^k -> C^{k+1}` as a matrix with one row per `(k+1)`-simplex
/// and one column per `k`-simplex.
pub fn coboundary(k: &SimplicialComplex, degree: usize) -> IntegerMatrix {
    let lower = k.simplices(degree);
    let upper = k.simplices(degree + 1);
    let mut m = IntegerMatrix::zeros(upper.len(), lower.len());
    for (r, s) in upper.iter().enumerate() {
        for omit in 0..s.len() {
            let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != omit).map(|(_, &v)| v).collect();
            let c = k.position(&face).expect("complex is closed under faces");
            m[(r, c)] = if omit % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        }
    }
    m
}

/// `(d1, d2)`: the coboundaries `C^0 -> C^1` and `C^1 -> C^2`.
pub fn coboundary_matrices(k: &SimplicialComplex) -> (IntegerMatrix, IntegerMatrix) {
    (coboundary(k, 0), coboundary(k, 1))
}

/// `H^2(K; Z) ⊗ Z^d`: free rank and torsion invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H2Structure {
    pub free_rank: usize,
    #[serde(serialize_with = "crate::doc::ser_bigints")]
    pub torsion: Vec<BigInt>,
}

pub fn h2(k: &SimplicialComplex, d: usize) -> H2Structure {
    let d2 = coboundary(k, 1);
    let d3 = coboundary(k, 2);
    let n2 = k.simplices(2).len();
    let f2 = snf(&d2).invariant_factors();
    let r3 = snf(&d3).rank();
    let free = n2 - r3 - f2.len();
    let mut torsion: Vec<BigInt> = f2
        .into_iter()
        .filter(|x| !x.is_one())
        .flat_map(|x| std::iter::repeat_n(x, d))
        .collect();
    torsion.sort();
    H2Structure { free_rank: free * d, torsion }
}

pub fn is_cocycle(k: &SimplicialComplex, c: &Cochain2) -> bool {
    let d3 = coboundary(k, 2);
    (0..c.rank).all(|j| d3.apply(&c.component(j)).is_zero())
}

/// The coboundary of a `Z^d`-valued 1-cochain (values in edge order).
pub fn coboundary_of(k: &SimplicialComplex, b: &[LatticeVector], rank: usize) -> Cochain2 {
    let d2 = coboundary(k, 1);
    let values = (0..d2.rows())
        .map(|r| {
            let mut acc = LatticeVector::zero(rank);
            for (c, bv) in b.iter().enumerate() {
                let e = &d2[(r, c)];
                if !e.is_zero() {
                    acc = acc.add(&bv.scale(e));
                }
            }
            acc
        })
        .collect();
    Cochain2 { rank, values }
}

fn solvable(f: &SnfResult, rhs: &LatticeVector) -> bool {
    let factors = f.invariant_factors();
    f.u.apply(rhs).0.iter().enumerate().all(|(i, y)| match factors.get(i) {
        Some(p) => (y % p).is_zero(),
        None => y.is_zero(),
    })
}

/// True iff `c` is an integral coboundary in every coefficient component.
pub fn is_exact(k: &SimplicialComplex, c: &Cochain2) -> Result<bool, CohomologyError> {
    if !is_cocycle(k, c) {
        return Err(CohomologyError::NotClosed);
    }
    let f = snf(&coboundary(k, 1));
    Ok((0..c.rank).all(|j| solvable(&f, &c.component(j))))
}

/// Whether two cocycles represent the same class in `H^2(K; Z^d)`.
pub fn class_equal(k: &SimplicialComplex, c1: &Cochain2, c2: &Cochain2) -> Result<bool, CohomologyError> {
    if c1.rank != c2.rank {
        return Err(CohomologyError::RankMismatch(c1.rank, c2.rank));
    }
    if !is_cocycle(k, c1) || !is_cocycle(k, c2) {
        return Err(CohomologyError::NotClosed);
    }
    is_exact(k, &c1.sub(c2))
}

/// Pulls `c` (on `target`) back along a simplicial map from `source`.
/// Triangles collapsed by the map get zero.
pub fn pullback(
    source: &SimplicialComplex,
    target: &SimplicialComplex,
    f: &SimplicialMap,
    c: &Cochain2,
) -> Result<Cochain2, CohomologyError> {
    let f = SimplicialMap::new(source, target, f.images().to_vec())?;
    let values = source
        .simplices(2)
        .iter()
        .map(|s| {
            let img: Vec<usize> = s.iter().map(|&v| f.image(v)).collect();
            if img[0] == img[1] || img[1] == img[2] || img[0] == img[2] {
                LatticeVector::zero(c.rank)
            } else {
                c.value_on(target, &img).expect("simplicial map sends triangles to triangles")
            }
        })
        .collect();
    Ok(Cochain2 { rank: c.rank, values })
}

/// Small complexes used by tests and the corpus.
pub mod fixtures {
    use super::SimplicialComplex;

    pub fn filled_triangle() -> SimplicialComplex {
        SimplicialComplex::new(3, &[vec![0, 1, 2]]).expect("valid")
    }

    pub fn tetrahedron_boundary() -> SimplicialComplex {
        SimplicialComplex::new(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).expect("valid")
    }

    /// The six-vertex real projective plane.
    pub fn rp2() -> SimplicialComplex {
        let t = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 5, 1],
            [1, 2, 4],
            [2, 3, 5],
            [3, 4, 1],
            [4, 5, 2],
            [5, 1, 3],
        ];
        SimplicialComplex::new(6, &t.iter().map(|s| s.to_vec()).collect::<Vec<_>>()).expect("valid")
    }

    /// A triangulated square: two triangles sharing the diagonal 0-2.
    pub fn square_disk() -> SimplicialComplex {
        SimplicialComplex::new(4, &[vec![0, 1, 2], vec![0, 2, 3]]).expect("valid")
    }
}
