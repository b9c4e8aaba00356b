//! Cutting and simultaneous radial blowup at the level of orbit-type data.
//!
//! [`cut`] records, for every face of the quotient, the subtorus that is
//! collapsed over it. [`blowup`] reads the labels back off the facet strata
//! and rebuilds the decorated quotient; the two are mutually inverse.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cohomology::Cochain2;
use crate::corners::{FacePoset, SimplicialComplex};
use crate::labelling::{check_unimodular, stabilizer_at, DecoratedQuotient, LabellingError, UnimodularLabelling};
use crate::lattice::{IntegerMatrix, LatticeError, RealWeight, Subtorus};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CutError {
    #[error("cannot cut: labelling is not unimodular at face {0:?}")]
    NotUnimodular(String),
    #[error("orbit-type data has {found} strata, poset has {expected} faces")]
    StratumCount { expected: usize, found: usize },
    #[error("stratum {found:?} does not match poset face {expected:?}")]
    StratumMismatch { expected: String, found: String },
    #[error("stratum {face:?} has stabilizer rank {rank} but depth {depth}")]
    RankDepth { face: String, rank: usize, depth: usize },
    #[error("stratum {0:?} has an inconsistent free flag")]
    FreeFlag(String),
    #[error("stabilizer of {0:?} is not spanned by the stabilizers of its facets")]
    NotSpanned(String),
    #[error("fixed point list disagrees with the full-rank strata")]
    FixedPoints,
    #[error("stabilizers have ambient rank {found}, expected {expected}")]
    AmbientRank { expected: usize, found: usize },
    #[error(transparent)]
    Labelling(#[from] LabellingError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub face_id: String,
    pub stabilizer: Subtorus,
    pub is_free: bool,
}

/// The orbit-type stratification of the cut space. The simplicial model and
/// Chern cocycle of the quotient ride along untouched, since cutting does not
/// change the bundle over the free part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTypeData {
    pub ambient_rank: usize,
    pub strata: Vec<Stratum>,
    pub fixed_points: Vec<String>,
    pub complex: Option<SimplicialComplex>,
    pub chern: Option<Cochain2>,
    pub vertex_faces: Option<Vec<usize>>,
}

pub fn cut(d: &DecoratedQuotient) -> Result<OrbitTypeData, CutError> {
    let report = check_unimodular(d)?;
    if let Some(f) = report.failures.first() {
        return Err(CutError::NotUnimodular(f.face.clone()));
    }
    let rank = d.ambient_rank();
    let mut strata = Vec::with_capacity(d.poset.len());
    let mut fixed_points = Vec::new();
    for (i, face) in d.poset.faces().iter().enumerate() {
        let stabilizer = stabilizer_at(d, i)?;
        if stabilizer.rank() == rank {
            fixed_points.push(face.id.clone());
        }
        strata.push(Stratum { face_id: face.id.clone(), is_free: stabilizer.rank() == 0, stabilizer });
    }
    Ok(OrbitTypeData {
        ambient_rank: rank,
        strata,
        fixed_points,
        complex: d.complex.clone(),
        chern: d.chern.clone(),
        vertex_faces: d.vertex_faces.clone(),
    })
}

pub fn blowup(o: &OrbitTypeData, poset: &FacePoset) -> Result<DecoratedQuotient, CutError> {
    if o.strata.len() != poset.len() {
        return Err(CutError::StratumCount { expected: poset.len(), found: o.strata.len() });
    }
    for (face, s) in poset.faces().iter().zip(&o.strata) {
        if face.id != s.face_id {
            return Err(CutError::StratumMismatch { expected: face.id.clone(), found: s.face_id.clone() });
        }
        if s.stabilizer.ambient_rank() != o.ambient_rank {
            return Err(CutError::AmbientRank { expected: o.ambient_rank, found: s.stabilizer.ambient_rank() });
        }
        if s.stabilizer.rank() != face.depth {
            return Err(CutError::RankDepth { face: face.id.clone(), rank: s.stabilizer.rank(), depth: face.depth });
        }
        if s.is_free != (face.depth == 0) {
            return Err(CutError::FreeFlag(face.id.clone()));
        }
    }

    // A rank-one stabilizer is a circle; its primitive generator is the label.
    let labels: BTreeMap<usize, RealWeight> = poset
        .facets()
        .into_iter()
        .map(|f| Ok((f, RealWeight::new(o.strata[f].stabilizer.basis().row_vector(0))?)))
        .collect::<Result<_, LatticeError>>()?;
    let mut d = DecoratedQuotient::new(poset.clone(), UnimodularLabelling::new(o.ambient_rank, labels))?;

    for (i, s) in o.strata.iter().enumerate() {
        let spanned = stabilizer_at(&d, i).map_err(|_| CutError::NotSpanned(s.face_id.clone()))?;
        if spanned != s.stabilizer {
            return Err(CutError::NotSpanned(s.face_id.clone()));
        }
    }
    let full: Vec<&str> =
        o.strata.iter().filter(|s| s.stabilizer.rank() == o.ambient_rank).map(|s| s.face_id.as_str()).collect();
    if full != o.fixed_points.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(CutError::FixedPoints);
    }

    d.complex = o.complex.clone();
    d.chern = o.chern.clone();
    d.vertex_faces = o.vertex_faces.clone();
    Ok(d)
}

/// Whether `blowup(cut(d)) == d`.
pub fn round_trip(d: &DecoratedQuotient) -> Result<bool, CutError> {
    Ok(blowup(&cut(d)?, &d.poset)? == *d)
}

/// Checks that stabilizers grow toward deeper faces: for every cover
/// `lower < upper`, the stabilizer over `lower` contains the one over `upper`.
pub fn stabilizers_nest(o: &OrbitTypeData, poset: &FacePoset) -> bool {
    poset
        .covers()
        .iter()
        .all(|&(lo, hi)| o.strata[lo].stabilizer.contains_subtorus(&o.strata[hi].stabilizer))
}

/// Transforms every stabilizer by a torus automorphism.
pub fn transform(o: &OrbitTypeData, g: &IntegerMatrix) -> Result<OrbitTypeData, CutError> {
    let strata = o
        .strata
        .iter()
        .map(|s| {
            let moved = g.mul(&s.stabilizer.basis().transpose())?.transpose();
            Ok(Stratum { stabilizer: Subtorus::from_basis(&moved)?, ..s.clone() })
        })
        .collect::<Result<Vec<_>, LatticeError>>()?;
    Ok(OrbitTypeData { strata, chern: o.chern.as_ref().map(|c| c.map_coefficients(g)), ..o.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corners::build;
    use crate::lattice::LatticeVector;

    fn labelled(poset: FacePoset, d: usize, labels: &[(&str, &[i64])]) -> DecoratedQuotient {
        let map = labels
            .iter()
            .map(|(id, v)| (poset.index_of(id).unwrap(), RealWeight::from_i64(v).unwrap()))
            .collect();
        DecoratedQuotient::new(poset, UnimodularLabelling::new(d, map)).unwrap()
    }

    #[test]
    fn sphere_interval() {
        let d = labelled(build::interval(), 1, &[("p0", &[1]), ("p1", &[1])]);
        let o = cut(&d).unwrap();
        assert_eq!(o.fixed_points, vec!["p0", "p1"]);
        let free: Vec<&str> = o.strata.iter().filter(|s| s.is_free).map(|s| s.face_id.as_str()).collect();
        assert_eq!(free, vec!["int"]);
        assert!(round_trip(&d).unwrap());
    }

    #[test]
    fn free_circle() {
        let d = DecoratedQuotient::new(build::circle(), UnimodularLabelling::empty(1)).unwrap();
        let o = cut(&d).unwrap();
        assert_eq!(o.strata.len(), 1);
        assert!(o.strata[0].is_free);
        assert!(round_trip(&d).unwrap());
    }

    #[test]
    fn triangle_ranks() {
        let d = labelled(build::polygon(3), 2, &[("e0", &[1, 0]), ("e1", &[0, 1]), ("e2", &[1, 1])]);
        let o = cut(&d).unwrap();
        let count = |r: usize| o.strata.iter().filter(|s| s.stabilizer.rank() == r).count();
        assert_eq!((count(0), count(1), count(2)), (1, 3, 3));
        assert!(stabilizers_nest(&o, &d.poset));
        assert!(round_trip(&d).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let bad = labelled(build::interval(), 2, &[("p0", &[1, 0]), ("p1", &[1, 2])]);
        assert!(cut(&bad).is_ok());
        let corner = labelled(build::polygon(4), 2, &[("e0", &[1, 0]), ("e1", &[1, 2]), ("e2", &[1, 0]), ("e3", &[0, 1])]);
        assert_eq!(cut(&corner).unwrap_err(), CutError::NotUnimodular("v0".into()));

        let d = labelled(build::polygon(3), 2, &[("e0", &[1, 0]), ("e1", &[0, 1]), ("e2", &[1, 1])]);
        let mut o = cut(&d).unwrap();
        o.strata[0].stabilizer = Subtorus::from_basis(&IntegerMatrix::from_vectors(&[LatticeVector::from_i64(&[1, 0])], 2).unwrap()).unwrap();
        assert!(matches!(blowup(&o, &d.poset), Err(CutError::RankDepth { .. })));
        let mut o = cut(&d).unwrap();
        o.fixed_points.pop();
        assert_eq!(blowup(&o, &d.poset).unwrap_err(), CutError::FixedPoints);
    }

    #[test]
    fn transform_commutes_with_cut() {
        let d = labelled(build::polygon(3), 2, &[("e0", &[1, 0]), ("e1", &[0, 1]), ("e2", &[1, 1])]);
        let g = IntegerMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(transform(&cut(&d).unwrap(), &g).unwrap(), cut(&d.relabel(&g).unwrap()).unwrap());
    }
}
