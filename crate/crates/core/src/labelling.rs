//! Unimodular labellings of face posets, and the decorated quotient
//! `(Q, labelling, Chern cocycle)`.
//!
//! A labelling assigns a circle subgroup (a [`RealWeight`] in `Z^d`) to each
//! facet. It is unimodular when, at every face, the labels of the facets
//! containing that face extend to a basis of `Z^d`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::cohomology::Cochain2;
use crate::corners::{FacePoset, SimplicialComplex};
use crate::lattice::{extend_to_basis, IntegerMatrix, LatticeError, RealWeight, Subtorus};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabellingError {
    #[error("unlabelled facet {0:?}")]
    UnlabelledFacet(String),
    #[error("label attached to {0:?}, which is not a facet")]
    LabelOnNonFacet(String),
    #[error("invalid face id {0:?}")]
    InvalidFace(String),
    #[error("label {label} has length {found}, ambient rank is {expected}")]
    RankMismatch { label: String, expected: usize, found: usize },
    #[error("labelling is not unimodular at face {0:?}")]
    NotUnimodular(String),
    #[error("vertex {vertex} is assigned to unknown face index {face}")]
    VertexFace { vertex: usize, face: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Facet index (in the owning poset) to circle subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularLabelling {
    pub ambient_rank: usize,
    pub labels: BTreeMap<usize, RealWeight>,
}

impl UnimodularLabelling {
    pub fn new(ambient_rank: usize, labels: BTreeMap<usize, RealWeight>) -> Self {
        Self { ambient_rank, labels }
    }

    pub fn empty(ambient_rank: usize) -> Self {
        Self { ambient_rank, labels: BTreeMap::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedQuotient {
    pub poset: FacePoset,
    pub labelling: UnimodularLabelling,
    pub complex: Option<SimplicialComplex>,
    pub chern: Option<Cochain2>,
    /// Face index of the open stratum containing each vertex of `complex`.
    /// Ties the complex to the poset when comparing Chern classes.
    pub vertex_faces: Option<Vec<usize>>,
}

impl DecoratedQuotient {
    /// Checks that labels sit on facets and have the ambient length. Missing
    /// labels are reported later by [`check_unimodular`].
    pub fn new(poset: FacePoset, labelling: UnimodularLabelling) -> Result<Self, LabellingError> {
        for (&f, w) in &labelling.labels {
            let face = poset.faces().get(f).ok_or_else(|| LabellingError::InvalidFace(f.to_string()))?;
            if face.depth != 1 {
                return Err(LabellingError::LabelOnNonFacet(face.id.clone()));
            }
            if w.dim() != labelling.ambient_rank {
                return Err(LabellingError::RankMismatch {
                    label: w.to_string(),
                    expected: labelling.ambient_rank,
                    found: w.dim(),
                });
            }
        }
        Ok(Self { poset, labelling, complex: None, chern: None, vertex_faces: None })
    }

    /// Attaches a simplicial model of the quotient and a Chern cocycle on it.
    pub fn with_chern(
        mut self,
        complex: SimplicialComplex,
        chern: Option<Cochain2>,
        vertex_faces: Option<Vec<usize>>,
    ) -> Result<Self, LabellingError> {
        if let Some(vf) = &vertex_faces {
            if vf.len() != complex.vertex_count() {
                return Err(LabellingError::VertexFace { vertex: vf.len(), face: usize::MAX });
            }
            if let Some((v, &f)) = vf.iter().enumerate().find(|(_, &f)| f >= self.poset.len()) {
                return Err(LabellingError::VertexFace { vertex: v, face: f });
            }
        }
        self.complex = Some(complex);
        self.chern = chern;
        self.vertex_faces = vertex_faces;
        Ok(self)
    }

    pub fn ambient_rank(&self) -> usize {
        self.labelling.ambient_rank
    }

    pub fn label(&self, facet: usize) -> Option<&RealWeight> {
        self.labelling.labels.get(&facet)
    }

    fn face_index(&self, id: &str) -> Result<usize, LabellingError> {
        self.poset.index_of(id).ok_or_else(|| LabellingError::InvalidFace(id.to_string()))
    }

    /// Labels of the facets containing face `i`, as rows of a matrix.
    fn support_rows(&self, i: usize) -> Result<IntegerMatrix, LabellingError> {
        let rows = self
            .poset
            .support(i)
            .iter()
            .map(|f| {
                self.label(*f)
                    .map(|w| w.rep().clone())
                    .ok_or_else(|| LabellingError::UnlabelledFacet(self.poset.face(*f).id.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntegerMatrix::from_vectors(&rows, self.ambient_rank())?)
    }

    /// Applies a torus automorphism `g` (acting on `Z^d`) to every label and
    /// to the values of the Chern cocycle.
    pub fn relabel(&self, g: &IntegerMatrix) -> Result<Self, LabellingError> {
        if !g.is_unimodular() || g.rows() != self.ambient_rank() {
            return Err(LatticeError::NotUnimodular.into());
        }
        let labels = self
            .labelling
            .labels
            .iter()
            .map(|(&f, w)| Ok((f, w.transform(g)?)))
            .collect::<Result<BTreeMap<_, _>, LatticeError>>()?;
        let mut out = self.clone();
        out.labelling.labels = labels;
        out.chern = self.chern.as_ref().map(|c| c.map_coefficients(g));
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceFailure {
    pub face: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UnimodularityReport {
    pub failures: Vec<FaceFailure>,
}

impl UnimodularityReport {
    pub fn is_unimodular(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Tries to extend the labels at every face to a lattice basis.
pub fn check_unimodular(d: &DecoratedQuotient) -> Result<UnimodularityReport, LabellingError> {
    for f in d.poset.facets() {
        if d.label(f).is_none() {
            return Err(LabellingError::UnlabelledFacet(d.poset.face(f).id.clone()));
        }
    }
    let mut failures = Vec::new();
    for i in 0..d.poset.len() {
        let rows = d.support_rows(i)?;
        if let Err(e) = extend_to_basis(&rows) {
            failures.push(FaceFailure { face: d.poset.face(i).id.clone(), reason: e.to_string() });
        }
    }
    Ok(UnimodularityReport { failures })
}

/// Subtorus generated by the labels of the facets containing `face_id`.
pub fn stabilizer(d: &DecoratedQuotient, face_id: &str) -> Result<Subtorus, LabellingError> {
    stabilizer_at(d, d.face_index(face_id)?)
}

pub(crate) fn stabilizer_at(d: &DecoratedQuotient, i: usize) -> Result<Subtorus, LabellingError> {
    let rows = d.support_rows(i)?;
    Subtorus::from_basis(&rows).map_err(|_| LabellingError::NotUnimodular(d.poset.face(i).id.clone()))
}

/// Number of faces whose stabilizer is the whole torus.
pub fn fixed_point_count(d: &DecoratedQuotient) -> Result<usize, LabellingError> {
    let rank = d.ambient_rank();
    let mut count = 0;
    for i in 0..d.poset.len() {
        if stabilizer_at(d, i)?.rank() == rank {
            count += 1;
        }
    }
    Ok(count)
}
