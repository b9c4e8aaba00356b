//! Manifolds-with-corners as finite face posets.
//!
//! A face is a connected component of a depth stratum. The partial order is
//! closure: `a <= b` when `a` lies in the closure of `b`, so deeper faces are
//! lower. Cover relations are stored as `(lower, upper)` pairs. Each face
//! carries its facet support: the facets whose closure contains it.

pub mod build;
mod complex;
mod iso;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

pub use complex::{SimplicialComplex, SimplicialMap};
pub use iso::PosetIsomorphisms;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CornersError {
    #[error("duplicate face id {0:?}")]
    DuplicateFace(String),
    #[error("unknown face id {0:?}")]
    UnknownFace(String),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("simplex {0:?} has repeated vertices")]
    DegenerateSimplex(Vec<usize>),
    #[error("product factors must be connected with one interior face")]
    DisconnectedFactor,
    #[error("vertex map is not simplicial: {0:?} has no image simplex")]
    NotSimplicial(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: String,
    pub depth: usize,
    pub dim: usize,
    /// Set on interior faces that model noncompact quotients such as `R` or
    /// `[0, inf)`.
    pub noncompact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePoset {
    faces: Vec<Face>,
    index: BTreeMap<String, usize>,
    covers: Vec<(usize, usize)>,
    support: Vec<BTreeSet<usize>>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

impl FacePoset {
    /// Assembles a poset from ids. Only referential integrity is checked here;
    /// geometric conditions are reported by [`validate_poset`].
    pub fn new(
        faces: Vec<Face>,
        covers: &[(String, String)],
        support: &BTreeMap<String, BTreeSet<String>>,
    ) -> Result<Self, CornersError> {
        let mut index = BTreeMap::new();
        for (i, f) in faces.iter().enumerate() {
            if index.insert(f.id.clone(), i).is_some() {
                return Err(CornersError::DuplicateFace(f.id.clone()));
            }
        }
        let lookup = |id: &String| index.get(id).copied().ok_or_else(|| CornersError::UnknownFace(id.clone()));
        let mut cov = Vec::with_capacity(covers.len());
        for (lo, hi) in covers {
            cov.push((lookup(lo)?, lookup(hi)?));
        }
        let mut sup = vec![BTreeSet::new(); faces.len()];
        for (face, facets) in support {
            let fi = lookup(face)?;
            for f in facets {
                sup[fi].insert(lookup(f)?);
            }
        }
        Ok(Self::from_indices(faces, index, cov, sup))
    }

    fn from_indices(
        faces: Vec<Face>,
        index: BTreeMap<String, usize>,
        mut covers: Vec<(usize, usize)>,
        support: Vec<BTreeSet<usize>>,
    ) -> Self {
        covers.sort_unstable();
        covers.dedup();
        let mut up = vec![Vec::new(); faces.len()];
        let mut down = vec![Vec::new(); faces.len()];
        for &(lo, hi) in &covers {
            up[lo].push(hi);
            down[hi].push(lo);
        }
        Self { faces, index, covers, support, up, down }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    /// Facets (as face indices) whose closure contains face `i`.
    pub fn support(&self, i: usize) -> &BTreeSet<usize> {
        &self.support[i]
    }

    /// Faces of depth 1, in index order.
    pub fn facets(&self) -> Vec<usize> {
        strata_indices(self, 1)
    }

    /// The depth-0 faces: one open interior per connected component.
    pub fn interiors(&self) -> Vec<usize> {
        strata_indices(self, 0)
    }

    /// All faces `b` with `i <= b`, including `i` itself.
    pub fn up_closure(&self, i: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([i]);
        let mut queue = VecDeque::from([i]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.up[x] {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up_closure(a).contains(&b)
    }

    /// Signature used to prune isomorphism search.
    pub(crate) fn signature(&self, i: usize) -> (usize, usize, usize, usize, bool) {
        let f = &self.faces[i];
        (f.depth, f.dim, self.up[i].len(), self.down[i].len(), f.noncompact)
    }
}

fn strata_indices(p: &FacePoset, k: usize) -> Vec<usize> {
    (0..p.len()).filter(|&i| p.faces[i].depth == k).collect()
}

/// Ids of all faces of depth `k`.
pub fn strata(p: &FacePoset, k: usize) -> Vec<String> {
    strata_indices(p, k).into_iter().map(|i| p.faces[i].id.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DepthSupportMismatch,
    SupportNotFacet,
    FacetSupport,
    Grading,
    CoverSupport,
    ClosureMismatch,
    Components,
    Dimension,
    NoncompactFlag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub face: String,
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the manifold-with-faces conditions. Never fails; every problem is
/// returned as a violation tied to a face id.
pub fn validate_poset(p: &FacePoset) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |face: &Face, kind: ViolationKind, message: String| {
        out.push(Violation { face: face.id.clone(), kind, message });
    };

    for (i, f) in p.faces.iter().enumerate() {
        let sup = &p.support[i];
        if f.depth != sup.len() {
            push(f, ViolationKind::DepthSupportMismatch, format!(
                "depth ≠ support count: depth {} but {} supporting facets",
                f.depth,
                sup.len()
            ));
        }
        for &s in sup {
            if p.faces[s].depth != 1 {
                push(f, ViolationKind::SupportNotFacet, format!("support contains non-facet {:?}", p.faces[s].id));
            }
        }
        if f.depth == 1 && !(sup.len() == 1 && sup.contains(&i)) {
            push(f, ViolationKind::FacetSupport, "a facet must be supported by itself alone".into());
        }
        if f.noncompact && f.depth != 0 {
            push(f, ViolationKind::NoncompactFlag, "only interior faces may be flagged noncompact".into());
        }
    }

    for &(lo, hi) in &p.covers {
        let (a, b) = (&p.faces[lo], &p.faces[hi]);
        if a.dim + 1 != b.dim || a.depth != b.depth + 1 {
            push(a, ViolationKind::Grading, format!(
                "cover {:?} < {:?} is not graded: dims {}→{}, depths {}→{}",
                a.id, b.id, a.dim, b.dim, a.depth, b.depth
            ));
        }
        let (sa, sb) = (&p.support[lo], &p.support[hi]);
        if !sb.is_subset(sa) || sa.len() != sb.len() + 1 {
            push(a, ViolationKind::CoverSupport, format!(
                "support of {:?} must be that of {:?} plus one facet",
                a.id, b.id
            ));
        }
    }

    for (i, f) in p.faces.iter().enumerate() {
        let above = p.up_closure(i);
        let closure_facets: BTreeSet<usize> =
            above.iter().copied().filter(|&j| p.faces[j].depth == 1).collect();
        if closure_facets != p.support[i] && f.depth == p.support[i].len() {
            push(f, ViolationKind::ClosureMismatch, "facets above the face differ from its support".into());
        }
        let tops: Vec<usize> = above.iter().copied().filter(|&j| p.faces[j].depth == 0).collect();
        match tops.as_slice() {
            [t] => {
                if f.dim + f.depth != p.faces[*t].dim {
                    push(f, ViolationKind::Dimension, format!(
                        "dim + depth = {} but the interior has dim {}",
                        f.dim + f.depth,
                        p.faces[*t].dim
                    ));
                }
            }
            _ => push(f, ViolationKind::Components, format!(
                "face lies under {} interior faces, expected exactly 1",
                tops.len()
            )),
        }
    }
    ValidationReport { violations: out }
}

/// All depth- and cover-preserving bijections from `p1` to `p2`.
pub fn poset_isomorphisms<'a>(p1: &'a FacePoset, p2: &'a FacePoset) -> PosetIsomorphisms<'a> {
    PosetIsomorphisms::new(p1, p2)
}
