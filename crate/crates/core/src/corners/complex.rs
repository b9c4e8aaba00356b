use std::collections::{BTreeMap, BTreeSet};

use super::CornersError;

/// A finite abstract simplicial complex on vertices `0..vertices`. Simplices
/// are stored as sorted vertex lists and the set is closed under faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: usize,
    by_dim: Vec<Vec<Vec<usize>>>,
    lookup: BTreeMap<Vec<usize>, usize>,
}

impl SimplicialComplex {
    /// Downward closure of `generators`. Every vertex `0..vertices` is a
    /// 0-simplex whether listed or not.
    pub fn new(vertices: usize, generators: &[Vec<usize>]) -> Result<Self, CornersError> {
        let mut all: BTreeSet<Vec<usize>> = (0..vertices).map(|v| vec![v]).collect();
        for g in generators {
            let mut s = g.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(CornersError::DegenerateSimplex(g.clone()));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertices) {
                return Err(CornersError::VertexOutOfRange(v));
            }
            let n = s.len();
            for mask in 1u64..(1 << n) {
                all.insert((0..n).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect());
            }
        }
        let top = all.iter().map(Vec::len).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        let mut lookup = BTreeMap::new();
        for layer in &by_dim {
            for (i, s) in layer.iter().enumerate() {
                lookup.insert(s.clone(), i);
            }
        }
        Ok(Self { vertices, by_dim, lookup })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Largest simplex dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    /// The `k`-simplices in lexicographic order; that order indexes cochains.
    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    /// Position of a sorted simplex among those of its dimension.
    pub fn position(&self, sorted: &[usize]) -> Option<usize> {
        self.lookup.get(sorted).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        let mut v = s.to_vec();
        v.sort_unstable();
        self.lookup.contains_key(&v)
    }

    /// Cone with apex `vertices` (a new vertex).
    pub fn cone(&self) -> Self {
        let apex = self.vertices;
        let mut gens: Vec<Vec<usize>> = Vec::new();
        for layer in &self.by_dim {
            for s in layer {
                let mut t = s.clone();
                t.push(apex);
                gens.push(t);
            }
        }
        Self::new(self.vertices + 1, &gens).expect("cone of a valid complex")
    }
}

/// A vertex map between complexes, checked to send simplices to simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    images: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(source: &SimplicialComplex, target: &SimplicialComplex, images: Vec<usize>) -> Result<Self, CornersError> {
        if images.len() != source.vertex_count() {
            return Err(CornersError::VertexOutOfRange(images.len()));
        }
        if let Some(&v) = images.iter().find(|&&v| v >= target.vertex_count()) {
            return Err(CornersError::VertexOutOfRange(v));
        }
        for layer in 0..=source.dim().unwrap_or(0) {
            for s in source.simplices(layer) {
                let img: BTreeSet<usize> = s.iter().map(|&v| images[v]).collect();
                let img: Vec<usize> = img.into_iter().collect();
                if !target.contains(&img) {
                    return Err(CornersError::NotSimplicial(s.clone()));
                }
            }
        }
        Ok(Self { images })
    }

    /// Bijective on vertices with a simplicial inverse.
    pub fn is_isomorphism(&self, source: &SimplicialComplex, target: &SimplicialComplex) -> bool {
        if source.vertex_count() != target.vertex_count() {
            return false;
        }
        let mut inverse = vec![usize::MAX; target.vertex_count()];
        for (v, &w) in self.images.iter().enumerate() {
            if inverse[w] != usize::MAX {
                return false;
            }
            inverse[w] = v;
        }
        Self::new(target, source, inverse).is_ok()
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        Self { images: (0..k.vertex_count()).collect() }
    }

    pub fn image(&self, v: usize) -> usize {
        self.images[v]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_counts() {
        let k = SimplicialComplex::new(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        assert_eq!(k.simplices(0).len(), 4);
        assert_eq!(k.simplices(1).len(), 6);
        assert_eq!(k.simplices(2).len(), 4);
        assert_eq!(k.dim(), Some(2));
        assert!(k.contains(&[2, 0]));
    }

    #[test]
    fn isomorphisms() {
        let k = SimplicialComplex::new(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        assert!(SimplicialMap::new(&k, &k, vec![1, 0, 3, 2]).unwrap().is_isomorphism(&k, &k));
        assert!(!SimplicialMap::new(&k, &k, vec![0, 0, 2, 3]).unwrap().is_isomorphism(&k, &k));
        let disk = SimplicialComplex::new(3, &[vec![0, 1, 2]]).unwrap();
        let circle = SimplicialComplex::new(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(!SimplicialMap::new(&circle, &disk, vec![0, 1, 2]).unwrap().is_isomorphism(&circle, &disk));
    }

    #[test]
    fn bad_inputs() {
        assert!(SimplicialComplex::new(2, &[vec![0, 0]]).is_err());
        assert!(SimplicialComplex::new(2, &[vec![0, 2]]).is_err());
        let k = SimplicialComplex::new(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        assert!(SimplicialMap::new(&k, &k, vec![0, 2, 0]).is_err());
        assert!(SimplicialMap::new(&k, &k, vec![2, 1, 0]).is_ok());
    }

    #[test]
    fn cone_adds_apex() {
        let k = SimplicialComplex::new(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let c = k.cone();
        assert_eq!(c.vertex_count(), 4);
        assert_eq!(c.simplices(2).len(), 3);
    }
}
