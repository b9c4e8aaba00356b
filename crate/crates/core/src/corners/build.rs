//! Programmatic face posets: circles, lines, intervals, polygons, simplices,
//! cubes and products.

use std::collections::{BTreeMap, BTreeSet};

use super::{CornersError, Face, FacePoset};

fn face(id: impl Into<String>, depth: usize, dim: usize) -> Face {
    Face { id: id.into(), depth, dim, noncompact: false }
}

fn assemble(faces: Vec<Face>, covers: Vec<(usize, usize)>, support: Vec<BTreeSet<usize>>) -> FacePoset {
    let index = faces.iter().enumerate().map(|(i, f)| (f.id.clone(), i)).collect();
    FacePoset::from_indices(faces, index, covers, support)
}

/// A closed circle: one interior face, no facets.
pub fn circle() -> FacePoset {
    assemble(vec![face("int", 0, 1)], vec![], vec![BTreeSet::new()])
}

/// The real line: one noncompact interior face.
pub fn line() -> FacePoset {
    let mut f = face("int", 0, 1);
    f.noncompact = true;
    assemble(vec![f], vec![], vec![BTreeSet::new()])
}

/// `[0, inf)`: a noncompact interior with one endpoint facet `p0`.
pub fn half_line() -> FacePoset {
    let mut int = face("int", 0, 1);
    int.noncompact = true;
    assemble(
        vec![int, face("p0", 1, 0)],
        vec![(1, 0)],
        vec![BTreeSet::new(), BTreeSet::from([1])],
    )
}

/// `[-1, 1]` with endpoint facets `p0` and `p1`.
pub fn interval() -> FacePoset {
    assemble(
        vec![face("int", 0, 1), face("p0", 1, 0), face("p1", 1, 0)],
        vec![(1, 0), (2, 0)],
        vec![BTreeSet::new(), BTreeSet::from([1]), BTreeSet::from([2])],
    )
}

/// An `n`-gon with edges `e0..` and vertices `v_i = e_i ∩ e_{i+1}`.
pub fn polygon(n: usize) -> FacePoset {
    assert!(n >= 2, "a polygon needs at least two edges");
    let mut faces = vec![face("int", 0, 2)];
    faces.extend((0..n).map(|i| face(format!("e{i}"), 1, 1)));
    faces.extend((0..n).map(|i| face(format!("v{i}"), 2, 0)));
    let edge = |i: usize| 1 + i % n;
    let vertex = |i: usize| 1 + n + i;
    let mut covers = Vec::new();
    let mut support = vec![BTreeSet::new(); 1 + 2 * n];
    for i in 0..n {
        covers.push((edge(i), 0));
        covers.push((vertex(i), edge(i)));
        covers.push((vertex(i), edge(i + 1)));
        support[edge(i)].insert(edge(i));
        support[vertex(i)] = BTreeSet::from([edge(i), edge(i + 1)]);
    }
    assemble(faces, covers, support)
}

/// The `n`-simplex with facets `F0..Fn`. A face is named by the facets that
/// contain it, e.g. `F0_2`; the interior is `int`.
pub fn simplex(n: usize) -> FacePoset {
    let facets = n + 1;
    let subsets: Vec<Vec<usize>> = (0u64..(1 << facets))
        .map(|mask| (0..facets).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| s.len() <= n)
        .collect();
    let name = |s: &[usize]| {
        if s.is_empty() {
            "int".to_string()
        } else {
            format!("F{}", s.iter().map(ToString::to_string).collect::<Vec<_>>().join("_"))
        }
    };
    let mut sorted = subsets;
    sorted.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let pos: BTreeMap<Vec<usize>, usize> = sorted.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let faces = sorted.iter().map(|s| face(name(s), s.len(), n - s.len())).collect();
    let mut covers = Vec::new();
    let mut support = Vec::new();
    for s in &sorted {
        let me = pos[s];
        for i in 0..facets {
            if s.contains(&i) {
                continue;
            }
            let mut bigger = s.clone();
            bigger.push(i);
            bigger.sort_unstable();
            if let Some(&b) = pos.get(&bigger) {
                covers.push((b, me));
            }
        }
        support.push(s.iter().map(|&i| pos[&vec![i]]).collect());
    }
    assemble(faces, covers, support)
}

/// Product of two connected posets. Face ids are `a*b`; facets of the product
/// are `facet*int` and `int*facet`.
pub fn product(p: &FacePoset, q: &FacePoset) -> Result<FacePoset, CornersError> {
    let (&[ip], &[iq]) = (p.interiors().as_slice(), q.interiors().as_slice()) else {
        return Err(CornersError::DisconnectedFactor);
    };
    let (n, m) = (p.len(), q.len());
    let at = |i: usize, j: usize| i * m + j;
    let mut faces = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let (a, b) = (p.face(i), q.face(j));
            faces.push(Face {
                id: format!("{}*{}", a.id, b.id),
                depth: a.depth + b.depth,
                dim: a.dim + b.dim,
                noncompact: a.noncompact || b.noncompact,
            });
        }
    }
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..m {
            for &(lo, hi) in p.covers() {
                if lo == i {
                    covers.push((at(lo, j), at(hi, j)));
                }
            }
            for &(lo, hi) in q.covers() {
                if lo == j {
                    covers.push((at(i, lo), at(i, hi)));
                }
            }
        }
    }
    let mut support = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let mut s: BTreeSet<usize> = p.support(i).iter().map(|&f| at(f, iq)).collect();
            s.extend(q.support(j).iter().map(|&g| at(ip, g)));
            support.push(s);
        }
    }
    Ok(assemble(faces, covers, support))
}

/// The `n`-cube as a product of intervals; `cube(0)` is a point.
pub fn cube(n: usize) -> FacePoset {
    if n == 0 {
        return assemble(vec![face("int", 0, 0)], vec![], vec![BTreeSet::new()]);
    }
    let mut acc = interval();
    for _ in 1..n {
        acc = product(&acc, &interval()).expect("factors are connected");
    }
    acc
}
