//! Derived values checked against the brute-force oracles in `common`.

mod common;

use common::*;
use num_bigint::BigInt;
use torusq::classify::{classify_1d, Family, Topology};
use torusq::cohomology::{fixtures, h2};
use torusq::corners::{build, SimplicialComplex};
use torusq::cutblow::cut;
use torusq::doc::{read_document, InputDocument};
use torusq::labelling::fixed_point_count;
use torusq::lattice::{canonical_pair_form, PairCase, RealWeight};

fn rw(v: &[i64]) -> RealWeight {
    RealWeight::from_i64(v).unwrap()
}

fn h2_of(k: &SimplicialComplex) -> (usize, Vec<i64>) {
    let tets = if k.dim() >= Some(3) { k.simplices(3).to_vec() } else { vec![] };
    h2_oracle(k.simplices(1), k.simplices(2), &tets, &[2, 3, 5])
}

#[test]
fn oracle_sanity() {
    assert_eq!(lens_w_up_to_swap(7, 3), 2);
    assert_eq!(lens_w_up_to_swap(5, 2), 2);
    assert!(extends_to_basis(&[vec![2, 3]], 2));
    assert!(!extends_to_basis(&[vec![1, 0], vec![1, 2]], 2));
    assert_eq!(rank_mod(&[vec![2, 0], vec![0, 3]], 2), 1);
    assert_eq!(rank_mod(&[vec![2, 0], vec![0, 3]], 0), 2);
}

#[test]
fn lens_example_matches_oracle() {
    let mats = unimodular_2x2(10);
    assert_eq!(pair_oracle(&mats, [1, 0], [-1, 2]), PairOracle::IndexPair { k: 2, w: 1 });
    let f = classify_1d(Topology::Interval, &[rw(&[1, 0]), rw(&[-1, 2])], 2).unwrap();
    assert_eq!(f.family, Family::TwoEndsLens { k: BigInt::from(2), w: BigInt::from(1) });
}

#[test]
fn pair_query_corpus_matches_oracle() {
    let mats = unimodular_2x2(10);
    let a = pair_oracle(&mats, [1, 0], [-3, 7]);
    let b = pair_oracle(&mats, [-3, 7], [1, 0]);
    let (PairOracle::IndexPair { k, w: w1 }, PairOracle::IndexPair { w: w2, .. }) = (a, b) else {
        panic!("expected index pairs, got {a:?} {b:?}");
    };
    let r = canonical_pair_form(&rw(&[1, 0]), &rw(&[-3, 7]), true).unwrap();
    assert_eq!(r.case, PairCase::IndexPair { k: k.into(), w: w1.min(w2).into() });
}

#[test]
fn cohomology_fixtures_match_oracle() {
    let (free, torsion) = h2_of(&fixtures::tetrahedron_boundary());
    assert_eq!((free, torsion.as_slice()), (1, &[][..]));
    let s = h2(&fixtures::tetrahedron_boundary(), 2);
    assert_eq!((s.free_rank, s.torsion.len()), (2 * free, 0));

    let (free, torsion) = h2_of(&fixtures::rp2());
    assert_eq!((free, torsion.as_slice()), (0, &[2][..]));
    let s = h2(&fixtures::rp2(), 1);
    assert_eq!((s.free_rank, s.torsion), (0, vec![BigInt::from(2)]));

    for k in [fixtures::filled_triangle(), fixtures::square_disk(), fixtures::rp2().cone()] {
        assert_eq!(h2_of(&k), (0, vec![]));
        let s = h2(&k, 3);
        assert_eq!((s.free_rank, s.torsion.len()), (0, 0));
    }
}

#[test]
fn cube_counts_match_formula() {
    let InputDocument::DecoratedQuotient(d) = read_document(&corpus_dir().join("cube.json")).unwrap() else {
        panic!("cube.json is a decorated quotient");
    };
    assert_eq!(d.poset.len(), cube_face_count(3));
    assert_eq!(fixed_point_count(&d).unwrap(), cube_vertex_count(3));
    let o = cut(&d).unwrap();
    assert_eq!(o.strata.len(), cube_face_count(3));
    assert_eq!(o.fixed_points.len(), cube_vertex_count(3));
    // Strata by stabilizer rank: 1 free, 6 circles, 12 two-tori, 8 fixed.
    let mut by_rank = [0usize; 4];
    for s in &o.strata {
        by_rank[s.stabilizer.rank()] += 1;
    }
    assert_eq!(by_rank, [1, 6, 12, 8]);
    assert_eq!(build::cube(2).len(), cube_face_count(2));
}
