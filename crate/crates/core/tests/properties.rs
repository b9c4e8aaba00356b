//! Property-based invariants across the lattice, labelling, classification
//! and cohomology layers.

mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use torusq::classify::{classify_1d, iso_up_to_torus_automorphism, verify_aut_witness, Topology};
use torusq::cohomology::{class_equal, coboundary_of, fixtures, pullback, Cochain2};
use torusq::corners::{build, SimplicialMap};
use torusq::labelling::{check_unimodular, DecoratedQuotient, UnimodularLabelling};
use torusq::lattice::{extend_to_basis, snf, IntegerMatrix, LatticeVector, RealWeight};

fn matrix(rows: &[Vec<i64>], cols: usize) -> IntegerMatrix {
    IntegerMatrix::from_rows_with_cols(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), cols)
        .unwrap()
}

fn int_matrix(max_dim: usize, max_entry: i64) -> impl Strategy<Value = (Vec<Vec<i64>>, usize)> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        (prop::collection::vec(prop::collection::vec(-max_entry..=max_entry, c), r), Just(c))
    })
}

/// A unimodular matrix built from elementary row operations.
fn unimodular(d: usize) -> impl Strategy<Value = IntegerMatrix> {
    prop::collection::vec((0..d, 0..d, -2i64..=2, any::<bool>()), 0..12).prop_map(move |ops| {
        let mut g = IntegerMatrix::identity(d);
        for (i, j, c, flip) in ops {
            if i != j {
                g.add_row_multiple(i, j, &BigInt::from(c));
            }
            if flip {
                g.negate_row(i);
            }
        }
        g
    })
}

fn primitive(d: usize, r: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-r..=r, d).prop_filter("primitive", |v| common::is_primitive(v))
}

fn rw(v: &[i64]) -> RealWeight {
    RealWeight::from_i64(v).unwrap()
}

fn polygon_decoration(labels: &[Vec<i64>]) -> DecoratedQuotient {
    let p = build::polygon(labels.len());
    let map: BTreeMap<usize, RealWeight> =
        labels.iter().enumerate().map(|(i, v)| (p.index_of(&format!("e{i}")).unwrap(), rw(v))).collect();
    DecoratedQuotient::new(p, UnimodularLabelling::new(2, map)).unwrap()
}

proptest! {
    #[test]
    fn snf_is_a_certified_diagonalization((rows, cols) in int_matrix(5, 20)) {
        let a = matrix(&rows, cols);
        let r = snf(&a);
        prop_assert_eq!(r.u.mul(&a).unwrap().mul(&r.v).unwrap(), r.s.clone());
        prop_assert!(r.u.is_unimodular() && r.v.is_unimodular());
        for i in 0..r.s.rows() {
            for j in 0..r.s.cols() {
                prop_assert!(i == j || r.s[(i, j)].is_zero());
            }
        }
        let f = r.invariant_factors();
        prop_assert!(f.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        prop_assert!(f.iter().all(|x| *x > BigInt::zero()));
        prop_assert_eq!(f.len(), a.rank());
    }

    #[test]
    fn extend_to_basis_matches_minor_oracle((rows, cols) in int_matrix(3, 4)) {
        let a = matrix(&rows, cols);
        let expected = common::extends_to_basis(&rows, cols);
        match extend_to_basis(&a) {
            Ok(b) => {
                prop_assert!(expected);
                prop_assert!(b.is_unimodular() && b.rows() == cols);
                for i in 0..rows.len() {
                    prop_assert_eq!(b.row(i), a.row(i));
                }
            }
            Err(_) => prop_assert!(!expected),
        }
    }

    #[test]
    fn real_weight_forgets_sign(v in primitive(3, 9)) {
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        prop_assert_eq!(rw(&v), rw(&neg));
    }

    #[test]
    fn classify_1d_is_invariant(a1 in primitive(2, 6), a2 in primitive(2, 6), g in unimodular(2), s1 in any::<bool>(), s2 in any::<bool>()) {
        let base = classify_1d(Topology::Interval, &[rw(&a1), rw(&a2)], 2).unwrap();
        let sign = |v: &[i64], s: bool| -> Vec<i64> { v.iter().map(|x| if s { -x } else { *x }).collect() };
        let moved = [rw(&sign(&a1, s1)).transform(&g).unwrap(), rw(&sign(&a2, s2)).transform(&g).unwrap()];
        prop_assert_eq!(&classify_1d(Topology::Interval, &moved, 2).unwrap(), &base);
        let swapped = [moved[1].clone(), moved[0].clone()];
        prop_assert_eq!(&classify_1d(Topology::Interval, &swapped, 2).unwrap(), &base);
    }

    #[test]
    fn unimodularity_is_invariant(labels in prop::collection::vec(primitive(2, 3), 3..7), g in unimodular(2)) {
        let d = polygon_decoration(&labels);
        let moved = d.relabel(&g).unwrap();
        let (a, b) = (check_unimodular(&d).unwrap(), check_unimodular(&moved).unwrap());
        let faces = |r: &torusq::labelling::UnimodularityReport| r.failures.iter().map(|f| f.face.clone()).collect::<Vec<_>>();
        prop_assert_eq!(faces(&a), faces(&b));
    }

    #[test]
    fn relabelled_polygons_are_isomorphic_up_to_automorphism(g in unimodular(2), shift in 0usize..4) {
        let labels = [vec![1, 0], vec![0, 1], vec![-1, 1], vec![0, -1]];
        let d1 = polygon_decoration(&labels);
        let rotated: Vec<Vec<i64>> = (0..4).map(|i| labels[(i + shift) % 4].clone()).collect();
        let d2 = polygon_decoration(&rotated).relabel(&g).unwrap();
        let (h, iso) = iso_up_to_torus_automorphism(&d1, &d2, None, 10).unwrap().expect("isomorphic");
        prop_assert!(verify_aut_witness(&d1, &d2, &h, &iso.face_bijection));
    }

    #[test]
    fn coboundaries_do_not_change_the_class(edge_values in prop::collection::vec(-5i64..=5, 12), c in prop::collection::vec(-3i64..=3, 8)) {
        let k = fixtures::tetrahedron_boundary();
        let b: Vec<LatticeVector> = edge_values.chunks(2).map(LatticeVector::from_i64).collect();
        let base = Cochain2::from_values(&k, 2, c.chunks(2).map(LatticeVector::from_i64).collect()).unwrap();
        let shifted = base.add(&coboundary_of(&k, &b, 2));
        prop_assert!(class_equal(&k, &base, &shifted).unwrap());
        let id = SimplicialMap::identity(&k);
        prop_assert_eq!(pullback(&k, &k, &id, &base).unwrap(), base.clone());
        // On the sphere the class is the sum of oriented values; bumping
        // one triangle changes it.
        let mut bumped = c.clone();
        bumped[0] += 1;
        let other = Cochain2::from_values(&k, 2, bumped.chunks(2).map(LatticeVector::from_i64).collect()).unwrap();
        prop_assert!(!class_equal(&k, &base, &other).unwrap());
    }
}

