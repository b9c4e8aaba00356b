//! Normal forms for pairs of primitive vectors under `GL(d, Z)` and sign
//! changes.
//!
//! Any two primitive vectors fall in exactly one of three cases: they span
//! the same line; they form a basis of the saturation of their span; or they
//! span a sublattice of index `k >= 2` of that saturation, and some basis
//! change sends them to `e1` and `-w e1 + k e2` with `gcd(w, k) = 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{coordinates_in, extend_to_basis, saturation, IntegerMatrix, LatticeError, RealWeight};

/// Ordered so that `EqualLine < UnimodularPair < IndexPair`, then by `(k, w)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairCase {
    EqualLine,
    UnimodularPair,
    IndexPair { k: BigInt, w: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrichotomyResult {
    pub case: PairCase,
    /// The witness treats the second input as the first vector of the
    /// normal form.
    pub swapped: bool,
    /// Unimodular `d×d` matrix acting on column vectors. It sends the
    /// (possibly swapped) inputs to `±e1` and to `±e1`, `±e2` or
    /// `±(-w e1 + k e2)` according to `case`.
    pub witness: IntegerMatrix,
}

impl TrichotomyResult {
    /// Re-derives the normal-form images from the witness.
    pub fn verify(&self, a1: &RealWeight, a2: &RealWeight) -> bool {
        let (first, second) = if self.swapped { (a2, a1) } else { (a1, a2) };
        let d = a1.dim();
        if !self.witness.is_unimodular() || self.witness.rows() != d {
            return false;
        }
        let img1 = self.witness.apply(first.rep());
        let img2 = self.witness.apply(second.rep());
        let mut target2 = vec![BigInt::zero(); d];
        match &self.case {
            PairCase::EqualLine => target2[0] = BigInt::one(),
            PairCase::UnimodularPair => target2[1] = BigInt::one(),
            PairCase::IndexPair { k, w } => {
                target2[0] = -w;
                target2[1] = k.clone();
            }
        }
        let mut e1 = vec![BigInt::zero(); d];
        e1[0] = BigInt::one();
        let pm = |img: &[BigInt], t: &[BigInt]| img == t || img.iter().zip(t).all(|(a, b)| *a == -b);
        pm(&img1.0, &e1) && pm(&img2.0, &target2)
    }
}

fn check_pair(a1: &RealWeight, a2: &RealWeight) -> Result<usize, LatticeError> {
    if a1.dim() != a2.dim() {
        return Err(LatticeError::Shape {
            expected: format!("length {}", a1.dim()),
            found: format!("length {}", a2.dim()),
        });
    }
    Ok(a1.dim())
}

/// Classifies the pair up to `GL(d, Z)` and independent sign changes,
/// without exchanging the two vectors.
pub fn classify_primitive_pair(a1: &RealWeight, a2: &RealWeight) -> Result<TrichotomyResult, LatticeError> {
    canonical_pair_form(a1, a2, false)
}

/// Lexicographically smallest `(case, k, w)` over sign changes, `GL(d, Z)`
/// and, when `allow_swap`, exchange of the two vectors.
pub fn canonical_pair_form(
    a1: &RealWeight,
    a2: &RealWeight,
    allow_swap: bool,
) -> Result<TrichotomyResult, LatticeError> {
    let d = check_pair(a1, a2)?;

    if a1 == a2 {
        let b = extend_to_basis(&IntegerMatrix::from_vectors(&[a1.rep().clone()], d)?)?;
        let witness = b.transpose().inverse_unimodular()?;
        return Ok(TrichotomyResult { case: PairCase::EqualLine, swapped: false, witness });
    }

    let pair = IntegerMatrix::from_vectors(&[a1.rep().clone(), a2.rep().clone()], d)?;
    let sat = saturation(&pair)?;
    let coords = coordinates_in(&pair, sat.basis()).expect("pair lies in its saturation");
    // Column vectors x1, x2 in the saturated basis.
    let x1 = [coords[(0, 0)].clone(), coords[(0, 1)].clone()];
    let x2 = [coords[(1, 0)].clone(), coords[(1, 1)].clone()];
    let k = coords.det()?.abs();
    let lift = extend_to_basis(sat.basis())?.transpose().inverse_unimodular()?;

    if k.is_one() {
        // h · [x1 x2] = I
        let h = coords.transpose().inverse_unimodular()?;
        let witness = embed(&h, d).mul(&lift)?;
        return Ok(TrichotomyResult { case: PairCase::UnimodularPair, swapped: false, witness });
    }

    let mut orders = vec![(false, &x1, &x2)];
    if allow_swap {
        orders.push((true, &x2, &x1));
    }
    let mut best: Option<(BigInt, bool, IntegerMatrix)> = None;
    for (swapped, first, second) in orders {
        for (w, h) in lens_normalizations(first, second, &k) {
            let better = best
                .as_ref()
                .is_none_or(|(bw, bs, _)| (&w, swapped) < (bw, *bs));
            if better {
                best = Some((w, swapped, h));
            }
        }
    }
    let (w, swapped, h) = best.expect("at least one normalization");
    let witness = embed(&h, d).mul(&lift)?;
    Ok(TrichotomyResult { case: PairCase::IndexPair { k, w }, swapped, witness })
}

/// The two 2×2 normalizations of an index-`k` pair: `first -> ±e1` and
/// `second -> ±(-w e1 + k e2)`, one for each sign of the image of `first`.
fn lens_normalizations(first: &[BigInt; 2], second: &[BigInt; 2], k: &BigInt) -> Vec<(BigInt, IntegerMatrix)> {
    let (p, q) = (&first[0], &first[1]);
    let eg = p.extended_gcd(q);
    debug_assert!(eg.gcd.is_one(), "first vector is primitive in the saturation");
    // h0 · first = e1
    let h0 = IntegerMatrix::from_rows(vec![vec![eg.x.clone(), eg.y.clone()], vec![-q, p.clone()]])
        .expect("2x2");
    let c0 = &h0[(0, 0)] * &second[0] + &h0[(0, 1)] * &second[1];
    let t = &h0[(1, 0)] * &second[0] + &h0[(1, 1)] * &second[1];
    debug_assert_eq!(&t.abs(), k);
    let eps = if t.is_negative() { -BigInt::one() } else { BigInt::one() };

    let mut out = Vec::with_capacity(2);
    for flip in [BigInt::one(), -BigInt::one()] {
        // After diag(flip, eps) the image of `second` is (flip·c0, k).
        let c = &flip * &c0;
        let w = (-&c).mod_floor(k);
        let b = (-&w - &c) / k;
        let h = IntegerMatrix::from_rows(vec![
            vec![flip.clone(), &b * &eps],
            vec![BigInt::zero(), eps.clone()],
        ])
        .expect("2x2")
        .mul(&h0)
        .expect("2x2 product");
        out.push((w, h));
    }
    out
}

fn embed(h: &IntegerMatrix, d: usize) -> IntegerMatrix {
    let mut g = IntegerMatrix::identity(d);
    for i in 0..h.rows() {
        for j in 0..h.cols() {
            g[(i, j)] = h[(i, j)].clone();
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rw(v: &[i64]) -> RealWeight {
        RealWeight::from_i64(v).unwrap()
    }

    fn index(k: i64, w: i64) -> PairCase {
        PairCase::IndexPair { k: k.into(), w: w.into() }
    }

    #[test]
    fn three_cases() {
        let r = classify_primitive_pair(&rw(&[1, 0]), &rw(&[1, 0])).unwrap();
        assert_eq!(r.case, PairCase::EqualLine);
        let r = classify_primitive_pair(&rw(&[1, 0]), &rw(&[0, 1])).unwrap();
        assert_eq!(r.case, PairCase::UnimodularPair);
        assert!(r.verify(&rw(&[1, 0]), &rw(&[0, 1])));
        let r = classify_primitive_pair(&rw(&[1, 0]), &rw(&[1, 2])).unwrap();
        assert_eq!(r.case, index(2, 1));
        assert!(r.verify(&rw(&[1, 0]), &rw(&[1, 2])));
    }

    #[test]
    fn sign_flip_reduces_to_same_form() {
        let r = canonical_pair_form(&rw(&[1, 0]), &rw(&[-1, -2]), true).unwrap();
        assert_eq!(r.case, index(2, 1));
    }

    #[test]
    fn higher_rank_ambient() {
        let a1 = rw(&[1, 1, 0, 2]);
        let a2 = rw(&[1, -1, 3, 0]);
        let r = classify_primitive_pair(&a1, &a2).unwrap();
        assert!(r.verify(&a1, &a2));
        let a3 = rw(&[0, 1, 0, 0]);
        let r = classify_primitive_pair(&rw(&[1, 0, 0, 0]), &a3).unwrap();
        assert_eq!(r.case, PairCase::UnimodularPair);
        let r = canonical_pair_form(&rw(&[1, 0, 0]), &rw(&[1, 0, 0]), true).unwrap();
        assert!(r.verify(&rw(&[1, 0, 0]), &rw(&[1, 0, 0])));
    }

    #[test]
    fn swap_inverts_w() {
        // 2 * 3 = 6 = 1 mod 5, so w = 2 and w = 3 merge once endpoints swap;
        // and 3 = -2 mod 5 already merges them without swapping.
        let a = canonical_pair_form(&rw(&[1, 0]), &rw(&[-2, 5]), false).unwrap();
        let b = canonical_pair_form(&rw(&[1, 0]), &rw(&[-3, 5]), false).unwrap();
        assert_eq!(a.case, index(5, 2));
        assert_eq!(b.case, index(5, 2));
        // mod 7: 2 and 4 are inverses; 3 and 5 are inverses; {2,5}, {3,4} under sign.
        let c = canonical_pair_form(&rw(&[1, 0]), &rw(&[-3, 7]), false).unwrap();
        assert_eq!(c.case, index(7, 3));
        let c = canonical_pair_form(&rw(&[1, 0]), &rw(&[-3, 7]), true).unwrap();
        assert_eq!(c.case, index(7, 2));
        assert!(c.swapped);
        assert!(c.verify(&rw(&[1, 0]), &rw(&[-3, 7])));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(classify_primitive_pair(&rw(&[1, 0]), &rw(&[1, 0, 0])).is_err());
    }
}
