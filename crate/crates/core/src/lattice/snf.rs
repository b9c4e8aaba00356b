//! Smith and Hermite normal forms over `Z`.
//!
//! Both reductions are deterministic: pivots are chosen by smallest absolute
//! value, ties broken by lowest row and then lowest column, and quotients use
//! floor division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntegerMatrix;

/// `u · a · v = s` with `s` diagonal, nonnegative, and each diagonal entry
/// dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub s: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries of `s`, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn smallest_nonzero(s: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let a = s[(i, j)].abs();
            if a.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(b, _, _)| a < *b) {
                best = Some((a, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smith normal form of an arbitrary integer matrix.
pub fn snf(a: &IntegerMatrix) -> SnfResult {
    let (r, c) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntegerMatrix::identity(r);
    let mut v = IntegerMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&s, t) else {
                return finish(s, u, v);
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = s[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&p);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&p);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Row and column are clear; enforce divisibility on the rest.
            let offender = (t + 1..r)
                .find(|&i| (t + 1..c).any(|j| !s[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(s, u, v)
}

fn finish(s: IntegerMatrix, u: IntegerMatrix, v: IntegerMatrix) -> SnfResult {
    SnfResult { s, u, v }
}

/// Row Hermite normal form with zero rows dropped: upper echelon, positive
/// pivots, entries above each pivot reduced into `[0, pivot)`. Two matrices
/// have the same row lattice iff their Hermite forms are equal.
pub fn hnf_rows(a: &IntegerMatrix) -> IntegerMatrix {
    let mut h = a.clone();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..h.cols() {
        if row == h.rows() {
            break;
        }
        loop {
            let mut best: Option<(BigInt, usize)> = None;
            for i in row..h.rows() {
                let x = h[(i, col)].abs();
                if !x.is_zero() && best.as_ref().is_none_or(|(b, _)| x < *b) {
                    best = Some((x, i));
                }
            }
            let Some((_, bi)) = best else { break };
            h.swap_rows(row, bi);
            let p = h[(row, col)].clone();
            let mut done = true;
            for i in row + 1..h.rows() {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = -h[(i, col)].div_floor(&p);
                h.add_row_multiple(i, row, &q);
                done &= h[(i, col)].is_zero();
            }
            if done {
                if h[(row, col)].is_negative() {
                    h.negate_row(row);
                }
                pivots.push((row, col));
                row += 1;
                break;
            }
        }
    }
    for &(pr, pc) in &pivots {
        let p = h[(pr, pc)].clone();
        for i in 0..pr {
            let q = -h[(i, pc)].div_floor(&p);
            h.add_row_multiple(i, pr, &q);
        }
    }
    h.select_rows(0..row)
}
