//! Independent brute-force oracles shared by the integration tests. They use
//! plain `i64` arithmetic and never call into the library's lattice code.

#![allow(dead_code)]

use std::path::PathBuf;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_primitive(v: &[i64]) -> bool {
    v.iter().fold(0, |g, &x| gcd(g, x)) == 1
}

/// Primitive vectors of `Z^2` with entries in `[-r, r]`, one per sign class
/// (first nonzero entry positive).
pub fn primitive_classes_2d(r: i64) -> Vec<[i64; 2]> {
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            if is_primitive(&[a, b]) && (a > 0 || (a == 0 && b > 0)) {
                out.push([a, b]);
            }
        }
    }
    out
}

/// All integer 2×2 matrices with entries in `[-r, r]` and determinant `±1`.
pub fn unimodular_2x2(r: i64) -> Vec<[[i64; 2]; 2]> {
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                for d in -r..=r {
                    if (a * d - b * c).abs() == 1 {
                        out.push([[a, b], [c, d]]);
                    }
                }
            }
        }
    }
    out
}

fn apply(m: &[[i64; 2]; 2], v: [i64; 2]) -> [i64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// Oracle answer for a pair of primitive vectors in `Z^2`, up to
/// `GL(2, Z)` and independent signs, without swapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairOracle {
    EqualLine,
    UnimodularPair,
    /// Smallest `w >= 0` such that some enumerated matrix sends the pair to
    /// `±e1`, `±(-w e1 + k e2)`.
    IndexPair { k: i64, w: i64 },
    /// No enumerated matrix reached any normal form.
    Unreached,
}

/// Scans `mats` for a matrix sending `a1 -> ±e1` and `a2` to one of the
/// three normal forms, keeping the smallest index-pair parameter seen.
pub fn pair_oracle(mats: &[[[i64; 2]; 2]], a1: [i64; 2], a2: [i64; 2]) -> PairOracle {
    let mut best: Option<PairOracle> = None;
    for m in mats {
        let i1 = apply(m, a1);
        if i1 != [1, 0] && i1 != [-1, 0] {
            continue;
        }
        let i2 = apply(m, a2);
        let found = if i2[1] == 0 && i2[0].abs() == 1 {
            PairOracle::EqualLine
        } else if i2[0] == 0 && i2[1].abs() == 1 {
            PairOracle::UnimodularPair
        } else {
            // ±(-w, k): normalize so that k > 0.
            let (x, y) = if i2[1] < 0 { (-i2[0], -i2[1]) } else { (i2[0], i2[1]) };
            let w = -x;
            if y < 2 || w < 0 {
                continue;
            }
            PairOracle::IndexPair { k: y, w }
        };
        best = Some(match (best, found) {
            (None, f) => f,
            (Some(PairOracle::IndexPair { k, w: bw }), PairOracle::IndexPair { w, .. }) => {
                PairOracle::IndexPair { k, w: bw.min(w) }
            }
            (Some(b), _) => b,
        });
    }
    best.unwrap_or(PairOracle::Unreached)
}

/// Modular inverse of `w` mod `k`, for coprime inputs.
pub fn inverse_mod(w: i64, k: i64) -> i64 {
    (1..k).find(|x| (w * x).rem_euclid(k) == 1).unwrap_or(0)
}

/// The lens parameter reachable after optionally swapping the two ends:
/// the smallest of `±w`, `±w^{-1}` modulo `k`.
pub fn lens_w_up_to_swap(k: i64, w: i64) -> i64 {
    let w = w.rem_euclid(k);
    let inv = inverse_mod(w, k);
    [w, (k - w) % k, inv, (k - inv) % k].into_iter().min().unwrap()
}

/// Determinant of a small square `i64` matrix by cofactor expansion.
pub fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// `r` rows extend to a basis of `Z^d` exactly when `r <= d` and the
/// `r×r` minors have gcd 1.
pub fn extends_to_basis(rows: &[Vec<i64>], d: usize) -> bool {
    let r = rows.len();
    if r > d {
        return false;
    }
    if r == 0 {
        return true;
    }
    combinations(d, r)
        .into_iter()
        .map(|cols| det(&rows.iter().map(|row| cols.iter().map(|&c| row[c]).collect()).collect::<Vec<_>>()))
        .fold(0, gcd)
        == 1
}

/// Rank of an integer matrix over `F_p` (`p` prime) or over `Q` when
/// `p == 0`, by Gaussian elimination.
pub fn rank_mod(m: &[Vec<i64>], p: i64) -> usize {
    if p == 0 {
        let mut a: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        return eliminate(&mut a);
    }
    let md = |x: i64| x.rem_euclid(p);
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|&x| md(x)).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = (1..p).find(|x| md(a[rank][c] * x) == 1).unwrap();
        let pivot = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let f = md(row[c] * inv);
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x = md(*x - f * p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over `Q` by partial pivoting; entries here are small integers, so a
/// fixed threshold separates zero from nonzero pivots.
fn eliminate(a: &mut [Vec<f64>]) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())) else { break };
        if a[piv][c].abs() < 1e-9 {
            continue;
        }
        a.swap(rank, piv);
        let pivot = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != rank {
                let f = row[c] / pivot[c];
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Faces of the `n`-cube with `k`-dimensional faces counted by
/// `C(n, k) 2^(n-k)`.
pub fn cube_face_count(n: u32) -> usize {
    3usize.pow(n)
}

pub fn cube_vertex_count(n: u32) -> usize {
    2usize.pow(n)
}

/// Coboundary from `lower` (sorted `(q-1)`-simplices) to `upper` (sorted
/// `q`-simplices): row per upper simplex, alternating signs on faces.
pub fn coboundary(lower: &[Vec<usize>], upper: &[Vec<usize>]) -> Vec<Vec<i64>> {
    upper
        .iter()
        .map(|s| {
            let mut row = vec![0; lower.len()];
            for i in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                let c = lower.iter().position(|l| *l == face).expect("face present");
                row[c] += if i % 2 == 0 { 1 } else { -1 };
            }
            row
        })
        .collect()
}

/// `H^2(K; Z)` described by its free rank and the primes (among `primes`)
/// dividing its torsion, from ranks of `δ1` and `δ2` over `Q` and `F_p`.
/// Torsion of `H^2` is the torsion of `coker δ1`, which shows up as a rank
/// drop modulo `p`.
pub fn h2_oracle(edges: &[Vec<usize>], triangles: &[Vec<usize>], tets: &[Vec<usize>], primes: &[i64]) -> (usize, Vec<i64>) {
    let d1 = coboundary(edges, triangles);
    let r1 = rank_mod(&d1, 0);
    let r2 = if tets.is_empty() { 0 } else { rank_mod(&coboundary(triangles, tets), 0) };
    let torsion = primes.iter().copied().filter(|&p| rank_mod(&d1, p) < r1).collect();
    (triangles.len() - r1 - r2, torsion)
}
