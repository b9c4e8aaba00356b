//! Decision procedures for isomorphism of decorated quotients.
//!
//! Two modes are offered. [`decorated_iso`] keeps the torus fixed: a face
//! bijection must carry labels to labels exactly and pull the second Chern
//! class back to the first. [`iso_up_to_torus_automorphism`] additionally
//! allows a change of basis `g` of `Z^d` acting on labels and on Chern
//! coefficients. [`classify_1d`] gives the complete list of normal forms when
//! the quotient is one dimensional.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{class_equal, is_exact, pullback, Cochain2, CohomologyError};
use crate::corners::{poset_isomorphisms, SimplicialMap};
use crate::labelling::{check_unimodular, DecoratedQuotient, LabellingError};
use crate::lattice::{
    canonical_pair_form, extend_to_basis, saturation, coordinates_in, IntegerMatrix, LatticeError,
    LatticeVector, PairCase, RealWeight,
};

/// Default entry bound for the `GL(d, Z)` completion search.
pub const DEFAULT_BOUND: u64 = 10;

/// Largest number of completion candidates tried before giving up.
const COMPLETION_BUDGET: u128 = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("{topology} quotient takes {expected} labels, got {found}")]
    LabelCount { topology: Topology, expected: usize, found: usize },
    #[error("two independent endpoint labels need ambient rank at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("label {label} has length {found}, ambient rank is {expected}")]
    LabelRank { label: String, expected: usize, found: usize },
    #[error("decorated quotient is not unimodular (first failure at face {0:?})")]
    NotUnimodular(String),
    #[error("cohomology comparison unavailable: labels match but the Chern classes cannot be compared")]
    CohomologyUnavailable,
    #[error("inconclusive within bound {0}")]
    Inconclusive(u64),
    #[error(transparent)]
    Labelling(#[from] LabellingError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Topology {
    S1,
    R,
    HalfLine,
    Interval,
}

impl Topology {
    pub fn label_count(self) -> usize {
        match self {
            Self::S1 | Self::R => 0,
            Self::HalfLine => 1,
            Self::Interval => 2,
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::S1 => "S1",
            Self::R => "R",
            Self::HalfLine => "HalfLine",
            Self::Interval => "Interval",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    FreeCircle,
    FreeLine,
    HalfOpen,
    TwoEndsEqual,
    TwoEndsBasis,
    TwoEndsLens { k: BigInt, w: BigInt },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Self::FreeCircle => "FreeCircle",
            Self::FreeLine => "FreeLine",
            Self::HalfOpen => "HalfOpen",
            Self::TwoEndsEqual => "TwoEndsEqual",
            Self::TwoEndsBasis => "TwoEndsBasis",
            Self::TwoEndsLens { .. } => "TwoEndsLens",
        }
    }
}

/// One of the six model families with a one-dimensional quotient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OneDFamily {
    pub family: Family,
    pub quotient_topology: Topology,
}

/// Normal form of a torus manifold whose quotient is one dimensional. The
/// Chern class plays no role here since `H^2` of a 1-manifold vanishes.
pub fn classify_1d(topology: Topology, labels: &[RealWeight], d: usize) -> Result<OneDFamily, ClassifyError> {
    if labels.len() != topology.label_count() {
        return Err(ClassifyError::LabelCount {
            topology,
            expected: topology.label_count(),
            found: labels.len(),
        });
    }
    if let Some(w) = labels.iter().find(|w| w.dim() != d) {
        return Err(ClassifyError::LabelRank { label: w.to_string(), expected: d, found: w.dim() });
    }
    let family = match topology {
        Topology::S1 => Family::FreeCircle,
        Topology::R => Family::FreeLine,
        Topology::HalfLine => Family::HalfOpen,
        Topology::Interval => {
            let form = canonical_pair_form(&labels[0], &labels[1], true)?;
            if form.case != PairCase::EqualLine && d < 2 {
                return Err(ClassifyError::RankTooSmall(d));
            }
            match form.case {
                PairCase::EqualLine => Family::TwoEndsEqual,
                PairCase::UnimodularPair => Family::TwoEndsBasis,
                PairCase::IndexPair { k, w } => Family::TwoEndsLens { k, w },
            }
        }
    };
    Ok(OneDFamily { family, quotient_topology: topology })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CohomologyCheck {
    /// Both classes vanish, so there is nothing to compare.
    BothTrivial,
    /// The pulled-back class equals the source class.
    Equal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessChecks {
    pub labels_intertwined: bool,
    pub cohomology: CohomologyCheck,
}

/// A face bijection (first poset's index to second poset's index) that
/// intertwines labels and Chern classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedIso {
    pub face_bijection: Vec<usize>,
    pub witness_checks: WitnessChecks,
}

fn require_unimodular(d: &DecoratedQuotient) -> Result<(), ClassifyError> {
    let report = check_unimodular(d)?;
    match report.failures.first() {
        Some(f) => Err(ClassifyError::NotUnimodular(f.face.clone())),
        None => Ok(()),
    }
}

fn class_is_trivial(d: &DecoratedQuotient) -> Result<bool, ClassifyError> {
    match (&d.complex, &d.chern) {
        (Some(k), Some(c)) => Ok(is_exact(k, c)?),
        _ => Ok(true),
    }
}

/// What the Chern classes require of a candidate isomorphism.
enum ChernPlan<'a> {
    Trivial,
    Compare { map: &'a SimplicialMap },
    Unavailable,
}

fn chern_plan<'a>(
    d1: &DecoratedQuotient,
    d2: &DecoratedQuotient,
    complex_iso: Option<&'a SimplicialMap>,
) -> Result<ChernPlan<'a>, ClassifyError> {
    if class_is_trivial(d1)? && class_is_trivial(d2)? {
        return Ok(ChernPlan::Trivial);
    }
    match (complex_iso, &d1.complex, &d2.complex) {
        (Some(map), Some(_), Some(_)) => Ok(ChernPlan::Compare { map }),
        _ => Ok(ChernPlan::Unavailable),
    }
}

fn chern_or_zero(d: &DecoratedQuotient) -> Option<Cochain2> {
    let k = d.complex.as_ref()?;
    Some(d.chern.clone().unwrap_or_else(|| Cochain2::zero(k, d.ambient_rank())))
}

/// Does the vertex map respect the face bijection (when both sides say which
/// face each vertex lies in)?
fn compatible(d1: &DecoratedQuotient, d2: &DecoratedQuotient, map: &SimplicialMap, psi: &[usize]) -> bool {
    match (&d1.vertex_faces, &d2.vertex_faces) {
        (Some(vf1), Some(vf2)) => vf1.iter().enumerate().all(|(v, &f)| psi[f] == vf2[map.image(v)]),
        _ => true,
    }
}

/// Checks `map^* c2 == twist · c1` in cohomology.
fn chern_matches(
    d1: &DecoratedQuotient,
    d2: &DecoratedQuotient,
    map: &SimplicialMap,
    twist: Option<&IntegerMatrix>,
) -> Result<bool, ClassifyError> {
    let (Some(k1), Some(k2)) = (&d1.complex, &d2.complex) else {
        return Ok(false);
    };
    let c1 = chern_or_zero(d1).expect("complex present");
    let c2 = chern_or_zero(d2).expect("complex present");
    let pulled = pullback(k1, k2, map, &c2)?;
    let c1 = match twist {
        Some(g) => c1.map_coefficients(g),
        None => c1,
    };
    Ok(class_equal(k1, &pulled, &c1)?)
}

/// Strict isomorphism: the torus is fixed and labels must agree exactly.
/// Returns the first bijection in enumeration order, or `None` when no
/// bijection intertwines the labels (and classes).
pub fn decorated_iso(
    d1: &DecoratedQuotient,
    d2: &DecoratedQuotient,
    complex_iso: Option<&SimplicialMap>,
) -> Result<Option<DecoratedIso>, ClassifyError> {
    require_unimodular(d1)?;
    require_unimodular(d2)?;
    if d1.ambient_rank() != d2.ambient_rank() {
        return Ok(None);
    }
    let plan = chern_plan(d1, d2, complex_iso)?;
    let facets = d1.poset.facets();
    let mut labels_matched = false;
    for psi in poset_isomorphisms(&d1.poset, &d2.poset) {
        let labels_ok = facets.iter().all(|&f| d1.label(f) == d2.label(psi[f]));
        if !labels_ok {
            continue;
        }
        labels_matched = true;
        let cohomology = match &plan {
            ChernPlan::Trivial => CohomologyCheck::BothTrivial,
            ChernPlan::Unavailable => continue,
            ChernPlan::Compare { map } => {
                if !compatible(d1, d2, map, &psi) || !chern_matches(d1, d2, map, None)? {
                    continue;
                }
                CohomologyCheck::Equal
            }
        };
        return Ok(Some(DecoratedIso {
            face_bijection: psi,
            witness_checks: WitnessChecks { labels_intertwined: true, cohomology },
        }));
    }
    if labels_matched && matches!(plan, ChernPlan::Unavailable) {
        return Err(ClassifyError::CohomologyUnavailable);
    }
    Ok(None)
}

/// Precomputed linear algebra for the labels of the first quotient.
struct SourceFrame {
    facets: Vec<usize>,
    /// Coordinates of every label in the saturated basis of their span.
    coords: Vec<LatticeVector>,
    /// Positions (into `facets`) of labels forming a rational basis.
    pivots: Vec<usize>,
    adj: IntegerMatrix,
    det: BigInt,
    /// Unimodular matrix whose first rows are the saturated basis.
    frame: IntegerMatrix,
}

impl SourceFrame {
    fn new(d: &DecoratedQuotient) -> Result<Self, ClassifyError> {
        let rank = d.ambient_rank();
        let facets = d.poset.facets();
        let labels: Vec<LatticeVector> = facets.iter().map(|&f| d.label(f).expect("unimodular").rep().clone()).collect();
        let mut pivots = Vec::new();
        let mut chosen: Vec<LatticeVector> = Vec::new();
        for (i, v) in labels.iter().enumerate() {
            chosen.push(v.clone());
            if IntegerMatrix::from_vectors(&chosen, rank)?.rank() == chosen.len() {
                pivots.push(i);
            } else {
                chosen.pop();
            }
        }
        let sat = saturation(&IntegerMatrix::from_vectors(&chosen, rank)?)?;
        let all = IntegerMatrix::from_vectors(&labels, rank)?;
        let coords = coordinates_in(&all, sat.basis()).expect("labels lie in the saturation").row_vectors();
        let c_piv = IntegerMatrix::from_vectors(&pivots.iter().map(|&i| coords[i].clone()).collect::<Vec<_>>(), pivots.len())?;
        Ok(Self {
            facets,
            coords,
            adj: c_piv.adjugate()?,
            det: c_piv.det()?,
            pivots,
            frame: extend_to_basis(sat.basis())?,
        })
    }

    /// Images `y` of the saturated basis vectors with `coords[p] · y = targets[p]`
    /// on the pivots, if integral.
    fn solve_images(&self, targets: &[LatticeVector], rank: usize) -> Option<IntegerMatrix> {
        let r = self.pivots.len();
        let t = IntegerMatrix::from_vectors(targets, rank).ok()?;
        // C · Y = T  =>  Y = adj(C) · T / det(C)
        let num = self.adj.mul(&t).ok()?;
        let mut y = IntegerMatrix::zeros(r, rank);
        for i in 0..r {
            for j in 0..rank {
                let (q, rem) = num_integer::Integer::div_rem(&num[(i, j)], &self.det);
                if !rem.is_zero() {
                    return None;
                }
                y[(i, j)] = q;
            }
        }
        Some(y)
    }
}

/// Checks that `g · label1(f) = ± label2(psi(f))` for every facet.
pub fn verify_aut_witness(d1: &DecoratedQuotient, d2: &DecoratedQuotient, g: &IntegerMatrix, psi: &[usize]) -> bool {
    g.is_unimodular()
        && g.rows() == d1.ambient_rank()
        && d1.poset.facets().iter().all(|&f| {
            match (d1.label(f).map(|w| w.transform(g)), d2.label(psi[f])) {
                (Some(Ok(a)), Some(b)) => a == *b,
                _ => false,
            }
        })
}

/// Isomorphism up to an automorphism `g` of the torus: searches for `g` and a
/// face bijection `psi` with `g · label1 = label2 ∘ psi`, and, when Chern
/// classes are present, `map^* c2 = g · c1`.
///
/// Label constraints determine `g` on the span of the labels exactly. When
/// that span is a proper sublattice and the classes must be compared, the
/// remaining columns are searched with entries bounded by `bound`; failure
/// there is reported as [`ClassifyError::Inconclusive`], never as `None`.
pub fn iso_up_to_torus_automorphism(
    d1: &DecoratedQuotient,
    d2: &DecoratedQuotient,
    complex_iso: Option<&SimplicialMap>,
    bound: u64,
) -> Result<Option<(IntegerMatrix, DecoratedIso)>, ClassifyError> {
    require_unimodular(d1)?;
    require_unimodular(d2)?;
    let rank = d1.ambient_rank();
    if rank != d2.ambient_rank() {
        return Ok(None);
    }
    let plan = chern_plan(d1, d2, complex_iso)?;
    let src = SourceFrame::new(d1)?;
    let r = src.pivots.len();
    let mut labels_matched = false;
    let mut exhausted_bound = false;

    for psi in poset_isomorphisms(&d1.poset, &d2.poset) {
        let targets: Vec<LatticeVector> =
            src.facets.iter().map(|&f| d2.label(psi[f]).expect("unimodular").rep().clone()).collect();
        // Signs on the pivot images; the first is fixed since g and -g are
        // interchangeable.
        for signs in 0u64..(1u64 << r.saturating_sub(1)) {
            let pivot_targets: Vec<LatticeVector> = src
                .pivots
                .iter()
                .enumerate()
                .map(|(i, &p)| if i > 0 && signs >> (i - 1) & 1 == 1 { targets[p].neg() } else { targets[p].clone() })
                .collect();
            let Some(y) = src.solve_images(&pivot_targets, rank) else { continue };
            let consistent = src.coords.iter().zip(&targets).all(|(c, t)| {
                let img = y.transpose().apply(c);
                img == *t || img == t.neg()
            });
            if !consistent {
                continue;
            }
            // The image of the saturated span must itself be saturated.
            let Ok(image_frame) = extend_to_basis(&y) else { continue };
            labels_matched = true;
            let base = completion(&src.frame, &image_frame)?;
            debug_assert!(verify_aut_witness(d1, d2, &base, &psi));

            let found = match &plan {
                ChernPlan::Trivial => Some((base, CohomologyCheck::BothTrivial)),
                ChernPlan::Unavailable => continue,
                ChernPlan::Compare { map } => {
                    if !compatible(d1, d2, map, &psi) {
                        continue;
                    }
                    match search_twist(d1, d2, map, &src.frame, &image_frame, r, bound)? {
                        TwistSearch::Found(g) => Some((g, CohomologyCheck::Equal)),
                        TwistSearch::None => None,
                        TwistSearch::Exhausted => {
                            exhausted_bound = true;
                            None
                        }
                    }
                }
            };
            if let Some((g, cohomology)) = found {
                return Ok(Some((
                    g,
                    DecoratedIso {
                        face_bijection: psi,
                        witness_checks: WitnessChecks { labels_intertwined: true, cohomology },
                    },
                )));
            }
        }
    }
    if labels_matched && matches!(plan, ChernPlan::Unavailable) {
        return Err(ClassifyError::CohomologyUnavailable);
    }
    if exhausted_bound {
        return Err(ClassifyError::Inconclusive(bound));
    }
    Ok(None)
}

/// `g` with `g · frame_row_i = image_row_i` for every row: `g = I^T (F^T)^{-1}`.
fn completion(frame: &IntegerMatrix, image: &IntegerMatrix) -> Result<IntegerMatrix, LatticeError> {
    image.transpose().mul(&frame.transpose().inverse_unimodular()?)
}

enum TwistSearch {
    Found(IntegerMatrix),
    None,
    Exhausted,
}

/// Tries automorphisms that agree with the label constraints on the first
/// `r` frame rows and send the remaining rows anywhere within `bound`.
fn search_twist(
    d1: &DecoratedQuotient,
    d2: &DecoratedQuotient,
    map: &SimplicialMap,
    frame: &IntegerMatrix,
    image_frame: &IntegerMatrix,
    r: usize,
    bound: u64,
) -> Result<TwistSearch, ClassifyError> {
    let rank = frame.rows();
    let base = completion(frame, image_frame)?;
    if chern_matches(d1, d2, map, Some(&base))? {
        return Ok(TwistSearch::Found(base));
    }
    if r == rank {
        return Ok(TwistSearch::None);
    }
    let free = (rank - r) * rank;
    let width = u128::from(2 * bound + 1);
    let total = (0..free).try_fold(1u128, |acc, _| acc.checked_mul(width));
    if total.is_none_or(|t| t > COMPLETION_BUDGET) {
        return Ok(TwistSearch::Exhausted);
    }
    let total = total.expect("checked above");
    let b = i64::try_from(bound).unwrap_or(i64::MAX);
    let fixed = image_frame.select_rows(0..r);
    for code in 0..total {
        let mut rest = IntegerMatrix::zeros(rank - r, rank);
        let mut c = code;
        for i in 0..rank - r {
            for j in 0..rank {
                let digit = i64::try_from(c % width).expect("small digit");
                c /= width;
                rest[(i, j)] = BigInt::from(digit - b);
            }
        }
        let candidate = fixed.vstack(&rest)?;
        if !candidate.is_unimodular() {
            continue;
        }
        let g = completion(frame, &candidate)?;
        if chern_matches(d1, d2, map, Some(&g))? {
            return Ok(TwistSearch::Found(g));
        }
    }
    // Every completion within the bound failed, which proves nothing about
    // completions with larger entries.
    Ok(TwistSearch::Exhausted)
}

/// The 1-d decorated quotient with the given endpoint labels, as a poset.
pub fn interval_quotient(a1: &RealWeight, a2: &RealWeight) -> Result<DecoratedQuotient, ClassifyError> {
    let p = crate::corners::build::interval();
    let labels = [(p.index_of("p0").expect("p0"), a1.clone()), (p.index_of("p1").expect("p1"), a2.clone())]
        .into_iter()
        .collect();
    Ok(DecoratedQuotient::new(p, crate::labelling::UnimodularLabelling::new(a1.dim(), labels))?)
}
