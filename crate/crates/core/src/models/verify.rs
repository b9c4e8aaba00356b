//! Sampling harness. Every sample draws from its own stream of a seeded
//! ChaCha generator, and reports are folded in sample order, so results do
//! not depend on thread scheduling.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::maps::{assemble_f, induce_g, AssembledF, InducedG};
use super::point::{eval_cstd, eval_theta, CutPoint, ModelPoint};
use super::{ModelError, ModelMapSpec};

/// Residual allowed for the identity `θ ∘ c^std = Π`.
pub const PROJECTION_TOL: f64 = 1e-12;
/// Finite-difference step.
pub const FD_STEP: f64 = 1e-6;
/// Smallest singular value accepted for the Jacobian of `G`.
pub const MIN_SINGULAR_VALUE: f64 = 1e-6;
/// Failure messages kept in a report.
const MAX_FAILURES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: 0, samples: 1000, tol: 1e-9 }
    }
}

fn rng_for(seed: u64, stream: u64, sample: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::try_from(sample).expect("usize fits") << 8);
    rng
}

fn unit(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))
}

/// A cut-side sample. Each of the first `k` orbit coordinates is put on its
/// facet with probability 1/4; the others lie in `[0.1, 10]`.
fn sample_cut(spec: &ModelMapSpec, rng: &mut ChaCha8Rng) -> CutPoint {
    let sh = &spec.shape;
    let s = (0..sh.n)
        .map(|j| if j < sh.k && rng.gen_bool(0.25) { 0.0 } else { rng.gen_range(0.1..10.0) })
        .collect();
    let x = (0..sh.m).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let tau = (0..sh.d()).map(|_| unit(rng)).collect();
    CutPoint { s, x, tau }
}

/// Scaled distance: absolute near zero, relative for large values.
fn gap(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn gap_real(a: f64, b: f64) -> f64 {
    gap(Complex64::new(a, 0.0), Complex64::new(b, 0.0))
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(a, b)| gap_real(*a, *b)).fold(0.0, f64::max)
}

fn point_gap(p: &ModelPoint, q: &ModelPoint) -> f64 {
    if p.z.len() != q.z.len() || p.b.len() != q.b.len() || p.x.len() != q.x.len() {
        return f64::INFINITY;
    }
    let z = p.z.iter().zip(&q.z).map(|(a, b)| gap(*a, *b));
    let b = p.b.iter().zip(&q.b).map(|(a, b)| gap(*a, *b));
    z.chain(b).fold(max_gap(&p.x, &q.x), f64::max)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DescentReport {
    pub samples: usize,
    pub tol: f64,
    /// `c^std ∘ G` against `f ∘ c^std`.
    pub lift_residual: f64,
    /// `θ ∘ f` against `g ∘ θ`.
    pub base_residual: f64,
    /// `θ ∘ c^std` against `Π`, on both sides.
    pub projection_residual: f64,
    /// `f(t·p)` against `ρ(t)·f(p)`.
    pub equivariance_residual: f64,
    /// `f` rebuilt from `G` against `f`; only when `n = n'`.
    pub round_trip_residual: Option<f64>,
    pub failures: Vec<String>,
    pub failure_count: usize,
    pub passed: bool,
}

#[derive(Default)]
struct SampleOutcome {
    lift: f64,
    base: f64,
    projection: f64,
    equivariance: f64,
    round_trip: f64,
    failures: Vec<String>,
}

fn descent_sample(
    spec: &ModelMapSpec,
    f: &AssembledF<'_>,
    g: &InducedG<'_>,
    opts: &VerifyOptions,
    i: usize,
) -> Result<SampleOutcome, ModelError> {
    let mut rng = rng_for(opts.seed, 0, i);
    let p = sample_cut(spec, &mut rng);
    let t: Vec<Complex64> = (0..spec.shape.d()).map(|_| unit(&mut rng)).collect();
    let mut out = SampleOutcome::default();

    let q = eval_cstd(&p.s, &p.x, &p.tau)?;
    let (s, x) = eval_theta(&q);
    out.projection = max_gap(&s, &p.s).max(max_gap(&x, &p.x));

    let gp = g.eval(&p)?;
    let down = eval_cstd(&gp.s, &gp.x, &gp.tau)?;
    let fq = f.eval(&q)?;
    out.lift = point_gap(&down, &fq);

    let (s2, x2) = eval_theta(&down);
    out.projection = out.projection.max(max_gap(&s2, &gp.s)).max(max_gap(&x2, &gp.x));

    let (fs, fx) = eval_theta(&fq);
    let (gs, gx) = g.base(&p.s, &p.x)?;
    out.base = max_gap(&fs, &gs).max(max_gap(&fx, &gx));

    let moved = f.eval(&f.act_source(&t, &q))?;
    out.equivariance = point_gap(&moved, &f.act_target(&t, &fq));

    if spec.shape.n == spec.shape.n_prime {
        out.round_trip = point_gap(&f.via_lift(g, &q)?, &fq);
    }
    Ok(out)
}

/// Samples the commuting squares relating `G`, `f` and `g`.
pub fn verify_descent(spec: &ModelMapSpec, opts: &VerifyOptions) -> Result<DescentReport, ModelError> {
    let f = assemble_f(spec)?;
    let g = induce_g(spec)?;
    let outcomes: Vec<SampleOutcome> = (0..opts.samples)
        .into_par_iter()
        .map(|i| {
            descent_sample(spec, &f, &g, opts, i).unwrap_or_else(|e| SampleOutcome {
                failures: vec![format!("sample {i}: {e}")],
                lift: f64::INFINITY,
                ..SampleOutcome::default()
            })
        })
        .collect();

    let mut r = DescentReport { samples: opts.samples, tol: opts.tol, ..DescentReport::default() };
    let mut round_trip = 0.0f64;
    let mut failures = Vec::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        r.lift_residual = r.lift_residual.max(o.lift);
        r.base_residual = r.base_residual.max(o.base);
        r.projection_residual = r.projection_residual.max(o.projection);
        r.equivariance_residual = r.equivariance_residual.max(o.equivariance);
        round_trip = round_trip.max(o.round_trip);
        failures.extend(o.failures);
        let checks = [
            ("lift square", o.lift, opts.tol),
            ("base square", o.base, opts.tol),
            ("projection", o.projection, PROJECTION_TOL),
            ("equivariance", o.equivariance, opts.tol),
            ("round trip", o.round_trip, opts.tol),
        ];
        for (name, value, tol) in checks {
            if value.is_finite() && !(value < tol) {
                failures.push(format!("sample {i}: {name} residual {value:e}"));
            }
        }
    }
    if spec.shape.n == spec.shape.n_prime {
        r.round_trip_residual = Some(round_trip);
    }
    failures.sort();
    r.failure_count = failures.len();
    failures.truncate(MAX_FAILURES);
    r.failures = failures;
    r.passed = r.failure_count == 0;
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HadamardReport {
    /// One-based facet index.
    pub j: usize,
    pub samples: usize,
    /// Smallest `s'_j / s_j` seen off the facet.
    pub min_off_facet: Option<f64>,
    /// Smallest `∂s'_j/∂s_j` seen on the facet.
    pub min_on_facet: Option<f64>,
    pub margin: f64,
    pub failures: Vec<String>,
    pub failure_count: usize,
    pub passed: bool,
}

/// Estimates the Hadamard quotient `h_j = s'_j / s_j` for a facet
/// direction `1 ≤ j ≤ k`: by division off the facet, and by a central
/// difference on it. Every estimate must exceed `margin`.
pub fn hadamard_positivity(spec: &ModelMapSpec, j: usize, opts: &VerifyOptions) -> Result<HadamardReport, ModelError> {
    spec.validate()?;
    if j == 0 || j > spec.shape.k {
        return Err(ModelError::Shape(format!("facet index {j} is outside 1..={}", spec.shape.k)));
    }
    let g = induce_g(spec)?;
    let idx = j - 1;
    let estimates: Vec<(bool, f64)> = (0..opts.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(opts.seed, 1 + j as u64, i);
            let mut p = sample_cut(spec, &mut rng);
            let on_facet = i % 2 == 1;
            if on_facet {
                p.s[idx] = 0.0;
                let mut hi = p.s.clone();
                let mut lo = p.s.clone();
                hi[idx] = FD_STEP;
                lo[idx] = -FD_STEP;
                let d = (g.facet_coordinate(idx, &hi, &p.x) - g.facet_coordinate(idx, &lo, &p.x)) / (2.0 * FD_STEP);
                (true, d)
            } else {
                if p.s[idx] == 0.0 {
                    p.s[idx] = rng.gen_range(0.1..10.0);
                }
                (false, g.facet_coordinate(idx, &p.s, &p.x) / p.s[idx])
            }
        })
        .collect();
    let mut r = HadamardReport {
        j,
        samples: opts.samples,
        min_off_facet: None,
        min_on_facet: None,
        margin: opts.tol,
        failures: Vec::new(),
        failure_count: 0,
        passed: false,
    };
    let mut failures = Vec::new();
    for (i, (on, h)) in estimates.into_iter().enumerate() {
        let slot = if on { &mut r.min_on_facet } else { &mut r.min_off_facet };
        *slot = Some(slot.map_or(h, |m: f64| m.min(h)));
        if !(h > opts.tol) {
            let where_ = if on { "on" } else { "off" };
            failures.push(format!("sample {i}: h_{j} = {h:e} {where_} the facet"));
        }
    }
    failures.sort();
    r.failure_count = failures.len();
    failures.truncate(MAX_FAILURES);
    r.failures = failures;
    r.passed = r.failure_count == 0;
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobianReport {
    pub points: usize,
    pub min_singular_value: Option<f64>,
    pub threshold: f64,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// `G` as a real map of `(s, x, angles)`; output angles are measured
/// relative to `reference`.
fn real_g(g: &InducedG<'_>, p: &CutPoint, v: &[f64], reference: &CutPoint) -> Result<Vec<f64>, ModelError> {
    let (n, m) = (p.s.len(), p.x.len());
    let q = CutPoint {
        s: v[..n].to_vec(),
        x: v[n..n + m].to_vec(),
        tau: v[n + m..].iter().map(|a| Complex64::from_polar(1.0, *a)).collect(),
    };
    let out = g.eval(&q)?;
    Ok(out
        .s
        .iter()
        .chain(&out.x)
        .copied()
        .chain(out.tau.iter().zip(&reference.tau).map(|(t, r)| (t / r).arg()))
        .collect())
}

/// Finite-difference Jacobian of `G` at interior samples; all singular
/// values must stay above [`MIN_SINGULAR_VALUE`].
pub fn jacobian_check(spec: &ModelMapSpec, opts: &VerifyOptions) -> Result<JacobianReport, ModelError> {
    let g = induce_g(spec)?;
    let sh = spec.shape;
    let dim = sh.n + sh.m + sh.d();
    let values: Vec<Result<f64, String>> = (0..opts.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(opts.seed, 100, i);
            let mut p = sample_cut(spec, &mut rng);
            for s in &mut p.s {
                if *s == 0.0 {
                    *s = rng.gen_range(0.1..10.0);
                }
            }
            let angles: Vec<f64> = p.tau.iter().map(|t| t.arg()).collect();
            let v0: Vec<f64> = p.s.iter().chain(&p.x).chain(&angles).copied().collect();
            let reference = g.eval(&p).map_err(|e| format!("sample {i}: {e}"))?;
            let mut jac = DMatrix::<f64>::zeros(dim, dim);
            for c in 0..dim {
                let mut hi = v0.clone();
                let mut lo = v0.clone();
                hi[c] += FD_STEP;
                lo[c] -= FD_STEP;
                let fh = real_g(&g, &p, &hi, &reference).map_err(|e| format!("sample {i}: {e}"))?;
                let fl = real_g(&g, &p, &lo, &reference).map_err(|e| format!("sample {i}: {e}"))?;
                for r in 0..dim {
                    jac[(r, c)] = (fh[r] - fl[r]) / (2.0 * FD_STEP);
                }
            }
            Ok(if dim == 0 { f64::INFINITY } else { jac.singular_values().min() })
        })
        .collect();
    let mut min: Option<f64> = None;
    let mut failures = Vec::new();
    for (i, v) in values.into_iter().enumerate() {
        match v {
            Ok(sv) => {
                if dim > 0 {
                    min = Some(min.map_or(sv, |m| m.min(sv)));
                }
                if !(sv > MIN_SINGULAR_VALUE) {
                    failures.push(format!("sample {i}: smallest singular value {sv:e}"));
                }
            }
            Err(e) => failures.push(e),
        }
    }
    failures.sort();
    let passed = failures.is_empty();
    failures.truncate(MAX_FAILURES);
    Ok(JacobianReport { points: opts.samples, min_singular_value: min, threshold: MIN_SINGULAR_VALUE, failures, passed })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelsReport {
    pub shape: super::Shape,
    pub options: VerifyOptions,
    pub descent: DescentReport,
    pub hadamard: Vec<HadamardReport>,
    pub jacobian: JacobianReport,
    pub passed: bool,
}

/// Descent squares, Hadamard positivity on every facet direction, and the
/// Jacobian check.
pub fn verify_all(spec: &ModelMapSpec, opts: &VerifyOptions) -> Result<ModelsReport, ModelError> {
    let descent = verify_descent(spec, opts)?;
    let hadamard = (1..=spec.shape.k).map(|j| hadamard_positivity(spec, j, opts)).collect::<Result<Vec<_>, _>>()?;
    let jacobian = jacobian_check(spec, opts)?;
    let passed = descent.passed && jacobian.passed && hadamard.iter().all(|h| h.passed);
    Ok(ModelsReport { shape: spec.shape, options: *opts, descent, hadamard, jacobian, passed })
}
