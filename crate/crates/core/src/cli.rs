//! The `torusq` command line.
//!
//! Exit codes: 0 success, 1 definite negative, 2 input error,
//! 3 inconclusive.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{debug, info};
use serde_json::{json, Value};

use crate::classify::{
    classify_1d, decorated_iso, iso_up_to_torus_automorphism, ClassifyError, DecoratedIso, Family, DEFAULT_BOUND,
};
use crate::cohomology::h2;
use crate::corners::{validate_poset, SimplicialMap};
use crate::cutblow::{blowup, cut, CutError, OrbitTypeData};
use crate::doc::{read_document, DocError, InputDocument};
use crate::labelling::{check_unimodular, DecoratedQuotient, LabellingError};
use crate::lattice::{canonical_pair_form, IntegerMatrix, PairCase};
use crate::models::{verify_all, VerifyOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success = 0,
    Negative = 1,
    InputError = 2,
    Inconclusive = 3,
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> Self {
        ExitCode::from(o as u8)
    }
}

#[derive(Parser, Debug)]
#[command(name = "torusq", version, about = "Decide and verify classification data for locally standard torus actions")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a decorated quotient: face poset conditions and unimodularity.
    Check { path: PathBuf },
    /// Normal form of a one-dimensional quotient or of a pair of labels.
    Classify1d { path: PathBuf },
    /// Decide whether two decorated quotients are isomorphic.
    Iso(IsoArgs),
    /// Degree-two cohomology of a simplicial complex.
    Cohomology { path: PathBuf },
    /// Orbit-type table of the cut space.
    Cut { path: PathBuf },
    /// Check that blowing up the cut recovers the input.
    Roundtrip { path: PathBuf },
    /// Sample the model-map commuting squares and positivity checks.
    VerifyModels(ModelArgs),
}

#[derive(Args, Debug)]
pub struct IsoArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// Allow an automorphism of the torus.
    #[arg(long)]
    pub up_to_aut: bool,
    /// Entry bound for the automorphism completion search.
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    pub bound: u64,
    /// Simplicial isomorphism between the two complexes, as comma-separated
    /// vertex images (vertex i of the first goes to the i-th entry).
    #[arg(long, value_delimiter = ',')]
    pub complex_map: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    pub path: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

/// Result of a command: exit outcome, a JSON report, and a text rendering.
struct Report {
    outcome: Outcome,
    json: Value,
    text: String,
}

impl Report {
    fn new(outcome: Outcome, json: Value, text: impl Into<String>) -> Self {
        Self { outcome, json, text: text.into() }
    }

    fn input_error(e: impl std::fmt::Display) -> Self {
        let msg = e.to_string();
        Self::new(Outcome::InputError, json!({"error": msg}), format!("error: {msg}"))
    }
}

pub fn run(cli: Cli) -> Outcome {
    let report = match &cli.command {
        Command::Check { path } => cmd_check(path),
        Command::Classify1d { path } => cmd_classify1d(path),
        Command::Iso(args) => cmd_iso(args),
        Command::Cohomology { path } => cmd_cohomology(path),
        Command::Cut { path } => cmd_cut(path),
        Command::Roundtrip { path } => cmd_roundtrip(path),
        Command::VerifyModels(args) => cmd_verify_models(args),
    };
    let mut report = report.unwrap_or_else(Report::input_error);
    if let Value::Object(m) = &mut report.json {
        m.insert("version".into(), json!("1"));
    }
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable"));
    } else if report.outcome == Outcome::InputError {
        eprintln!("{}", report.text);
    } else {
        println!("{}", report.text);
    }
    report.outcome
}

fn decorated(path: &Path) -> Result<DecoratedQuotient, DocError> {
    match read_document(path)? {
        InputDocument::DecoratedQuotient(d) => Ok(*d),
        other => Err(DocError::WrongKind { expected: "decorated_quotient".into(), found: other.kind().into() }),
    }
}

fn matrix_json(m: &IntegerMatrix) -> Value {
    json!(m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn cmd_check(path: &Path) -> Result<Report, DocError> {
    let doc = read_document(path)?;
    let InputDocument::DecoratedQuotient(d) = doc else {
        let kind = doc.kind();
        return Ok(Report::new(Outcome::Success, json!({"valid": true, "kind": kind}), format!("valid {kind} document")));
    };
    let poset = validate_poset(&d.poset);
    let (failures, missing) = match check_unimodular(&d) {
        Ok(r) => (r.failures, None),
        Err(LabellingError::UnlabelledFacet(f)) => (Vec::new(), Some(f)),
        Err(e) => return Err(e.into()),
    };
    let valid = poset.is_valid() && failures.is_empty() && missing.is_none();
    debug!("check {}: {} poset violations, {} unimodularity failures", path.display(), poset.violations.len(), failures.len());
    let mut text = Vec::new();
    for v in &poset.violations {
        text.push(format!("poset violation at {}: {}", v.face, v.message));
    }
    for f in &failures {
        text.push(format!("not unimodular at {}: {}", f.face, f.reason));
    }
    if let Some(f) = &missing {
        text.push(format!("facet {f} has no label"));
    }
    if valid {
        text.push(format!("valid and unimodular ({} faces, rank {})", d.poset.len(), d.ambient_rank()));
    }
    Ok(Report::new(
        if valid { Outcome::Success } else { Outcome::Negative },
        json!({
            "valid": valid,
            "poset_violations": poset.violations,
            "unimodularity_failures": failures,
            "unlabelled_facet": missing,
        }),
        text.join("\n"),
    ))
}

fn pair_case_json(case: &PairCase) -> Value {
    match case {
        PairCase::EqualLine => json!({"case": "EqualLine"}),
        PairCase::UnimodularPair => json!({"case": "UnimodularPair"}),
        PairCase::IndexPair { k, w } => json!({"case": "IndexPair", "k": k.to_string(), "w": w.to_string()}),
    }
}

fn cmd_classify1d(path: &Path) -> Result<Report, DocError> {
    match read_document(path)? {
        InputDocument::OneDQuery { topology, d, labels } => match classify_1d(topology, &labels, d) {
            Ok(f) => {
                let mut j = json!({"family": f.family.name(), "quotient_topology": f.quotient_topology});
                let mut text = f.family.name().to_string();
                if let Family::TwoEndsLens { k, w } = &f.family {
                    j["k"] = json!(k.to_string());
                    j["w"] = json!(w.to_string());
                    text = format!("{text} k={k} w={w}");
                }
                Ok(Report::new(Outcome::Success, j, text))
            }
            Err(e @ (ClassifyError::LabelCount { .. } | ClassifyError::RankTooSmall(_))) => {
                Ok(Report::new(Outcome::Negative, json!({"error": e.to_string()}), e.to_string()))
            }
            Err(e) => Ok(Report::input_error(e)),
        },
        InputDocument::PairQuery { a1, a2, allow_swap } => match canonical_pair_form(&a1, &a2, allow_swap) {
            Ok(r) => {
                let mut j = pair_case_json(&r.case);
                j["swapped"] = json!(r.swapped);
                j["witness"] = matrix_json(&r.witness);
                let text = match &r.case {
                    PairCase::IndexPair { k, w } => format!("IndexPair k={k} w={w}"),
                    other => format!("{other:?}"),
                };
                Ok(Report::new(Outcome::Success, j, text))
            }
            Err(e) => Ok(Report::input_error(e)),
        },
        other => Err(DocError::WrongKind { expected: "oned_query or pair_query".into(), found: other.kind().into() }),
    }
}

fn iso_json(d1: &DecoratedQuotient, d2: &DecoratedQuotient, iso: &DecoratedIso) -> Value {
    let bijection: serde_json::Map<String, Value> = iso
        .face_bijection
        .iter()
        .enumerate()
        .map(|(i, &j)| (d1.poset.face(i).id.clone(), json!(d2.poset.face(j).id)))
        .collect();
    json!({"isomorphic": true, "face_bijection": bijection, "witness_checks": iso.witness_checks})
}

fn cmd_iso(args: &IsoArgs) -> Result<Report, DocError> {
    let d1 = decorated(&args.first)?;
    let d2 = decorated(&args.second)?;
    let map = match (&args.complex_map, &d1.complex, &d2.complex) {
        (Some(images), Some(k1), Some(k2)) => {
            let map = SimplicialMap::new(k1, k2, images.clone())?;
            if !map.is_isomorphism(k1, k2) {
                return Ok(Report::input_error("--complex-map is not an isomorphism of complexes"));
            }
            Some(map)
        }
        (Some(_), _, _) => {
            return Ok(Report::input_error("--complex-map needs a complex in both documents"));
        }
        _ => None,
    };
    info!("iso: {} vs {}, up_to_aut={}", args.first.display(), args.second.display(), args.up_to_aut);
    let result = if args.up_to_aut {
        iso_up_to_torus_automorphism(&d1, &d2, map.as_ref(), args.bound)
    } else {
        decorated_iso(&d1, &d2, map.as_ref()).map(|o| o.map(|iso| (IntegerMatrix::identity(d1.ambient_rank()), iso)))
    };
    Ok(match result {
        Ok(Some((g, iso))) => {
            let mut j = iso_json(&d1, &d2, &iso);
            if args.up_to_aut {
                j["g"] = matrix_json(&g);
            }
            let mut text = String::from("isomorphic");
            for (i, &k) in iso.face_bijection.iter().enumerate() {
                text.push_str(&format!("\n  {} -> {}", d1.poset.face(i).id, d2.poset.face(k).id));
            }
            if args.up_to_aut {
                text.push_str(&format!("\ng = {g}"));
            }
            Report::new(Outcome::Success, j, text)
        }
        Ok(None) => Report::new(Outcome::Negative, json!({"isomorphic": false}), "not isomorphic"),
        Err(e @ (ClassifyError::Inconclusive(_) | ClassifyError::CohomologyUnavailable)) => {
            Report::new(Outcome::Inconclusive, json!({"isomorphic": null, "reason": e.to_string()}), format!("inconclusive: {e}"))
        }
        Err(e @ ClassifyError::NotUnimodular(_)) => {
            Report::new(Outcome::Negative, json!({"isomorphic": false, "reason": e.to_string()}), e.to_string())
        }
        Err(e) => Report::input_error(e),
    })
}

fn cmd_cohomology(path: &Path) -> Result<Report, DocError> {
    let (complex, d) = match read_document(path)? {
        InputDocument::Complex { complex, d } => (complex, d),
        InputDocument::DecoratedQuotient(q) => match &q.complex {
            Some(k) => (k.clone(), q.ambient_rank()),
            None => return Ok(Report::input_error("decorated quotient has no complex")),
        },
        other => return Err(DocError::WrongKind { expected: "complex".into(), found: other.kind().into() }),
    };
    let h = h2(&complex, d);
    let torsion: Vec<String> = h.torsion.iter().map(ToString::to_string).collect();
    let text = format!("free_rank {} torsion [{}]", h.free_rank, torsion.join(", "));
    Ok(Report::new(Outcome::Success, serde_json::to_value(&h).expect("serializable"), text))
}

fn orbit_json(o: &OrbitTypeData) -> Value {
    let strata: Vec<Value> = o
        .strata
        .iter()
        .map(|s| {
            json!({
                "face_id": s.face_id,
                "stabilizer": matrix_json(s.stabilizer.basis()),
                "rank": s.stabilizer.rank(),
                "is_free": s.is_free,
            })
        })
        .collect();
    json!({"ambient_rank": o.ambient_rank, "strata": strata, "stratum_count": o.strata.len(), "fixed_points": o.fixed_points})
}

fn cut_failure(e: CutError) -> Report {
    match e {
        CutError::NotUnimodular(_) => Report::new(Outcome::Negative, json!({"error": e.to_string()}), e.to_string()),
        other => Report::input_error(other),
    }
}

fn cmd_cut(path: &Path) -> Result<Report, DocError> {
    let d = decorated(path)?;
    Ok(match cut(&d) {
        Ok(o) => {
            let mut text = format!("{} strata, {} fixed points", o.strata.len(), o.fixed_points.len());
            for s in &o.strata {
                let kind = if s.is_free { "free" } else { "" };
                text.push_str(&format!("\n  {:<16} rank {} {}", s.face_id, s.stabilizer.rank(), kind));
            }
            Report::new(Outcome::Success, orbit_json(&o), text)
        }
        Err(e) => cut_failure(e),
    })
}

fn cmd_roundtrip(path: &Path) -> Result<Report, DocError> {
    let d = decorated(path)?;
    let o = match cut(&d) {
        Ok(o) => o,
        Err(e) => return Ok(cut_failure(e)),
    };
    Ok(match blowup(&o, &d.poset) {
        Ok(back) if back == d => Report::new(Outcome::Success, json!({"identity": true}), "blowup(cut(D)) = D"),
        Ok(_) => Report::new(Outcome::Negative, json!({"identity": false}), "blowup(cut(D)) differs from D"),
        Err(e) => Report::new(Outcome::Negative, json!({"identity": false, "error": e.to_string()}), e.to_string()),
    })
}

fn cmd_verify_models(args: &ModelArgs) -> Result<Report, DocError> {
    let spec = match read_document(&args.path)? {
        InputDocument::ModelSpec(s) => *s,
        other => return Err(DocError::WrongKind { expected: "model_spec".into(), found: other.kind().into() }),
    };
    if !(args.tol > 0.0) || args.samples == 0 {
        return Ok(Report::input_error("--tol must be positive and --samples nonzero"));
    }
    let opts = VerifyOptions { seed: args.seed, samples: args.samples, tol: args.tol };
    let r = verify_all(&spec, &opts)?;
    let d = &r.descent;
    let mut text = format!(
        "samples {} seed {}\n  lift residual {:e}\n  base residual {:e}\n  projection residual {:e}\n  equivariance residual {:e}",
        opts.samples, opts.seed, d.lift_residual, d.base_residual, d.projection_residual, d.equivariance_residual
    );
    if let Some(rt) = d.round_trip_residual {
        text.push_str(&format!("\n  round trip residual {rt:e}"));
    }
    for h in &r.hadamard {
        text.push_str(&format!("\n  h_{} min off facet {:?}, on facet {:?}", h.j, h.min_off_facet, h.min_on_facet));
    }
    text.push_str(&format!("\n  jacobian min singular value {:?}", r.jacobian.min_singular_value));
    let failures = d.failures.iter().chain(r.hadamard.iter().flat_map(|h| &h.failures)).chain(&r.jacobian.failures);
    for f in failures.take(10) {
        text.push_str(&format!("\n  failure: {f}"));
    }
    text.push_str(if r.passed { "\npassed" } else { "\nFAILED" });
    Ok(Report::new(
        if r.passed { Outcome::Success } else { Outcome::Negative },
        serde_json::to_value(&r).expect("serializable"),
        text,
    ))
}
