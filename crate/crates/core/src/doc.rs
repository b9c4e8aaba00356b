//! Versioned JSON input documents.
//!
//! Lattice values (labels, matrix entries, cochain values, ranks) are written
//! as decimal strings so they carry arbitrary precision; plain JSON integers
//! are accepted too. Structural data such as face depths, dimensions and
//! vertex indices are ordinary JSON numbers.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num_bigint::BigInt;
use serde::Serializer;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::classify::Topology;
use crate::cohomology::{Cochain2, CohomologyError};
use crate::corners::{CornersError, Face, FacePoset, SimplicialComplex};
use crate::labelling::{DecoratedQuotient, LabellingError, UnimodularLabelling};
use crate::lattice::{LatticeVector, RealWeight};
use crate::models::{ModelError, ModelMapSpec};

pub const VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum DocError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("expected a {expected} document, got {found}")]
    WrongKind { expected: String, found: String },
    #[error(transparent)]
    Corners(#[from] CornersError),
    #[error(transparent)]
    Labelling(#[from] LabellingError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> DocError {
    DocError::Schema { path: path.into(), message: message.into() }
}

pub fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

pub fn parse_bigint(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| format!("{s:?} is not an integer")),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integral number")),
        other => Err(format!("expected an integer, got {other}")),
    }
}

fn bigint_at(v: &Value, path: &str) -> Result<BigInt, DocError> {
    parse_bigint(v).map_err(|m| schema(path, m))
}

fn usize_at(v: &Value, path: &str) -> Result<usize, DocError> {
    let n = bigint_at(v, path)?;
    usize::try_from(n).map_err(|_| schema(path, "expected a non-negative machine-size integer"))
}

fn vector_at(v: &Value, path: &str) -> Result<LatticeVector, DocError> {
    let a = v.as_array().ok_or_else(|| schema(path, "expected an array of integers"))?;
    a.iter()
        .enumerate()
        .map(|(i, e)| bigint_at(e, &format!("{path}[{i}]")))
        .collect::<Result<_, _>>()
        .map(LatticeVector::new)
}

fn weight_at(v: &Value, path: &str) -> Result<RealWeight, DocError> {
    RealWeight::new(vector_at(v, path)?).map_err(|e| schema(path, e.to_string()))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, DocError> {
    obj.get(key).ok_or_else(|| schema(path, format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, DocError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str, DocError> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

#[derive(Clone, Debug)]
pub enum InputDocument {
    DecoratedQuotient(Box<DecoratedQuotient>),
    ModelSpec(Box<ModelMapSpec>),
    PairQuery { a1: RealWeight, a2: RealWeight, allow_swap: bool },
    OneDQuery { topology: Topology, d: usize, labels: Vec<RealWeight> },
    /// A bare simplicial complex with a coefficient rank, for cohomology.
    Complex { complex: SimplicialComplex, d: usize },
}

impl InputDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::DecoratedQuotient(_) => "decorated_quotient",
            Self::ModelSpec(_) => "model_spec",
            Self::PairQuery { .. } => "pair_query",
            Self::OneDQuery { .. } => "oned_query",
            Self::Complex { .. } => "complex",
        }
    }
}

pub fn read_document(path: &Path) -> Result<InputDocument, DocError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| DocError::Io { path: path.display().to_string(), source })?;
    parse_document(&text)
}

pub fn parse_document(text: &str) -> Result<InputDocument, DocError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| DocError::Json { line: e.line(), column: e.column(), message: e.to_string() })?;
    parse_value(&v)
}

pub fn parse_value(v: &Value) -> Result<InputDocument, DocError> {
    let obj = v.as_object().ok_or_else(|| schema("$", "document must be an object"))?;
    let version = string(field(obj, "version", "$")?, "$.version")?;
    if version != VERSION {
        return Err(schema("$.version", format!("unsupported version {version:?}, expected {VERSION:?}")));
    }
    let kind = string(field(obj, "kind", "$")?, "$.kind")?;
    Ok(match kind {
        "decorated_quotient" => InputDocument::DecoratedQuotient(Box::new(parse_decorated(obj)?)),
        "model_spec" => InputDocument::ModelSpec(Box::new(ModelMapSpec::from_json(v)?)),
        "pair_query" => {
            let a1 = weight_at(field(obj, "a1", "$")?, "$.a1")?;
            let a2 = weight_at(field(obj, "a2", "$")?, "$.a2")?;
            let allow_swap = match obj.get("allow_swap") {
                None => false,
                Some(b) => b.as_bool().ok_or_else(|| schema("$.allow_swap", "expected a boolean"))?,
            };
            InputDocument::PairQuery { a1, a2, allow_swap }
        }
        "oned_query" => {
            let topology = match string(field(obj, "topology", "$")?, "$.topology")? {
                "S1" => Topology::S1,
                "R" => Topology::R,
                "HalfLine" => Topology::HalfLine,
                "Interval" => Topology::Interval,
                other => return Err(schema("$.topology", format!("unknown topology {other:?}"))),
            };
            let d = usize_at(field(obj, "d", "$")?, "$.d")?;
            let labels = match obj.get("labels") {
                None => Vec::new(),
                Some(l) => array(l, "$.labels")?
                    .iter()
                    .enumerate()
                    .map(|(i, w)| weight_at(w, &format!("$.labels[{i}]")))
                    .collect::<Result<_, _>>()?,
            };
            InputDocument::OneDQuery { topology, d, labels }
        }
        "complex" => {
            let complex = parse_complex(obj, "$")?;
            let d = match obj.get("d") {
                Some(d) => usize_at(d, "$.d")?,
                None => 1,
            };
            InputDocument::Complex { complex, d }
        }
        other => return Err(schema("$.kind", format!("unknown kind {other:?}"))),
    })
}

fn parse_complex(obj: &Map<String, Value>, path: &str) -> Result<SimplicialComplex, DocError> {
    let vertices = usize_at(field(obj, "vertices", path)?, &format!("{path}.vertices"))?;
    let simplices = array(field(obj, "simplices", path)?, &format!("{path}.simplices"))?
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let p = format!("{path}.simplices[{i}]");
            array(s, &p)?.iter().enumerate().map(|(j, v)| usize_at(v, &format!("{p}[{j}]"))).collect()
        })
        .collect::<Result<Vec<Vec<usize>>, DocError>>()?;
    Ok(SimplicialComplex::new(vertices, &simplices)?)
}

fn parse_decorated(obj: &Map<String, Value>) -> Result<DecoratedQuotient, DocError> {
    let rank = usize_at(field(obj, "rank", "$")?, "$.rank")?;
    let mut faces = Vec::new();
    for (i, f) in array(field(obj, "faces", "$")?, "$.faces")?.iter().enumerate() {
        let p = format!("$.faces[{i}]");
        let fo = f.as_object().ok_or_else(|| schema(&p, "expected an object"))?;
        faces.push(Face {
            id: string(field(fo, "id", &p)?, &format!("{p}.id"))?.to_string(),
            depth: usize_at(field(fo, "depth", &p)?, &format!("{p}.depth"))?,
            dim: usize_at(field(fo, "dim", &p)?, &format!("{p}.dim"))?,
            noncompact: match fo.get("noncompact") {
                None => false,
                Some(b) => b.as_bool().ok_or_else(|| schema(format!("{p}.noncompact"), "expected a boolean"))?,
            },
        });
    }
    let mut covers = Vec::new();
    if let Some(c) = obj.get("covers") {
        for (i, pair) in array(c, "$.covers")?.iter().enumerate() {
            let p = format!("$.covers[{i}]");
            match array(pair, &p)?.as_slice() {
                [lo, hi] => covers.push((string(lo, &p)?.to_string(), string(hi, &p)?.to_string())),
                _ => return Err(schema(p, "a cover is a [lower, upper] pair of face ids")),
            }
        }
    }
    let support: BTreeMap<String, BTreeSet<String>> = match obj.get("support") {
        Some(s) => {
            let so = s.as_object().ok_or_else(|| schema("$.support", "expected an object"))?;
            so.iter()
                .map(|(face, facets)| {
                    let p = format!("$.support.{face}");
                    let ids = array(facets, &p)?
                        .iter()
                        .map(|f| string(f, &p).map(str::to_string))
                        .collect::<Result<BTreeSet<_>, _>>()?;
                    Ok((face.clone(), ids))
                })
                .collect::<Result<_, DocError>>()?
        }
        None => derived_support(&faces, &covers)?,
    };
    let poset = FacePoset::new(faces, &covers, &support)?;

    let mut labels = BTreeMap::new();
    if let Some(l) = obj.get("labels") {
        let lo = l.as_object().ok_or_else(|| schema("$.labels", "expected an object keyed by facet id"))?;
        for (id, w) in lo {
            let i = poset.index_of(id).ok_or_else(|| schema(format!("$.labels.{id}"), "unknown face id"))?;
            labels.insert(i, weight_at(w, &format!("$.labels.{id}"))?);
        }
    }
    let mut d = DecoratedQuotient::new(poset, UnimodularLabelling::new(rank, labels))?;

    if let Some(c) = obj.get("complex") {
        let co = c.as_object().ok_or_else(|| schema("$.complex", "expected an object"))?;
        let complex = parse_complex(co, "$.complex")?;
        let vertex_faces = match obj.get("vertex_faces") {
            None => None,
            Some(vf) => Some(
                array(vf, "$.vertex_faces")?
                    .iter()
                    .enumerate()
                    .map(|(i, id)| {
                        let p = format!("$.vertex_faces[{i}]");
                        d.poset.index_of(string(id, &p)?).ok_or_else(|| schema(p, "unknown face id"))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let chern = match obj.get("chern") {
            None => None,
            Some(ch) => {
                let mut entries = Vec::new();
                for (i, e) in array(ch, "$.chern")?.iter().enumerate() {
                    let p = format!("$.chern[{i}]");
                    let eo = e.as_object().ok_or_else(|| schema(&p, "expected {simplex, value}"))?;
                    let simplex = array(field(eo, "simplex", &p)?, &p)?
                        .iter()
                        .map(|v| usize_at(v, &format!("{p}.simplex")))
                        .collect::<Result<Vec<_>, _>>()?;
                    entries.push((simplex, vector_at(field(eo, "value", &p)?, &format!("{p}.value"))?));
                }
                Some(Cochain2::from_oriented(&complex, rank, &entries)?)
            }
        };
        d = d.with_chern(complex, chern, vertex_faces)?;
    } else if obj.contains_key("chern") || obj.contains_key("vertex_faces") {
        return Err(schema("$", "chern and vertex_faces require a complex"));
    }
    Ok(d)
}

/// Support of each face when none is given: the facets above it.
fn derived_support(faces: &[Face], covers: &[(String, String)]) -> Result<BTreeMap<String, BTreeSet<String>>, DocError> {
    let bare = FacePoset::new(faces.to_vec(), covers, &BTreeMap::new())?;
    Ok((0..bare.len())
        .map(|i| {
            let facets = bare
                .up_closure(i)
                .into_iter()
                .filter(|&j| bare.face(j).depth == 1)
                .map(|j| bare.face(j).id.clone())
                .collect();
            (bare.face(i).id.clone(), facets)
        })
        .collect())
}

fn strings(v: &LatticeVector) -> Vec<String> {
    v.entries().iter().map(ToString::to_string).collect()
}

/// Maximal simplices of every dimension.
fn maximal_simplices(k: &SimplicialComplex) -> Vec<Vec<usize>> {
    let top = k.dim().map_or(0, |d| d + 1);
    let mut out = Vec::new();
    for dim in 0..top {
        for s in k.simplices(dim) {
            let covered = k.simplices(dim + 1).iter().any(|t| s.iter().all(|v| t.contains(v)));
            if !covered {
                out.push(s.clone());
            }
        }
    }
    out
}

pub fn complex_to_json(k: &SimplicialComplex) -> Value {
    json!({"vertices": k.vertex_count(), "simplices": maximal_simplices(k)})
}

pub fn decorated_to_json(d: &DecoratedQuotient) -> Value {
    let p = &d.poset;
    let faces: Vec<Value> = p
        .faces()
        .iter()
        .map(|f| {
            let mut o = json!({"id": f.id, "depth": f.depth, "dim": f.dim});
            if f.noncompact {
                o["noncompact"] = json!(true);
            }
            o
        })
        .collect();
    let covers: Vec<Value> = p.covers().iter().map(|&(lo, hi)| json!([p.face(lo).id, p.face(hi).id])).collect();
    let support: Map<String, Value> = (0..p.len())
        .map(|i| (p.face(i).id.clone(), json!(p.support(i).iter().map(|&f| &p.face(f).id).collect::<Vec<_>>())))
        .collect();
    let labels: Map<String, Value> =
        d.labelling.labels.iter().map(|(&f, w)| (p.face(f).id.clone(), json!(strings(w.rep())))).collect();
    let mut v = json!({
        "version": VERSION,
        "kind": "decorated_quotient",
        "rank": d.ambient_rank().to_string(),
        "faces": faces,
        "covers": covers,
        "support": support,
        "labels": labels,
    });
    if let Some(k) = &d.complex {
        v["complex"] = complex_to_json(k);
        if let Some(vf) = &d.vertex_faces {
            v["vertex_faces"] = json!(vf.iter().map(|&f| &p.face(f).id).collect::<Vec<_>>());
        }
        if let Some(c) = &d.chern {
            let entries: Vec<Value> = k
                .simplices(2)
                .iter()
                .zip(c.values())
                .filter(|(_, val)| !val.is_zero())
                .map(|(s, val)| json!({"simplex": s, "value": strings(val)}))
                .collect();
            v["chern"] = json!(entries);
        }
    }
    v
}
