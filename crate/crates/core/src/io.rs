//! JSON formats and point parsing.
//!
//! Domain files:
//! `{"type": "polytope", "dim": d, "vertices": [[..], ..]}` or
//! `{"type": "ellipsoid", "dim": d, "form": [[..], ..]}`.
//! Entries are JSON integers or strings `"p"` / `"p/q"`; floats are
//! rejected so that combinatorics stays exact. A vertex may be given with
//! `d` affine coordinates (a trailing `1` is appended) or `d + 1`
//! homogeneous ones.
//!
//! Flat files: `{"vertices": [[..], ..]}`, one vertex per row in the same
//! coordinate conventions.
//!
//! Generator files: `{"generators": [[[..], ..], ..], "labels": ["a", ..]}`.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::domain::{ConvexDomain, DomainError};
use crate::linalg::{self, Matrix};
use crate::projective::ProjPoint;
use crate::scalar::{primitive, format_rat, parse_rat, ParseRatError, Rat};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{context}: {source}")]
    Rational { context: String, source: ParseRatError },
    #[error("{0}")]
    Schema(String),
    #[error("invalid domain: {0}")]
    Domain(#[from] DomainError),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
}

fn schema(msg: impl Into<String>) -> IoError {
    IoError::Schema(msg.into())
}

/// A JSON integer or rational string.
pub fn rat_from_json(v: &Value, context: &str) -> Result<Rat, IoError> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|source| IoError::Rational {
            context: context.to_string(),
            source,
        }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_integer(BigInt::from(i)))
            } else if let Some(u) = n.as_u64() {
                Ok(Rat::from_integer(BigInt::from(u)))
            } else {
                Err(IoError::Rational {
                    context: context.to_string(),
                    source: ParseRatError::FloatLiteral(n.to_string()),
                })
            }
        }
        other => Err(schema(format!("{context}: expected a rational, got {other}"))),
    }
}

fn rat_rows(rows: &[Vec<Value>], context: &str) -> Result<Matrix<Rat>, IoError> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, v)| rat_from_json(v, &format!("{context}[{i}][{j}]")))
                .collect()
        })
        .collect()
}

/// Homogeneous coordinates from `d` affine or `d + 1` homogeneous entries.
pub fn homogeneous(coords: Vec<Rat>, dim: usize) -> Result<ProjPoint<Rat>, IoError> {
    let coords = if coords.len() == dim {
        let mut c = coords;
        c.push(Rat::from_integer(BigInt::from(1)));
        c
    } else if coords.len() == dim + 1 {
        coords
    } else {
        return Err(schema(format!(
            "expected {dim} affine or {} homogeneous coordinates, got {}",
            dim + 1,
            coords.len()
        )));
    };
    ProjPoint::new(coords).map_err(|_| schema("the zero vector is not a projective point"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainFile {
    #[serde(rename = "type")]
    kind: String,
    dim: usize,
    #[serde(default)]
    vertices: Option<Vec<Vec<Value>>>,
    #[serde(default)]
    form: Option<Vec<Vec<Value>>>,
}

pub fn domain_from_json(text: &str) -> Result<ConvexDomain, IoError> {
    let file: DomainFile = serde_json::from_str(text)?;
    let d = file.dim;
    if d == 0 {
        return Err(schema("dim must be at least 1"));
    }
    match (file.kind.as_str(), file.vertices, file.form) {
        ("polytope", Some(vs), None) => {
            let rows = rat_rows(&vs, "vertices")?;
            let pts = rows.into_iter().map(|r| homogeneous(r, d)).collect::<Result<Vec<_>, _>>()?;
            Ok(ConvexDomain::polytope(pts)?)
        }
        ("ellipsoid", None, Some(form)) => {
            let rows = rat_rows(&form, "form")?;
            if rows.len() != d + 1 || rows.iter().any(|r| r.len() != d + 1) {
                return Err(schema(format!("form must be {0}x{0}", d + 1)));
            }
            Ok(ConvexDomain::ellipsoid(rows)?)
        }
        ("polytope", _, _) => Err(schema("a polytope needs \"vertices\" and no \"form\"")),
        ("ellipsoid", _, _) => Err(schema("an ellipsoid needs \"form\" and no \"vertices\"")),
        (other, _, _) => Err(schema(format!("unknown domain type {other:?}"))),
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_domain(path: &Path) -> Result<ConvexDomain, IoError> {
    domain_from_json(&read_text(path)?)
}

fn rat_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

/// Homogeneous rational JSON, vertices as primitive integer vectors on the
/// domain's cone sheet.
pub fn domain_to_json(domain: &ConvexDomain) -> Value {
    match domain {
        ConvexDomain::Polytope(p) => {
            let vertices: Vec<Vec<String>> = p
                .vertices()
                .iter()
                .map(|v| {
                    let prim = primitive(v.coords());
                    prim.iter().map(ToString::to_string).collect()
                })
                .collect();
            json!({"type": "polytope", "dim": p.dim(), "vertices": vertices})
        }
        ConvexDomain::Ellipsoid(e) => {
            let flat: Vec<Rat> = e.form().iter().flatten().cloned().collect();
            let scale = flat.iter().map(|x| x.abs()).max().expect("nonempty form");
            let form: Vec<Vec<String>> = e
                .form()
                .iter()
                .map(|r| rat_strings(&r.iter().map(|x| x / &scale).collect::<Vec<_>>()))
                .collect();
            json!({"type": "ellipsoid", "dim": e.dim(), "form": form})
        }
    }
}

pub fn point_to_strings(p: &ProjPoint<Rat>) -> Vec<String> {
    primitive(p.coords()).iter().map(ToString::to_string).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlatFile {
    vertices: Vec<Vec<Value>>,
    #[serde(default)]
    domain: Option<String>,
}

pub struct FlatSpec {
    pub vertices: Vec<Vec<Rat>>,
    /// Path of the ambient domain file, if the flat file names one.
    pub domain: Option<String>,
}

impl FlatSpec {
    pub fn points(&self, dim: usize) -> Result<Vec<ProjPoint<Rat>>, IoError> {
        self.vertices.iter().map(|v| homogeneous(v.clone(), dim)).collect()
    }
}

pub fn flat_from_json(text: &str) -> Result<FlatSpec, IoError> {
    let file: FlatFile = serde_json::from_str(text)?;
    Ok(FlatSpec {
        vertices: rat_rows(&file.vertices, "vertices")?,
        domain: file.domain,
    })
}

pub fn read_flat(path: &Path) -> Result<FlatSpec, IoError> {
    flat_from_json(&read_text(path)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    generators: Vec<Vec<Vec<Value>>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

/// Generator matrices with their labels (default `a`, `b`, ...).
pub fn generators_from_json(text: &str) -> Result<(Vec<Matrix<Rat>>, Vec<String>), IoError> {
    let file: GeneratorFile = serde_json::from_str(text)?;
    let mats = file
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| rat_rows(g, &format!("generators[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let labels = match file.labels {
        Some(l) if l.len() == mats.len() => l,
        Some(l) => return Err(schema(format!("{} labels for {} generators", l.len(), mats.len()))),
        None => (0..mats.len()).map(|i| char::from(b'a' + (i % 26) as u8).to_string()).collect(),
    };
    Ok((mats, labels))
}

/// Comma-separated rationals, `d` affine or `d + 1` homogeneous.
pub fn parse_point(s: &str, dim: usize) -> Result<ProjPoint<Rat>, IoError> {
    let coords = s
        .split(',')
        .enumerate()
        .map(|(i, t)| {
            parse_rat(t).map_err(|source| IoError::Rational {
                context: format!("coordinate {i} of {s:?}"),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    homogeneous(coords, dim)
}

/// A rational point as a JSON array of strings.
pub fn point_json(p: &ProjPoint<Rat>) -> Value {
    Value::from(rat_strings(p.coords()))
}

/// Matrix helper for callers building maps from parsed rows.
pub fn is_square(m: &Matrix<Rat>, n: usize) -> bool {
    m.len() == n && m.iter().all(|r| r.len() == n) && !linalg::determinant(m).is_zero()
}
