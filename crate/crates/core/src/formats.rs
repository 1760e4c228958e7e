//! JSON schemas for matroids, complexes, cochain complexes and cochains.
//!
//! Rationals travel as strings `"a/b"` (bare integers are accepted on input)
//! and are normalized to lowest terms on load. Integer vectors are plain JSON
//! numbers, falling back to strings outside the `i64` range.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cohomology::CochainComplexQ;
use crate::complex::{Cell, WeightedComplex};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Q};
use crate::matroid::Matroid;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MatroidFile {
    Bases {
        n: usize,
        bases: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Uniform {
        r: usize,
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Graphic {
        edges: Vec<(usize, usize)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

impl MatroidFile {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("matroid file serializes")
    }

    pub fn to_matroid(&self) -> Result<Matroid> {
        let (m, label) = match self {
            Self::Bases { n, bases, label } => (Matroid::from_bases(*n, bases)?, label),
            Self::Uniform { r, n, label } => (Matroid::uniform(*r, *n)?, label),
            Self::Graphic { edges, label } => (Matroid::graphic(edges)?, label),
        };
        Ok(match label {
            Some(l) => m.with_label(l.clone()),
            None => m,
        })
    }

    pub fn from_matroid(m: &Matroid) -> Self {
        Self::Bases { n: m.n(), bases: m.bases(), label: m.label().map(str::to_owned) }
    }
}

pub fn load_matroid(s: &str) -> Result<Matroid> {
    MatroidFile::parse(s)?.to_matroid()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellFile {
    pub v: Vec<usize>,
    #[serde(default)]
    pub r: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub ambient_dim: usize,
    #[serde(with = "rational_vecs")]
    pub vertices: Vec<Vec<Q>>,
    #[serde(default, with = "bigint_vecs")]
    pub rays: Vec<Vec<BigInt>>,
    pub cells: Vec<CellFile>,
}

impl ComplexFile {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("complex file serializes")
    }

    pub fn to_complex(&self) -> Result<WeightedComplex> {
        let n = self.ambient_dim;
        if let Some(i) = self.vertices.iter().position(|v| v.len() != n) {
            return Err(Error::Parse(format!("vertex {i} does not have {n} coordinates")));
        }
        if let Some(i) = self.rays.iter().position(|r| r.len() != n) {
            return Err(Error::Parse(format!("ray {i} does not have {n} coordinates")));
        }
        for (i, c) in self.cells.iter().enumerate() {
            if c.v.iter().any(|&v| v >= self.vertices.len()) || c.r.iter().any(|&r| r >= self.rays.len()) {
                return Err(Error::Parse(format!("cell {i} refers to a missing vertex or ray")));
            }
        }
        let cells =
            self.cells.iter().map(|c| Cell { vertices: c.v.clone(), rays: c.r.clone(), weight: c.weight, dim: c.dim }).collect();
        Ok(WeightedComplex::new(n, self.vertices.clone(), self.rays.clone(), cells))
    }

    pub fn from_complex(c: &WeightedComplex) -> Self {
        Self {
            ambient_dim: c.ambient_dim,
            vertices: c.vertices.clone(),
            rays: c.rays.clone(),
            cells: c.cells.iter().map(|c| CellFile { v: c.vertices.clone(), r: c.rays.clone(), weight: c.weight, dim: c.dim }).collect(),
        }
    }
}

/// Parses a complex and adds the faces implied by the simplicial convention.
pub fn load_complex(s: &str) -> Result<WeightedComplex> {
    Ok(ComplexFile::parse(s)?.to_complex()?.with_face_closure())
}

pub fn emit_complex(c: &WeightedComplex) -> String {
    ComplexFile::from_complex(c).emit()
}

/// A cochain complex: `differentials[q]` is the `dims[q+1] × dims[q]` matrix of `d_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainFile {
    pub dims: Vec<usize>,
    #[serde(with = "rational_matrices")]
    pub differentials: Vec<Vec<Vec<Q>>>,
}

impl CochainFile {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("cochain file serializes")
    }

    pub fn to_complex(&self) -> Result<CochainComplexQ> {
        let d = self
            .differentials
            .iter()
            .enumerate()
            .map(|(q, rows)| {
                let cols = self.dims.get(q).copied().unwrap_or(0);
                if rows.iter().any(|r| r.len() != cols) {
                    return Err(Error::ShapeMismatch(format!("rows of d_{q} must have {cols} entries")));
                }
                Ok(QMatrix::from_rows(rows.clone(), cols))
            })
            .collect::<Result<Vec<_>>>()?;
        CochainComplexQ::new(self.dims.clone(), d)
    }

    pub fn from_complex(c: &CochainComplexQ) -> Self {
        Self { dims: c.dims().to_vec(), differentials: c.differentials().iter().map(QMatrix::to_rows).collect() }
    }
}

/// A cochain given either as a bare array or as `{"values": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormFile {
    Bare(#[serde(with = "rational_vec")] Vec<Q>),
    Object {
        #[serde(with = "rational_vec")]
        values: Vec<Q>,
    },
}

impl FormFile {
    pub fn parse(s: &str) -> Result<Vec<Q>> {
        let f: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(match f {
            Self::Bare(v) | Self::Object { values: v } => v,
        })
    }
}

/// Whether a JSON document is a cochain complex (it has `"differentials"`).
pub fn is_cochain_document(s: &str) -> Result<bool> {
    let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(v.get("differentials").is_some())
}

pub fn rational_to_string(x: &Q) -> String {
    x.to_string()
}

pub fn rationals_to_strings(v: &[Q]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RationalWire {
    Int(i64),
    Str(String),
}

fn parse_rational<E: serde::de::Error>(w: RationalWire) -> std::result::Result<Q, E> {
    match w {
        RationalWire::Int(i) => Ok(Q::from_integer(i.into())),
        RationalWire::Str(s) => {
            let q: Q = s.trim().parse().map_err(|_| E::custom(format!("invalid rational {s:?}")))?;
            Ok(q)
        }
    }
}

pub mod rational {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{parse_rational, RationalWire};
    use crate::linalg::Q;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        x.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        parse_rational(RationalWire::deserialize(d)?)
    }
}

pub mod rational_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{parse_rational, RationalWire};
    use crate::linalg::Q;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        Vec::<RationalWire>::deserialize(d)?.into_iter().map(parse_rational).collect()
    }
}

pub mod rational_vecs {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{parse_rational, RationalWire};
    use crate::linalg::Q;

    pub fn serialize<S: Serializer>(v: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        Vec::<Vec<RationalWire>>::deserialize(d)?.into_iter().map(|r| r.into_iter().map(parse_rational).collect()).collect()
    }
}

pub mod rational_matrices {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{parse_rational, RationalWire};
    use crate::linalg::Q;

    pub fn serialize<S: Serializer>(v: &[Vec<Vec<Q>>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|m| m.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Vec<Q>>>, D::Error> {
        Vec::<Vec<Vec<RationalWire>>>::deserialize(d)?
            .into_iter()
            .map(|m| m.into_iter().map(|r| r.into_iter().map(parse_rational).collect()).collect())
            .collect()
    }
}

pub mod bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    pub(crate) enum Wire {
        Small(i64),
        Big(String),
    }

    pub(crate) fn to_wire(x: &BigInt) -> Wire {
        i64::try_from(x).map_or_else(|_| Wire::Big(x.to_string()), Wire::Small)
    }

    pub(crate) fn from_wire<E: serde::de::Error>(w: Wire) -> Result<BigInt, E> {
        match w {
            Wire::Small(x) => Ok(BigInt::from(x)),
            Wire::Big(s) => s.parse().map_err(E::custom),
        }
    }

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_wire(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        from_wire(Wire::deserialize(d)?)
    }
}

/// Integer vectors as JSON numbers (strings beyond the `i64` range).
pub mod bigint_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::bigint::{from_wire, to_wire, Wire};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_wire).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Wire>::deserialize(d)?.into_iter().map(from_wire).collect()
    }
}

pub mod bigint_vecs {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::bigint::{from_wire, to_wire, Wire};

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|r| r.iter().map(to_wire).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<Wire>>::deserialize(d)?.into_iter().map(|r| r.into_iter().map(from_wire).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::bergman_fan;
    use crate::linalg::qf;

    const LINE: &str = r#"{
        "ambient_dim": 2,
        "vertices": [["0", "0"]],
        "rays": [[1, 0], [0, 1], [-1, -1]],
        "cells": [{"v": [0], "r": [0], "weight": 1}, {"v": [0], "r": [1], "weight": 1}, {"v": [0], "r": [2], "weight": 1}]
    }"#;

    #[test]
    fn matroid_files() {
        let m = load_matroid(r#"{"type": "uniform", "r": 2, "n": 3, "label": "U23"}"#).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.label(), Some("U23"));
        let g = load_matroid(r#"{"type": "graphic", "edges": [[0,1],[1,2],[0,2]]}"#).unwrap();
        assert_eq!(g.bases(), m.bases());
        let f = MatroidFile::from_matroid(&m);
        assert_eq!(MatroidFile::parse(&f.emit()).unwrap(), f);
        assert!(matches!(load_matroid(r#"{"type": "uniform", "r": 2}"#), Err(Error::Parse(_))));
        assert!(matches!(load_matroid("not json"), Err(Error::Parse(_))));
    }

    #[test]
    fn complex_round_trip() {
        let c = load_complex(LINE).unwrap();
        assert_eq!(c.cells.len(), 4);
        assert!(c.validate().is_ok());
        let once = emit_complex(&c);
        let again = emit_complex(&load_complex(&once).unwrap());
        assert_eq!(once, again);
        assert_eq!(ComplexFile::parse(&once).unwrap().to_complex().unwrap(), c);
    }

    #[test]
    fn rationals_are_normalized() {
        let s = r#"{"ambient_dim": 1, "vertices": [["2/4"], [3]], "cells": [{"v": [0, 1], "weight": 1}]}"#;
        let c = load_complex(s).unwrap();
        assert_eq!(c.vertices[0][0], qf(1, 2));
        assert!(emit_complex(&c).contains("\"1/2\""));
        assert!(load_complex(r#"{"ambient_dim": 1, "vertices": [["x"]], "cells": []}"#).is_err());
    }

    #[test]
    fn zero_weight_is_rejected_on_validation() {
        let s = LINE.replacen("\"weight\": 1", "\"weight\": 0", 1);
        assert_eq!(load_complex(&s).unwrap().validate().unwrap_err(), Error::ZeroWeight { cell: 0 });
    }

    #[test]
    fn bergman_round_trip() {
        let f = bergman_fan(&Matroid::uniform(3, 4).unwrap()).unwrap();
        assert_eq!(load_complex(&emit_complex(&f)).unwrap(), f);
    }

    #[test]
    fn cochain_files() {
        let s = r#"{"dims": [2, 1], "differentials": [[["1", "-1"]]]}"#;
        assert!(is_cochain_document(s).unwrap());
        let c = CochainFile::parse(s).unwrap().to_complex().unwrap();
        assert_eq!(c.dims(), &[2, 1]);
        assert_eq!(CochainFile::from_complex(&c), CochainFile::parse(s).unwrap());
        assert_eq!(FormFile::parse(r#"["1/2", 3]"#).unwrap(), vec![qf(1, 2), qf(3, 1)]);
        assert_eq!(FormFile::parse(r#"{"values": ["1"]}"#).unwrap(), vec![qf(1, 1)]);
    }
}
