//! Input documents: JSON objects carrying `"format": "torcat/1"` and a
//! `kind`, parsed strictly (unknown fields rejected) unless lenient.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds::SpaceDescriptor;
use crate::catalog::{CatalogEntry, EntryData};
use crate::charpair::{connected_sum, Base, CharacteristicPair, ConnectedSumDescriptor, Side};
use crate::combi::{Face, FaceComplex, OrbitSurface, SurfaceDescriptor, Triangulation};
use crate::intlat::IntMatrix;

use super::CliError;

pub const FORMAT: &str = "torcat/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeDoc {
    pub dimension: usize,
    pub facets: Vec<String>,
    /// Each vertex as the names of the facets meeting there.
    pub vertices: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseDoc {
    Polytope(PolytopeDoc),
    Surface(SurfaceDescriptor),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairBody {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub base: BaseDoc,
    /// One row per facet (polytope) or boundary edge (surface).
    pub lambda: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangulation: Option<Triangulation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectedSumDoc {
    pub left: PairBody,
    pub right: PairBody,
    pub k: usize,
    /// Facet names cutting out the gluing face; empty for the interior.
    pub face_left: Vec<String>,
    pub face_right: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorldDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    pub spaces: Vec<SpaceDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixEntry {
    Int(i64),
    /// Decimal string, for entries beyond 64 bits.
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: Vec<Vec<MatrixEntry>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Document {
    Pair(PairBody),
    Surface(SurfaceDescriptor),
    Triangulation(Triangulation),
    ConnectedSum(ConnectedSumDoc),
    World(WorldDoc),
    Matrix(MatrixDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Pair(_) => "characteristic-pair",
            Document::Surface(_) => "orbit-surface",
            Document::Triangulation(_) => "triangulation",
            Document::ConnectedSum(_) => "connected-sum",
            Document::World(_) => "descriptor-world",
            Document::Matrix(_) => "matrix",
        }
    }

    pub fn to_value(&self) -> Value {
        let body = match self {
            Document::Pair(b) => serde_json::to_value(b),
            Document::Surface(b) => serde_json::to_value(b),
            Document::Triangulation(b) => serde_json::to_value(b),
            Document::ConnectedSum(b) => serde_json::to_value(b),
            Document::World(b) => serde_json::to_value(b),
            Document::Matrix(b) => serde_json::to_value(b),
        }
        .expect("documents serialize");
        let mut map = match body {
            Value::Object(m) => m,
            _ => unreachable!("documents are objects"),
        };
        map.insert("format".into(), FORMAT.into());
        map.insert("kind".into(), self.kind().into());
        Value::Object(map)
    }
}

fn body<T: DeserializeOwned>(value: Value, strict: bool) -> Result<T, CliError> {
    let mut unknown = Vec::new();
    let parsed: T = serde_ignored::deserialize(value, |path| unknown.push(path.to_string()))
        .map_err(|e| CliError::Parse(format!("schema: {e}")))?;
    if strict && !unknown.is_empty() {
        return Err(CliError::Parse(format!("unknown field(s): {}", unknown.join(", "))));
    }
    Ok(parsed)
}

pub fn parse(text: &str, strict: bool) -> Result<Document, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("not JSON: {e}")))?;
    let Value::Object(mut map) = value else {
        return Err(CliError::Parse("document must be a JSON object".into()));
    };
    match map.remove("format") {
        Some(Value::String(f)) if f == FORMAT => {}
        Some(other) => return Err(CliError::Parse(format!("unsupported format {other}, expected {FORMAT:?}"))),
        None => return Err(CliError::Parse("missing \"format\" field".into())),
    }
    let kind = match map.remove("kind") {
        Some(Value::String(k)) => k,
        _ => return Err(CliError::Parse("missing \"kind\" field".into())),
    };
    let rest = Value::Object(map);
    Ok(match kind.as_str() {
        "characteristic-pair" => Document::Pair(body(rest, strict)?),
        "orbit-surface" => Document::Surface(body(rest, strict)?),
        "triangulation" => Document::Triangulation(body(rest, strict)?),
        "connected-sum" => Document::ConnectedSum(body(rest, strict)?),
        "descriptor-world" => Document::World(body(rest, strict)?),
        "matrix" => Document::Matrix(body(rest, strict)?),
        other => return Err(CliError::Parse(format!("unknown document kind {other:?}"))),
    })
}

/// A pair together with the facet names used in its document.
#[derive(Debug, Clone)]
pub struct ParsedPair {
    pub pair: CharacteristicPair,
    pub facet_names: Vec<String>,
    pub triangulation: Option<Triangulation>,
}

impl ParsedPair {
    pub fn face(&self, names: &[String]) -> Result<Face, CliError> {
        let mut facets = Vec::new();
        for n in names {
            let i = self
                .facet_names
                .iter()
                .position(|f| f == n)
                .ok_or_else(|| CliError::Parse(format!("unknown facet name {n:?}")))?;
            facets.push(i);
        }
        Ok(Face::new(facets))
    }
}

pub fn build_pair(doc: &PairBody) -> Result<ParsedPair, CliError> {
    let (base, facet_names) = match &doc.base {
        BaseDoc::Polytope(p) => {
            let mut index = BTreeMap::new();
            for (i, name) in p.facets.iter().enumerate() {
                if index.insert(name.as_str(), i).is_some() {
                    return Err(CliError::Parse(format!("facet name {name:?} used twice")));
                }
            }
            let mut sets = Vec::new();
            for v in &p.vertices {
                let mut set = Vec::new();
                for name in v {
                    set.push(*index.get(name.as_str()).ok_or_else(|| CliError::Parse(format!("unknown facet name {name:?}")))?);
                }
                sets.push(set);
            }
            let complex = FaceComplex::build(p.dimension, p.facets.len(), sets).map_err(|e| CliError::Math(e.to_string()))?;
            (Base::Polytope(complex), p.facets.clone())
        }
        BaseDoc::Surface(s) => {
            let surface = OrbitSurface::build(s).map_err(|e| CliError::Math(e.to_string()))?;
            let names = (0..surface.edge_count()).map(|i| format!("E{i}")).collect();
            (Base::Surface(surface), names)
        }
    };
    let pair = CharacteristicPair::new(base, doc.lambda.clone()).map_err(|e| CliError::Math(e.to_string()))?;
    Ok(ParsedPair { pair, facet_names, triangulation: doc.triangulation.clone() })
}

pub fn build_connected_sum(doc: &ConnectedSumDoc) -> Result<(ConnectedSumDescriptor, [ParsedPair; 2]), CliError> {
    let left = build_pair(&doc.left)?;
    let right = build_pair(&doc.right)?;
    let fl = left.face(&doc.face_left)?;
    let fr = right.face(&doc.face_right)?;
    let d = connected_sum(&left.pair, &right.pair, doc.k, fl, fr).map_err(|e| CliError::Math(e.to_string()))?;
    Ok((d, [left, right]))
}

pub fn build_matrix(doc: &MatrixDoc) -> Result<IntMatrix, CliError> {
    let mut rows = Vec::new();
    for row in &doc.rows {
        let mut out = Vec::new();
        for e in row {
            out.push(match e {
                MatrixEntry::Int(i) => BigInt::from(*i),
                MatrixEntry::Text(s) => {
                    s.trim().parse::<BigInt>().map_err(|_| CliError::Parse(format!("matrix entry {s:?} is not an integer")))?
                }
            });
        }
        rows.push(out);
    }
    IntMatrix::from_rows(&rows).map_err(|e| CliError::Parse(e.to_string()))
}

/// Document body for a pair, naming polytope facets `F0, F1, ...`.
pub fn pair_body(pair: &CharacteristicPair, name: Option<&str>, triangulation: Option<&Triangulation>) -> PairBody {
    let base = match pair.base() {
        Base::Polytope(p) => {
            let names: Vec<String> = (0..p.facet_count()).map(|i| format!("F{i}")).collect();
            BaseDoc::Polytope(PolytopeDoc {
                dimension: p.dimension(),
                vertices: p.vertices().iter().map(|v| v.facets().iter().map(|&f| names[f].clone()).collect()).collect(),
                facets: names,
            })
        }
        Base::Surface(s) => BaseDoc::Surface(s.descriptor()),
    };
    PairBody {
        name: name.map(str::to_string),
        base,
        lambda: pair.lambda().to_vec(),
        triangulation: triangulation.cloned(),
    }
}

fn face_names(face: &Face) -> Vec<String> {
    face.facets().iter().map(|f| format!("F{f}")).collect()
}

pub fn connected_sum_doc(d: &ConnectedSumDescriptor) -> ConnectedSumDoc {
    ConnectedSumDoc {
        left: pair_body(&d.left, None, None),
        right: pair_body(&d.right, None, None),
        k: d.k,
        face_left: face_names(d.face(Side::Left)),
        face_right: face_names(d.face(Side::Right)),
    }
}

/// The input document reproducing a catalog entry.
pub fn export_entry(entry: &CatalogEntry) -> Document {
    match &entry.data {
        EntryData::Pair { pair, triangulation } => {
            Document::Pair(pair_body(pair, Some(&entry.name), triangulation.as_ref()))
        }
        EntryData::ConnectedSum(d) => Document::ConnectedSum(connected_sum_doc(d)),
        EntryData::World { spaces, subject } => {
            Document::World(WorldDoc { subject: Some(subject.clone()), spaces: spaces.clone() })
        }
        EntryData::Lens { descriptor, .. } => {
            Document::World(WorldDoc { subject: Some(descriptor.name.clone()), spaces: vec![descriptor.clone()] })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_entries;

    #[test]
    fn export_parse_round_trip() {
        for e in catalog_entries() {
            let doc = export_entry(&e);
            let text = serde_json::to_string(&doc.to_value()).unwrap();
            let back = parse(&text, true).unwrap();
            assert_eq!(back, doc, "{}", e.name);
            if let Document::Pair(body) = &back {
                let parsed = build_pair(body).unwrap();
                assert_eq!(&parsed.pair, e.pair().unwrap());
            }
            if let (Document::ConnectedSum(body), EntryData::ConnectedSum(d)) = (&back, &e.data) {
                assert_eq!(&build_connected_sum(body).unwrap().0, d);
            }
        }
    }

    #[test]
    fn strictness() {
        let text = r#"{"format":"torcat/1","kind":"matrix","rows":[[1,2],[3,4]],"extra":1}"#;
        assert!(matches!(parse(text, true), Err(CliError::Parse(_))));
        assert!(parse(text, false).is_ok());
        let nested = r#"{"format":"torcat/1","kind":"orbit-surface","genus":0,"orientable":true,"boundary":[{"corners":2,"x":0}]}"#;
        assert!(matches!(parse(nested, true), Err(CliError::Parse(_))));
        let relation = r#"{"format":"torcat/1","kind":"descriptor-world","spaces":[{"name":"A"},{"name":"B"},
            {"name":"P","relation":{"diagonal-product-of":{"factors":["A","B"],"typo":1}}}]}"#;
        assert!(matches!(parse(relation, true), Err(CliError::Parse(_))));
        assert!(parse(relation, false).is_ok());
    }

    #[test]
    fn big_matrix_entries() {
        let text = r#"{"format":"torcat/1","kind":"matrix","rows":[["123456789012345678901234567890", 0],[0, 1]]}"#;
        let Document::Matrix(m) = parse(text, true).unwrap() else { panic!() };
        assert!(build_matrix(&m).is_ok());
        let bad = MatrixDoc { rows: vec![vec![MatrixEntry::Text("x".into())]] };
        assert!(matches!(build_matrix(&bad), Err(CliError::Parse(_))));
    }
}
