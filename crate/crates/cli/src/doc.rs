//! Wire formats: the input document and the machine-readable report.
//!
//! Integers are arbitrary precision: values within the 53-bit range are
//! plain JSON numbers, anything larger is a decimal string, and both forms
//! are accepted on input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;
use toric_defect::lattice::IntVector;
use toric_defect::polytope::PointConfiguration;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid document: {0}")]
    Invalid(String),
}

/// Arbitrary-precision integer on the wire.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WireInt(pub BigInt);

const SAFE_RANGE: i64 = 1 << 53;

impl Serialize for WireInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.abs() < SAFE_RANGE => serializer.serialize_i64(v),
            _ => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for WireInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = WireInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or a decimal string")
            }
            fn visit_i64<E: DeError>(self, v: i64) -> Result<WireInt, E> {
                Ok(WireInt(BigInt::from(v)))
            }
            fn visit_u64<E: DeError>(self, v: u64) -> Result<WireInt, E> {
                Ok(WireInt(BigInt::from(v)))
            }
            fn visit_str<E: DeError>(self, v: &str) -> Result<WireInt, E> {
                v.parse::<BigInt>()
                    .map(WireInt)
                    .map_err(|_| E::custom(format!("not a decimal integer: {v:?}")))
            }
        }
        deserializer.deserialize_any(V)
    }
}

impl From<&toric_defect::lattice::Int> for WireInt {
    fn from(v: &toric_defect::lattice::Int) -> Self {
        WireInt(v.clone())
    }
}

pub fn wire_vector(v: &IntVector) -> Vec<WireInt> {
    v.entries().iter().map(WireInt::from).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputOptions {
    #[serde(default)]
    pub use_hull_points: bool,
    #[serde(default = "default_trials")]
    pub oracle_trials: u32,
    #[serde(default)]
    pub seed: u64,
}

fn default_trials() -> u32 {
    8
}

impl Default for InputOptions {
    fn default() -> Self {
        InputOptions {
            use_hull_points: false,
            oracle_trials: default_trials(),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub name: String,
    pub dim: usize,
    pub points: Vec<Vec<WireInt>>,
    #[serde(default)]
    pub options: InputOptions,
}

impl InputDocument {
    pub fn configuration(&self) -> Result<PointConfiguration, DocError> {
        let points: Vec<IntVector> = self
            .points
            .iter()
            .map(|row| IntVector::new(row.iter().map(|w| w.0.clone()).collect()))
            .collect();
        PointConfiguration::new(self.dim, points).map_err(|e| DocError::Invalid(e.to_string()))
    }
}

/// Strict parse with location-anchored diagnostics: syntax errors carry
/// line/column, semantic errors name the offending row.
pub fn parse_input(bytes: &[u8]) -> Result<InputDocument, DocError> {
    let doc: InputDocument = serde_json::from_slice(bytes).map_err(|e| {
        DocError::Parse(format!(
            "line {}, column {}: {}",
            e.line(),
            e.column(),
            e
        ))
    })?;
    if doc.dim == 0 {
        return Err(DocError::Invalid("dim must be positive".into()));
    }
    if doc.points.is_empty() {
        return Err(DocError::Invalid("points must be nonempty".into()));
    }
    for (i, row) in doc.points.iter().enumerate() {
        if row.len() != doc.dim {
            return Err(DocError::Invalid(format!(
                "row {} has {} entries, expected {}",
                i,
                row.len(),
                doc.dim
            )));
        }
    }
    for i in 0..doc.points.len() {
        for j in i + 1..doc.points.len() {
            if doc.points[i] == doc.points[j] {
                return Err(DocError::Invalid(format!(
                    "row {} duplicates row {}",
                    j, i
                )));
            }
        }
    }
    Ok(doc)
}

// ---------------------------------------------------------------------------
// report document

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VertexCheckDoc {
    pub vertex: Vec<WireInt>,
    pub generated: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub missing: Option<Vec<WireInt>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HypothesesDoc {
    pub simple: bool,
    pub semigroup_checks: Vec<VertexCheckDoc>,
    pub all_ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BlockDoc {
    pub image_vertex: Vec<WireInt>,
    pub points: Vec<Vec<WireInt>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CayleyStructureDoc {
    /// matrix of the projection, one row per image coordinate
    pub projection: Vec<Vec<WireInt>>,
    pub image_dim: usize,
    pub image_vertices: Vec<Vec<WireInt>>,
    pub image_is_simplex: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub image_defect: Option<usize>,
    pub blocks: Vec<BlockDoc>,
    pub kernel_rank: usize,
    pub elementary: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DefectDoc {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub combinatorial: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_max_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub agreement: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WitnessDoc {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fiber_factors: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub base_dim: Option<usize>,
    /// two disjoint faces holding every lattice point, for simplex inputs
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub two_faces: Option<(Vec<usize>, Vec<usize>)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportDocument {
    pub input: InputDocument,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reembedded_from_dim: Option<usize>,
    pub analyzed_dim: usize,
    pub analyzed_points: usize,
    pub hypotheses: HypothesesDoc,
    pub cayley_structures: Vec<CayleyStructureDoc>,
    pub defect: DefectDoc,
    pub verdict: String,
    pub witnesses: WitnessDoc,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub inconsistency: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<u64>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_wellformed_document() {
        let text = r#"{
            "name": "prism",
            "dim": 4,
            "points": [
                [0,0,0,0],[1,0,0,0],[0,0,1,0],[0,2,1,0],
                [0,0,0,1],[1,0,0,1],[0,0,1,1],[0,2,1,1]
            ]
        }"#;
        let doc = parse_input(text.as_bytes()).unwrap();
        assert_eq!(doc.points.len(), 8);
        assert_eq!(doc.dim, 4);
        assert_eq!(doc.options, InputOptions::default());
    }

    #[test]
    fn rejects_empty_points() {
        let text = r#"{"name": "x", "dim": 2, "points": []}"#;
        assert!(matches!(
            parse_input(text.as_bytes()),
            Err(DocError::Invalid(_))
        ));
    }

    #[test]
    fn rejects_ragged_row_naming_index() {
        let text = r#"{"name": "x", "dim": 2, "points": [[0,0],[1]]}"#;
        match parse_input(text.as_bytes()) {
            Err(DocError::Invalid(msg)) => assert!(msg.contains("row 1"), "{msg}"),
            other => panic!("expected invalid document, got {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicates() {
        let text = r#"{"name": "x", "dim": 1, "points": [[0],[0]]}"#;
        assert!(matches!(
            parse_input(text.as_bytes()),
            Err(DocError::Invalid(_))
        ));
    }

    #[test]
    fn syntax_error_carries_location() {
        let text = "{\n  \"name\": }";
        match parse_input(text.as_bytes()) {
            Err(DocError::Parse(msg)) => assert!(msg.contains("line 2"), "{msg}"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn big_integers_round_trip_as_strings() {
        let big = "18014398509481985"; // 2^54 + 1
        let text = format!(
            r#"{{"name": "big", "dim": 1, "points": [[0], ["{big}"]]}}"#
        );
        let doc = parse_input(text.as_bytes()).unwrap();
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains(&format!("\"{big}\"")));
        let back = parse_input(json.as_bytes()).unwrap();
        assert_eq!(doc, back);
    }

    #[test]
    fn input_round_trip_is_identity() {
        let text = r#"{
            "name": "square",
            "dim": 2,
            "points": [[0,0],[1,0],[0,1],[1,1]],
            "options": {"use_hull_points": true, "oracle_trials": 4, "seed": 9}
        }"#;
        let doc = parse_input(text.as_bytes()).unwrap();
        let json = serde_json::to_string(&doc).unwrap();
        let back = parse_input(json.as_bytes()).unwrap();
        assert_eq!(doc, back);
    }
}
