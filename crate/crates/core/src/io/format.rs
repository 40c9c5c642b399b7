//! JSON file formats for complexes, matchings and graded maps.
//!
//! Ring elements are always JSON strings so big integers survive. Output is
//! canonical: keys in declaration order, cells by `(degree, id)`, components
//! by `(src, tgt)`, two-space indentation and a trailing newline.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::complex::{BasedComplex, BlockMap, Cell, CellId};
use crate::error::{Error, Result};
use crate::gamma::ReductionResult;
use crate::matrix::Matrix;
use crate::morse::Matching;
use crate::ring::RingSpec;

pub const COMPLEX_FORMAT: &str = "amt-complex/1";
pub const MATCHING_FORMAT: &str = "amt-matching/1";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexFile {
    format: String,
    ring: String,
    cells: Vec<CellEntry>,
    differential: Vec<ComponentEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellEntry {
    id: String,
    degree: i64,
    rank: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentEntry {
    src: String,
    tgt: String,
    matrix: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatchingFile {
    format: String,
    edges: Vec<(String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockMapFile {
    shift: i64,
    components: Vec<ComponentEntry>,
}

#[derive(Debug, Serialize)]
struct MapsFile {
    f: BlockMapFile,
    g: BlockMapFile,
    h: BlockMapFile,
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory serialization");
    s.push('\n');
    s
}

fn matrix_rows(m: &Matrix, ring: &RingSpec) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| ring.format(x)).collect()).collect()
}

fn components(map: &BlockMap, ring: &RingSpec) -> Vec<ComponentEntry> {
    map.iter()
        .map(|(s, t, m)| ComponentEntry { src: s.to_string(), tgt: t.to_string(), matrix: matrix_rows(m, ring) })
        .collect()
}

fn parse_matrix(entry: &ComponentEntry, ring: &RingSpec, shape: Option<(usize, usize)>) -> Result<Matrix> {
    let name = format!("component {} -> {}", entry.src, entry.tgt);
    let rows = entry
        .matrix
        .iter()
        .map(|row| row.iter().map(|x| ring.parse(x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::Schema(format!("{name}: {e}")))?;
    let m = Matrix::from_rows(rows).map_err(|_| Error::Schema(format!("{name}: ragged matrix rows")))?;
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::Schema(format!("{name}: empty matrix")));
    }
    if let Some(expected) = shape {
        if m.shape() != expected {
            return Err(Error::Schema(format!(
                "{name}: matrix is {}x{}, expected {}x{} (rank(tgt) x rank(src))",
                m.rows(),
                m.cols(),
                expected.0,
                expected.1
            )));
        }
    }
    Ok(m)
}

/// Parses and validates an `amt-complex/1` document.
pub fn parse_complex(text: &str) -> Result<BasedComplex> {
    let file: ComplexFile = serde_json::from_str(text)?;
    if file.format != COMPLEX_FORMAT {
        return Err(Error::Schema(format!("format must be {COMPLEX_FORMAT:?}, found {:?}", file.format)));
    }
    let ring: RingSpec = file.ring.parse().map_err(|e| Error::Schema(format!("ring: {e}")))?;
    let cells: Vec<Cell> = file.cells.iter().map(|c| Cell::new(c.id.as_str(), c.degree, c.rank)).collect();
    let ranks: HashMap<&str, usize> = file.cells.iter().map(|c| (c.id.as_str(), c.rank)).collect();
    let mut comps = Vec::with_capacity(file.differential.len());
    for entry in &file.differential {
        let shape = match (ranks.get(entry.tgt.as_str()), ranks.get(entry.src.as_str())) {
            (Some(&r), Some(&c)) => Some((r, c)),
            _ => None,
        };
        let m = parse_matrix(entry, &ring, shape)?;
        comps.push((CellId::new(&entry.src), CellId::new(&entry.tgt), m));
    }
    BasedComplex::build(ring, cells, comps)
}

pub fn write_complex(complex: &BasedComplex) -> String {
    let ring = complex.ring();
    let file = ComplexFile {
        format: COMPLEX_FORMAT.into(),
        ring: ring.to_string(),
        cells: complex
            .cells()
            .iter()
            .map(|c| CellEntry { id: c.id.to_string(), degree: c.degree, rank: c.rank })
            .collect(),
        differential: components(complex.differential(), ring),
    };
    to_pretty(&file)
}

pub fn parse_matching(text: &str) -> Result<Matching> {
    let file: MatchingFile = serde_json::from_str(text)?;
    if file.format != MATCHING_FORMAT {
        return Err(Error::Schema(format!("format must be {MATCHING_FORMAT:?}, found {:?}", file.format)));
    }
    Ok(Matching::from_pairs(file.edges))
}

pub fn write_matching(m: &Matching) -> String {
    let file = MatchingFile {
        format: MATCHING_FORMAT.into(),
        edges: m.edges().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
    };
    to_pretty(&file)
}

pub fn write_block_map(map: &BlockMap, ring: &RingSpec) -> String {
    to_pretty(&BlockMapFile { shift: map.shift(), components: components(map, ring) })
}

pub fn parse_block_map(text: &str, ring: &RingSpec) -> Result<BlockMap> {
    let file: BlockMapFile = serde_json::from_str(text)?;
    let mut map = BlockMap::zero(file.shift);
    for entry in &file.components {
        let m = parse_matrix(entry, ring, None)?;
        map.insert(CellId::new(&entry.src), CellId::new(&entry.tgt), m);
    }
    Ok(map)
}

/// `{"f": …, "g": …, "h": …}` for a reduction.
pub fn write_maps(result: &ReductionResult) -> String {
    let ring = result.reduced.ring();
    let file = |m: &BlockMap| BlockMapFile { shift: m.shift(), components: components(m, ring) };
    to_pretty(&MapsFile { f: file(&result.f), g: file(&result.g), h: file(&result.h) })
}

#[cfg(test)]
mod tests {
    use super::*;

    const INTERVAL: &str = r#"{
  "format": "amt-complex/1",
  "ring": "Z",
  "cells": [
    {
      "id": "x",
      "degree": 0,
      "rank": 1
    },
    {
      "id": "y",
      "degree": 0,
      "rank": 1
    },
    {
      "id": "a",
      "degree": 1,
      "rank": 1
    }
  ],
  "differential": [
    {
      "src": "a",
      "tgt": "x",
      "matrix": [
        [
          "-1"
        ]
      ]
    },
    {
      "src": "a",
      "tgt": "y",
      "matrix": [
        [
          "1"
        ]
      ]
    }
  ]
}
"#;

    #[test]
    fn canonical_round_trip_is_byte_exact() {
        let c = parse_complex(INTERVAL).unwrap();
        assert_eq!(c.cells().len(), 3);
        assert_eq!(c.edge_count(), 2);
        assert_eq!(write_complex(&c), INTERVAL);
    }

    #[test]
    fn minimal_file() {
        let c = parse_complex(
            r#"{"format": "amt-complex/1", "ring": "Q", "cells": [{"id": "p", "degree": 0, "rank": 1}], "differential": []}"#,
        )
        .unwrap();
        assert_eq!(c.cells().len(), 1);
        assert_eq!(*c.ring(), RingSpec::Rationals);
    }

    #[test]
    fn schema_errors() {
        let bad_shape = INTERVAL.replace("\"-1\"", "\"-1\", \"0\"");
        let err = parse_complex(&bad_shape).unwrap_err();
        assert!(matches!(&err, Error::Schema(msg) if msg.contains("a -> x")), "{err}");

        let bad_format = INTERVAL.replace("amt-complex/1", "amt-complex/2");
        assert!(matches!(parse_complex(&bad_format), Err(Error::Schema(_))));

        let bad_ring = INTERVAL.replace("\"Z\"", "\"F6\"");
        assert!(matches!(parse_complex(&bad_ring), Err(Error::Schema(_))));

        let bad_element = INTERVAL.replace("\"-1\"", "\"1/2\"");
        assert!(matches!(parse_complex(&bad_element), Err(Error::Schema(_))));

        let numeric = INTERVAL.replace("\"-1\"", "-1");
        assert!(matches!(parse_complex(&numeric), Err(Error::Json(_))));

        assert!(matches!(parse_complex("{"), Err(Error::Json(_))));
    }

    #[test]
    fn d_squared_failure_is_mathematical() {
        let text = r#"{"format": "amt-complex/1", "ring": "Z",
            "cells": [{"id": "p", "degree": 0, "rank": 1}, {"id": "e", "degree": 1, "rank": 1}, {"id": "t", "degree": 2, "rank": 1}],
            "differential": [{"src": "e", "tgt": "p", "matrix": [["1"]]}, {"src": "t", "tgt": "e", "matrix": [["1"]]}]}"#;
        let err = parse_complex(text).unwrap_err();
        assert!(matches!(err, Error::DSquaredNonzero(_)));
        assert!(err.is_mathematical());
    }

    #[test]
    fn matching_round_trip() {
        let m = Matching::from_pairs([("b", "y"), ("a", "x")]);
        let text = write_matching(&m);
        assert_eq!(parse_matching(&text).unwrap(), m);
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
    }

    #[test]
    fn block_map_round_trip() {
        let c = parse_complex(INTERVAL).unwrap();
        let text = write_block_map(c.differential(), c.ring());
        assert_eq!(&parse_block_map(&text, c.ring()).unwrap(), c.differential());
        assert!(text.starts_with("{\n  \"shift\": -1,\n  \"components\""));
    }
}
