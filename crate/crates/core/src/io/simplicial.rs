//! Simplicial chain complexes from facet lists.

use std::collections::BTreeSet;

use crate::complex::{BasedComplex, Cell, CellId};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::RingSpec;

/// Reads facets: one per line, vertex labels separated by spaces; blank
/// lines and `#` comments are skipped. Each facet is returned sorted.
pub fn parse_facets(text: &str) -> Result<Vec<Vec<u64>>> {
    let mut facets = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut facet = Vec::new();
        for tok in line.split_whitespace() {
            let v = tok
                .parse::<u64>()
                .map_err(|_| Error::Schema(format!("line {}: bad vertex label {tok:?}", lineno + 1)))?;
            facet.push(v);
        }
        let distinct: BTreeSet<u64> = facet.iter().copied().collect();
        if distinct.len() != facet.len() {
            return Err(Error::Schema(format!("line {}: facet repeats a vertex", lineno + 1)));
        }
        facets.push(distinct.into_iter().collect());
    }
    Ok(facets)
}

pub fn simplex_id(vertices: &[u64]) -> CellId {
    let parts: Vec<String> = vertices.iter().map(u64::to_string).collect();
    CellId::new(format!("s{}", parts.join("_")))
}

/// The simplicial chain complex generated by `facets` (sorted vertex lists).
///
/// Every nonempty face becomes a rank-1 cell `s<v0>_<v1>…` in degree
/// `#vertices - 1`; the face omitting the `i`-th vertex receives `(-1)^i`.
pub fn complex_from_facets(facets: &[Vec<u64>], ring: RingSpec) -> Result<BasedComplex> {
    let mut faces: BTreeSet<Vec<u64>> = BTreeSet::new();
    for facet in facets {
        let k = facet.len();
        if k >= 64 {
            return Err(Error::InvalidParameter(format!("facet with {k} vertices is too large")));
        }
        for mask in 1u64..(1u64 << k) {
            faces.insert((0..k).filter(|i| mask >> i & 1 == 1).map(|i| facet[i]).collect());
        }
    }
    let cells = faces.iter().map(|f| Cell::new(simplex_id(f), f.len() as i64 - 1, 1)).collect();
    let mut comps = Vec::new();
    for face in faces.iter().filter(|f| f.len() > 1) {
        for i in 0..face.len() {
            let mut boundary = face.clone();
            boundary.remove(i);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            comps.push((simplex_id(face), simplex_id(&boundary), Matrix::from_i64(&ring, &[&[sign]])));
        }
    }
    BasedComplex::build(ring, cells, comps)
}

/// [`parse_facets`] followed by [`complex_from_facets`].
pub fn from_simplicial(text: &str, ring: RingSpec) -> Result<BasedComplex> {
    complex_from_facets(&parse_facets(text)?, ring)
}
