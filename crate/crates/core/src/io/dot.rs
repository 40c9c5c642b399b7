//! Graphviz rendering of `G(C)` and `G^M(C)`.

use std::fmt::Write;

use crate::complex::{BasedComplex, CellId};
use crate::error::{Error, Result};
use crate::morse::{build_morse_graph, critical_cells, validate_matching, EdgeKind, Matching};

fn quote(id: &CellId) -> String {
    format!("\"{}\"", id.as_str().replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT digraph of the complex, with the matching's edges reversed and bold
/// and critical cells drawn as double circles. Without a matching no cell is
/// marked critical.
pub fn export_dot(complex: &BasedComplex, matching: Option<&Matching>) -> Result<String> {
    let empty = Matching::new();
    let m = matching.unwrap_or(&empty);
    if matching.is_some() {
        validate_matching(complex, m).map_err(Error::InvalidMatching)?;
    }
    let critical = if matching.is_some() { critical_cells(complex, m) } else { Vec::new() };
    let graph = build_morse_graph(complex, m)?;

    let mut out = String::from("digraph G {\n");
    for cell in complex.cells() {
        let mut attrs = format!("label={}", quote(&CellId::new(format!("{} (deg {})", cell.id, cell.degree))));
        if critical.contains(&cell.id) {
            attrs.push_str(", shape=doublecircle");
        }
        writeln!(out, "  {} [{attrs}];", quote(&cell.id)).unwrap();
    }
    // Digraph edges are ordered by endpoint positions, i.e. (degree, id).
    for e in graph.edges() {
        match e.kind {
            EdgeKind::Plain => writeln!(out, "  {} -> {};", quote(&e.src), quote(&e.tgt)),
            EdgeKind::ReversedMatched => writeln!(out, "  {} -> {} [style=bold];", quote(&e.src), quote(&e.tgt)),
        }
        .unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
