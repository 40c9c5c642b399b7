//! The digraph of a based complex, Morse matchings and the Morse graph.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::fmt;

use crate::complex::{BasedComplex, CellId};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Plain,
    ReversedMatched,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: CellId,
    pub tgt: CellId,
    pub kind: EdgeKind,
}

/// A labeled digraph on cell ids. Vertices keep the order they were given in;
/// edges are sorted by the positions of their endpoints.
#[derive(Debug, Clone)]
pub struct Digraph {
    vertices: Vec<CellId>,
    index: HashMap<CellId, usize>,
    edges: Vec<(usize, usize, EdgeKind)>,
    out: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(vertices: Vec<CellId>, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let index: HashMap<CellId, usize> = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut es = Vec::new();
        for e in edges {
            let s = *index.get(&e.src).ok_or_else(|| Error::UnknownCell(e.src.clone()))?;
            let t = *index.get(&e.tgt).ok_or_else(|| Error::UnknownCell(e.tgt.clone()))?;
            es.push((s, t, e.kind));
        }
        es.sort();
        es.dedup();
        let mut out = vec![Vec::new(); vertices.len()];
        for (i, &(s, _, _)) in es.iter().enumerate() {
            out[s].push(i);
        }
        Ok(Digraph { vertices, index, edges: es, out })
    }

    pub fn vertices(&self) -> &[CellId] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().map(|&(s, t, kind)| Edge {
            src: self.vertices[s].clone(),
            tgt: self.vertices[t].clone(),
            kind,
        })
    }

    pub fn edge_set(&self) -> BTreeSet<(CellId, CellId)> {
        self.edges().map(|e| (e.src, e.tgt)).collect()
    }

    pub fn index_of(&self, v: &CellId) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Outgoing edges of vertex `i` as `(target index, kind)`.
    pub fn out_edges(&self, i: usize) -> impl Iterator<Item = (usize, EdgeKind)> + '_ {
        self.out[i].iter().map(|&e| (self.edges[e].1, self.edges[e].2))
    }

    /// Kahn's algorithm; among available vertices the smallest id goes first.
    pub fn topological_order(&self) -> Result<Vec<CellId>> {
        self.topological_indices().map(|order| order.into_iter().map(|i| self.vertices[i].clone()).collect())
    }

    pub(crate) fn topological_indices(&self) -> Result<Vec<usize>> {
        let n = self.vertices.len();
        let mut indegree = vec![0usize; n];
        for &(_, t, _) in &self.edges {
            indegree[t] += 1;
        }
        let mut ready: BinaryHeap<Reverse<(&CellId, usize)>> =
            (0..n).filter(|&i| indegree[i] == 0).map(|i| Reverse((&self.vertices[i], i))).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse((_, v))) = ready.pop() {
            order.push(v);
            for (t, _) in self.out_edges(v) {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    ready.push(Reverse((&self.vertices[t], t)));
                }
            }
        }
        if order.len() < n {
            let remaining: Vec<bool> = indegree.iter().map(|&d| d > 0).collect();
            return Err(Error::Cycle(self.cycle_witness(&remaining)));
        }
        Ok(order)
    }

    /// Finds a directed cycle among vertices flagged in `candidates`, all of
    /// which have an incoming edge from another flagged vertex.
    fn cycle_witness(&self, candidates: &[bool]) -> Vec<CellId> {
        // Walk backwards along incoming edges inside the candidate set until a
        // vertex repeats.
        let mut incoming: Vec<Option<usize>> = vec![None; self.vertices.len()];
        for &(s, t, _) in &self.edges {
            if candidates[s] && candidates[t] && incoming[t].is_none() {
                incoming[t] = Some(s);
            }
        }
        let start = candidates.iter().position(|&c| c).expect("cycle exists");
        let mut seen = HashMap::new();
        let mut walk = Vec::new();
        let mut v = start;
        while !seen.contains_key(&v) {
            seen.insert(v, walk.len());
            walk.push(v);
            v = incoming[v].expect("candidate vertices have a candidate predecessor");
        }
        let mut cycle: Vec<usize> = walk[seen[&v]..].to_vec();
        cycle.reverse();
        // rotate so the smallest id leads
        let lead = (0..cycle.len()).min_by_key(|&i| &self.vertices[cycle[i]]).unwrap();
        cycle.rotate_left(lead);
        cycle.into_iter().map(|i| self.vertices[i].clone()).collect()
    }

    /// Number of edges on a longest directed path.
    pub fn longest_path_length(&self) -> Result<usize> {
        let order = self.topological_indices()?;
        let mut len = vec![0usize; self.vertices.len()];
        let mut best = 0;
        for v in order {
            best = best.max(len[v]);
            for (t, _) in self.out_edges(v) {
                len[t] = len[t].max(len[v] + 1);
            }
        }
        Ok(best)
    }
}

/// The digraph `G(C)`: an edge `α → β` for every nonzero block `d_{β,α}`.
pub fn build_digraph(complex: &BasedComplex) -> Digraph {
    build_morse_graph(complex, &Matching::default()).expect("empty matching")
}

/// `G^M(C)`: `G(C)` with the edges of `m` reversed and labeled.
pub fn build_morse_graph(complex: &BasedComplex, m: &Matching) -> Result<Digraph> {
    for (a, b) in m.edges() {
        if complex.component(a, b).is_none() {
            return Err(Error::InvalidMatching(vec![MatchingError::NotAnEdge(a.clone(), b.clone())]));
        }
    }
    let vertices = complex.cells().iter().map(|c| c.id.clone()).collect();
    let edges = complex.differential().iter().map(|(s, t, _)| {
        if m.contains(s, t) {
            Edge { src: t.clone(), tgt: s.clone(), kind: EdgeKind::ReversedMatched }
        } else {
            Edge { src: s.clone(), tgt: t.clone(), kind: EdgeKind::Plain }
        }
    });
    Digraph::new(vertices, edges)
}

/// A set of digraph edges `α → β` (with `deg β = deg α - 1`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    edges: BTreeSet<(CellId, CellId)>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, A, B>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<CellId>,
        B: Into<CellId>,
    {
        Matching { edges: pairs.into_iter().map(|(a, b)| (a.into(), b.into())).collect() }
    }

    pub fn insert(&mut self, src: CellId, tgt: CellId) -> bool {
        self.edges.insert((src, tgt))
    }

    pub fn contains(&self, src: &CellId, tgt: &CellId) -> bool {
        // BTreeSet<(CellId, CellId)> lookup needs an owned tuple
        self.edges.contains(&(src.clone(), tgt.clone()))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&CellId, &CellId)> {
        self.edges.iter().map(|(a, b)| (a, b))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_matched(&self, v: &CellId) -> bool {
        self.edges.iter().any(|(a, b)| a == v || b == v)
    }
}

/// Exact inverses `d_{β,α}^{-1}` of the matched blocks, keyed by `(α, β)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchedInverse {
    inverses: BTreeMap<(CellId, CellId), Matrix>,
}

impl MatchedInverse {
    pub fn get(&self, src: &CellId, tgt: &CellId) -> Option<&Matrix> {
        self.inverses.get(&(src.clone(), tgt.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CellId, &CellId, &Matrix)> {
        self.inverses.iter().map(|((a, b), m)| (a, b, m))
    }

    pub fn len(&self) -> usize {
        self.inverses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inverses.is_empty()
    }
}

/// A violated Morse-matching condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingError {
    SharedVertex(CellId),
    NotAnEdge(CellId, CellId),
    NonSquare(CellId, CellId),
    NotInvertible(CellId, CellId),
    Cycle(Vec<CellId>),
}

impl fmt::Display for MatchingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingError::SharedVertex(v) => write!(f, "vertex {v} is incident to more than one matched edge"),
            MatchingError::NotAnEdge(a, b) => write!(f, "{a} -> {b} is not an edge of the complex"),
            MatchingError::NonSquare(a, b) => write!(f, "matched block {a} -> {b} is not square"),
            MatchingError::NotInvertible(a, b) => write!(f, "matched block {a} -> {b} is not invertible"),
            MatchingError::Cycle(c) => {
                let ids: Vec<&str> = c.iter().map(CellId::as_str).collect();
                write!(f, "Morse graph has a directed cycle {}", ids.join(" -> "))
            }
        }
    }
}

/// Checks every Morse-matching condition and reports all violations.
pub fn validate_matching(
    complex: &BasedComplex,
    m: &Matching,
) -> std::result::Result<MatchedInverse, Vec<MatchingError>> {
    let mut errors = Vec::new();
    let mut incidence: BTreeMap<&CellId, usize> = BTreeMap::new();
    for (a, b) in m.edges() {
        *incidence.entry(a).or_default() += 1;
        *incidence.entry(b).or_default() += 1;
    }
    errors.extend(incidence.into_iter().filter(|&(_, n)| n > 1).map(|(v, _)| MatchingError::SharedVertex(v.clone())));

    let mut inverses = BTreeMap::new();
    let mut present = Matching::new();
    for (a, b) in m.edges() {
        let Some(block) = complex.component(a, b) else {
            errors.push(MatchingError::NotAnEdge(a.clone(), b.clone()));
            continue;
        };
        present.insert(a.clone(), b.clone());
        if !block.is_square() {
            errors.push(MatchingError::NonSquare(a.clone(), b.clone()));
            continue;
        }
        match block.inverse(complex.ring()) {
            Ok(inv) => {
                inverses.insert((a.clone(), b.clone()), inv);
            }
            Err(_) => errors.push(MatchingError::NotInvertible(a.clone(), b.clone())),
        }
    }

    let graph = build_morse_graph(complex, &present).expect("edges filtered to the digraph");
    if let Err(Error::Cycle(c)) = graph.topological_indices() {
        errors.push(MatchingError::Cycle(c));
    }

    if errors.is_empty() {
        Ok(MatchedInverse { inverses })
    } else {
        Err(errors)
    }
}

/// `M⁰`: unmatched cells in `(degree, id)` order.
pub fn critical_cells(complex: &BasedComplex, m: &Matching) -> Vec<CellId> {
    let matched: BTreeSet<&CellId> = m.edges().flat_map(|(a, b)| [a, b]).collect();
    complex.cells().iter().filter(|c| !matched.contains(&c.id)).map(|c| c.id.clone()).collect()
}
