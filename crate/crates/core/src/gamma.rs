//! Path sums `Γ_{β,α}` over the Morse graph and the reduction they define.
//!
//! A plain edge `σ → τ` of `G^M` contributes `d_{τ,σ}`; a reversed matched
//! edge `σ → τ` (with `τ → σ` in the matching) contributes `-d_{σ,τ}^{-1}`.
//! `Γ_{β,α}` is the sum over all directed paths `α → … → β` of the composite
//! along the path, with the empty path giving the identity on `C_α`.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{BasedComplex, BlockMap, CellId};
use crate::error::{Error, Result};
use crate::hpt::Contraction;
use crate::matrix::Matrix;
use crate::morse::{build_morse_graph, critical_cells, validate_matching, EdgeKind, MatchedInverse, Matching};

/// Hard cap on the number of paths [`gamma_bruteforce`] will enumerate.
pub const MAX_ENUMERATED_PATHS: usize = 1_000_000;

/// `Γ_{β,α}` for one source `α` and every `β` with a nonzero sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaTable {
    pub source: CellId,
    pub targets: BTreeMap<CellId, Matrix>,
}

/// Morse graph of a validated matching, with per-edge maps and a fixed
/// topological order, ready for repeated [`GammaEngine::gamma_from`] calls.
pub struct GammaEngine<'a> {
    complex: &'a BasedComplex,
    /// Vertex `i` is `complex.cells()[i]`.
    order: Vec<usize>,
    position: Vec<usize>,
    out: Vec<Vec<(usize, Matrix)>>,
}

impl<'a> GammaEngine<'a> {
    pub fn new(complex: &'a BasedComplex, m: &Matching, inv: &MatchedInverse) -> Result<Self> {
        let ring = complex.ring();
        let graph = build_morse_graph(complex, m)?;
        let order = graph.topological_indices()?;
        let mut position = vec![0; order.len()];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }
        let ids = graph.vertices();
        let mut out: Vec<Vec<(usize, Matrix)>> = vec![Vec::new(); ids.len()];
        for v in 0..ids.len() {
            for (w, kind) in graph.out_edges(v) {
                let (sigma, tau) = (&ids[v], &ids[w]);
                let map = match kind {
                    EdgeKind::Plain => complex.component(sigma, tau).expect("plain edge is a block").clone(),
                    EdgeKind::ReversedMatched => {
                        inv.get(tau, sigma).ok_or_else(|| Error::InvalidMatching(vec![]))?.neg(ring)
                    }
                };
                out[v].push((w, map));
            }
        }
        Ok(GammaEngine { complex, order, position, out })
    }

    /// Forward accumulation along the topological order starting at `α`.
    pub fn gamma_from(&self, alpha: &CellId) -> Result<GammaTable> {
        let ring = self.complex.ring();
        let start = self.complex.position(alpha).ok_or_else(|| Error::UnknownCell(alpha.clone()))?;
        let rank = self.complex.cells()[start].rank;
        let mut acc: BTreeMap<usize, Matrix> = BTreeMap::new();
        acc.insert(start, Matrix::identity(ring, rank));
        for &v in &self.order[self.position[start]..] {
            let Some(value) = acc.get(&v).cloned() else { continue };
            if value.is_zero() {
                continue;
            }
            for (w, map) in &self.out[v] {
                let contrib = map.mul(&value, ring)?;
                let entry = match acc.remove(w) {
                    Some(prev) => prev.add(&contrib, ring)?,
                    None => contrib,
                };
                acc.insert(*w, entry);
            }
        }
        let cells = self.complex.cells();
        let targets = acc.into_iter().filter(|(_, m)| !m.is_zero()).map(|(v, m)| (cells[v].id.clone(), m)).collect();
        Ok(GammaTable { source: alpha.clone(), targets })
    }
}

/// `Γ_{·,α}` by dynamic programming over the Morse graph.
pub fn gamma_from(complex: &BasedComplex, m: &Matching, inv: &MatchedInverse, alpha: &CellId) -> Result<GammaTable> {
    GammaEngine::new(complex, m, inv)?.gamma_from(alpha)
}

/// `Γ_{β,α}` by explicit enumeration of every directed path `α → β`.
///
/// Independent of [`GammaEngine`]: it walks the differential directly and
/// computes its own block inverses. Returns `None` for a zero sum.
pub fn gamma_bruteforce(complex: &BasedComplex, m: &Matching, alpha: &CellId, beta: &CellId) -> Result<Option<Matrix>> {
    let ring = complex.ring();
    for id in [alpha, beta] {
        if !complex.contains(id) {
            return Err(Error::UnknownCell(id.clone()));
        }
    }
    // successor lists with the edge map for each edge of G^M
    let mut succ: BTreeMap<CellId, Vec<(CellId, Matrix)>> = BTreeMap::new();
    for (s, t, block) in complex.differential().iter() {
        if m.contains(s, t) {
            let inv = block.inverse(ring).map_err(|_| Error::InvalidMatching(vec![]))?;
            succ.entry(t.clone()).or_default().push((s.clone(), inv.neg(ring)));
        } else {
            succ.entry(s.clone()).or_default().push((t.clone(), block.clone()));
        }
    }

    struct Walk<'a> {
        succ: &'a BTreeMap<CellId, Vec<(CellId, Matrix)>>,
        target: &'a CellId,
        on_path: BTreeSet<CellId>,
        paths: usize,
        sum: Option<Matrix>,
    }

    fn walk(w: &mut Walk<'_>, v: &CellId, composite: Matrix, ring: &crate::ring::RingSpec) -> Result<()> {
        if v == w.target {
            w.paths += 1;
            if w.paths > MAX_ENUMERATED_PATHS {
                return Err(Error::PathLimit(MAX_ENUMERATED_PATHS));
            }
            w.sum = Some(match w.sum.take() {
                Some(s) => s.add(&composite, ring)?,
                None => composite.clone(),
            });
        }
        let Some(next) = w.succ.get(v) else { return Ok(()) };
        for (t, map) in next {
            if w.on_path.contains(t) {
                let mut cycle: Vec<CellId> = w.on_path.iter().cloned().collect();
                cycle.push(t.clone());
                return Err(Error::Cycle(cycle));
            }
            w.on_path.insert(t.clone());
            walk(w, t, map.mul(&composite, ring)?, ring)?;
            w.on_path.remove(t);
        }
        Ok(())
    }

    let rank = complex.cell(alpha).unwrap().rank;
    let mut w = Walk { succ: &succ, target: beta, on_path: BTreeSet::from([alpha.clone()]), paths: 0, sum: None };
    walk(&mut w, alpha, Matrix::identity(ring, rank), ring)?;
    Ok(w.sum.filter(|s| !s.is_zero()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionStats {
    pub cells_before: usize,
    pub cells_after: usize,
    pub edges_before: usize,
    pub edges_after: usize,
}

/// A reduced complex on the critical cells with transfer maps
/// `f: C → C^M`, `g: C^M → C` and homotopy `h: C → C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub reduced: BasedComplex,
    pub f: BlockMap,
    pub g: BlockMap,
    pub h: BlockMap,
    pub matching: Matching,
    pub stats: ReductionStats,
}

impl ReductionResult {
    pub fn new(
        original: &BasedComplex,
        reduced: BasedComplex,
        f: BlockMap,
        g: BlockMap,
        h: BlockMap,
        matching: Matching,
    ) -> Self {
        let stats = ReductionStats {
            cells_before: original.cells().len(),
            cells_after: reduced.cells().len(),
            edges_before: original.edge_count(),
            edges_after: reduced.edge_count(),
        };
        ReductionResult { reduced, f, g, h, matching, stats }
    }

    /// The contraction from `original` (the complex that was reduced).
    pub fn to_contraction(&self, original: &BasedComplex) -> Contraction {
        Contraction {
            big: original.clone(),
            small: self.reduced.clone(),
            f: self.f.clone(),
            g: self.g.clone(),
            h: self.h.clone(),
        }
    }
}

/// Builds the reduced complex and transfer maps directly from `Γ`.
pub fn reduce_direct(complex: &BasedComplex, m: &Matching) -> Result<ReductionResult> {
    let inv = validate_matching(complex, m).map_err(Error::InvalidMatching)?;
    let engine = GammaEngine::new(complex, m, &inv)?;
    let critical: BTreeSet<CellId> = critical_cells(complex, m).into_iter().collect();
    let degree = |id: &CellId| complex.cell(id).expect("known cell").degree;

    let mut d = BlockMap::zero(-1);
    let mut f = BlockMap::zero(0);
    let mut g = BlockMap::zero(0);
    let mut h = BlockMap::zero(1);
    for cell in complex.cells() {
        let alpha = &cell.id;
        let alpha_critical = critical.contains(alpha);
        let table = engine.gamma_from(alpha)?;
        for (beta, block) in table.targets {
            let beta_critical = critical.contains(&beta);
            match degree(&beta) - cell.degree {
                0 => {
                    if beta_critical {
                        f.insert(alpha.clone(), beta.clone(), block.clone());
                    }
                    if alpha_critical {
                        g.insert(alpha.clone(), beta, block);
                    }
                }
                1 => h.insert(alpha.clone(), beta, block),
                -1 if alpha_critical && beta_critical => d.insert(alpha.clone(), beta, block),
                _ => {}
            }
        }
    }

    let cells = complex.cells().iter().filter(|c| critical.contains(&c.id)).cloned().collect();
    let reduced = BasedComplex::from_differential(*complex.ring(), cells, d)?;
    Ok(ReductionResult::new(complex, reduced, f, g, h, m.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Cell;
    use crate::ring::RingSpec;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn one(v: i64) -> Matrix {
        Matrix::from_i64(&z(), &[&[v]])
    }

    fn complex(cells: &[(&str, i64)], comps: &[(&str, &str, i64)]) -> BasedComplex {
        BasedComplex::build(
            z(),
            cells.iter().map(|&(id, d)| Cell::new(id, d, 1)).collect(),
            comps.iter().map(|&(s, t, v)| (s.into(), t.into(), one(v))).collect(),
        )
        .unwrap()
    }

    fn interval() -> BasedComplex {
        complex(&[("x", 0), ("y", 0), ("a", 1)], &[("a", "x", -1), ("a", "y", 1)])
    }

    fn circle() -> BasedComplex {
        complex(
            &[("v0", 0), ("v1", 0), ("v2", 0), ("01", 1), ("02", 1), ("12", 1)],
            &[("01", "v0", -1), ("01", "v1", 1), ("02", "v0", -1), ("02", "v2", 1), ("12", "v1", -1), ("12", "v2", 1)],
        )
    }

    fn table(c: &BasedComplex, m: &Matching, a: &str) -> BTreeMap<String, Matrix> {
        let inv = validate_matching(c, m).unwrap();
        gamma_from(c, m, &inv, &a.into())
            .unwrap()
            .targets
            .into_iter()
            .map(|(k, v)| (k.as_str().to_string(), v))
            .collect()
    }

    fn entries(m: &BlockMap) -> Vec<(String, String, Matrix)> {
        m.iter().map(|(s, t, x)| (s.to_string(), t.to_string(), x.clone())).collect()
    }

    #[test]
    fn isolated_source_has_identity_only() {
        let c = complex(&[("x", 0), ("y", 0), ("a", 1)], &[("a", "x", 1)]);
        let t = table(&c, &Matching::new(), "y");
        assert_eq!(t, BTreeMap::from([("y".to_string(), one(1))]));
    }

    #[test]
    fn zigzag_table_matches_path_enumeration() {
        let c = complex(&[("x", 0), ("y", 0), ("a", 1), ("b", 1)], &[("a", "x", 1), ("a", "y", 1), ("b", "x", 1)]);
        let m = Matching::from_pairs([("a", "x")]);
        let t = table(&c, &m, "b");
        // b -> x: [1]; b -> x -> a: [-1]; b -> x -> a -> y: [-1]
        let expected = BTreeMap::from([
            ("b".to_string(), one(1)),
            ("x".to_string(), one(1)),
            ("a".to_string(), one(-1)),
            ("y".to_string(), one(-1)),
        ]);
        assert_eq!(t, expected);
        for (beta, block) in &expected {
            assert_eq!(gamma_bruteforce(&c, &m, &"b".into(), &beta.as_str().into()).unwrap().as_ref(), Some(block));
        }
    }

    #[test]
    fn circle_zigzags_cancel() {
        let c = circle();
        let m = Matching::from_pairs([("01", "v1"), ("02", "v2")]);
        let t = table(&c, &m, "12");
        assert!(!t.contains_key("v0"));
        assert_eq!(gamma_bruteforce(&c, &m, &"12".into(), &"v0".into()).unwrap(), None);
    }

    #[test]
    fn bruteforce_examples() {
        let c = interval();
        let m = Matching::from_pairs([("a", "y")]);
        assert_eq!(gamma_bruteforce(&c, &m, &"x".into(), &"x".into()).unwrap(), Some(one(1)));
        assert_eq!(gamma_bruteforce(&c, &m, &"y".into(), &"x".into()).unwrap(), Some(one(1)));
        assert_eq!(gamma_bruteforce(&c, &m, &"x".into(), &"y".into()).unwrap(), None);

        let sq = complex(
            &[("x", 0), ("y", 0), ("a", 1), ("b", 1)],
            &[("a", "x", 1), ("a", "y", 1), ("b", "x", 1), ("b", "y", 1)],
        );
        let bad = Matching::from_pairs([("a", "x"), ("b", "y")]);
        assert!(matches!(gamma_bruteforce(&sq, &bad, &"a".into(), &"b".into()), Err(Error::Cycle(_))));
    }

    #[test]
    fn empty_matching_reduction_is_identity() {
        let c = circle();
        let r = reduce_direct(&c, &Matching::new()).unwrap();
        assert_eq!(r.reduced, c);
        assert_eq!(r.f, c.identity());
        assert_eq!(r.g, c.identity());
        assert!(r.h.is_zero());
    }

    #[test]
    fn interval_reduction() {
        let c = interval();
        let r = reduce_direct(&c, &Matching::from_pairs([("a", "y")])).unwrap();
        assert_eq!(r.reduced.cells(), &[Cell::new("x", 0, 1)]);
        assert!(r.reduced.differential().is_zero());
        let s = |a: &str, b: &str, v: i64| (a.to_string(), b.to_string(), one(v));
        assert_eq!(entries(&r.g), vec![s("x", "x", 1)]);
        assert_eq!(entries(&r.f), vec![s("x", "x", 1), s("y", "x", 1)]);
        assert_eq!(entries(&r.h), vec![s("y", "a", -1)]);
        assert_eq!(r.stats, ReductionStats { cells_before: 3, cells_after: 1, edges_before: 2, edges_after: 0 });
    }

    #[test]
    fn circle_reduction() {
        let c = circle();
        let r = reduce_direct(&c, &Matching::from_pairs([("01", "v1"), ("02", "v2")])).unwrap();
        let ids: Vec<&str> = r.reduced.cells().iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, vec!["v0", "12"]);
        assert!(r.reduced.differential().is_zero());
    }

    #[test]
    fn degree_bookkeeping() {
        let c = circle();
        let r = reduce_direct(&c, &Matching::from_pairs([("01", "v1"), ("12", "v2")])).unwrap();
        let deg = |id: &CellId| c.cell(id).unwrap().degree;
        assert!(r.f.iter().chain(r.g.iter()).all(|(s, t, _)| deg(s) == deg(t)));
        assert!(r.h.iter().all(|(s, t, _)| deg(t) == deg(s) + 1));
        assert!(r.reduced.differential().iter().all(|(s, t, _)| deg(t) == deg(s) - 1));
    }

    #[test]
    fn invalid_matching_is_rejected() {
        let c = interval();
        assert!(matches!(
            reduce_direct(&c, &Matching::from_pairs([("a", "x"), ("a", "y")])),
            Err(Error::InvalidMatching(_))
        ));
    }
}
