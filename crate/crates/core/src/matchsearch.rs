//! Greedy construction of Morse matchings.

use std::collections::BTreeSet;

use crate::complex::{BasedComplex, CellId};
use crate::lcg::Lcg;
use crate::morse::Matching;

/// Greedy acyclic matching.
///
/// Candidates are the edges `α → β` whose block is square and invertible,
/// sorted by `(α, β)` and then shuffled by the seeded generator. A candidate
/// is kept when both endpoints are free and reversing it leaves the Morse
/// graph acyclic. Passes repeat until one adds nothing, since a later
/// reversal can break the path that blocked an earlier candidate; the result
/// is maximal under single-edge extension.
pub fn greedy_matching(complex: &BasedComplex, seed: u64) -> Matching {
    let ring = complex.ring();
    let pos = |id: &CellId| complex.position(id).expect("differential references known cells");

    let mut candidates: Vec<(usize, usize)> = complex
        .differential()
        .iter()
        .filter(|(_, _, m)| m.is_square() && m.is_invertible(ring))
        .map(|(s, t, _)| (pos(s), pos(t)))
        .collect();
    // iter() yields (src, tgt) in id order already; sort on ids to be explicit
    candidates.sort_by(|a, b| {
        let ids = |(s, t): (usize, usize)| (&complex.cells()[s].id, &complex.cells()[t].id);
        ids(*a).cmp(&ids(*b))
    });
    Lcg::new(seed).shuffle(&mut candidates);

    let n = complex.cells().len();
    let mut out: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (s, t, _) in complex.differential().iter() {
        out[pos(s)].insert(pos(t));
    }
    let mut matched = vec![false; n];
    let mut accepted = vec![false; candidates.len()];

    loop {
        let mut progress = false;
        for (k, &(a, b)) in candidates.iter().enumerate() {
            if accepted[k] || matched[a] || matched[b] {
                continue;
            }
            // Reversing a -> b closes a cycle iff b reaches itself through the
            // new edge b -> a, i.e. a reaches b without using a -> b.
            out[a].remove(&b);
            if reaches(&out, a, b) {
                out[a].insert(b);
                continue;
            }
            out[b].insert(a);
            matched[a] = true;
            matched[b] = true;
            accepted[k] = true;
            progress = true;
        }
        if !progress {
            break;
        }
    }

    let mut m = Matching::new();
    for (k, &(a, b)) in candidates.iter().enumerate() {
        if accepted[k] {
            m.insert(complex.cells()[a].id.clone(), complex.cells()[b].id.clone());
        }
    }
    m
}

fn reaches(out: &[BTreeSet<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; out.len()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        for &w in &out[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Cell;
    use crate::matrix::Matrix;
    use crate::morse::{critical_cells, validate_matching};
    use crate::ring::RingSpec;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn complex(cells: &[(&str, i64)], comps: &[(&str, &str, i64)]) -> BasedComplex {
        BasedComplex::build(
            z(),
            cells.iter().map(|&(id, d)| Cell::new(id, d, 1)).collect(),
            comps.iter().map(|&(s, t, v)| (s.into(), t.into(), Matrix::from_i64(&z(), &[&[v]]))).collect(),
        )
        .unwrap()
    }

    fn simplex2() -> BasedComplex {
        complex(
            &[("0", 0), ("1", 0), ("2", 0), ("01", 1), ("02", 1), ("12", 1), ("012", 2)],
            &[
                ("01", "0", -1),
                ("01", "1", 1),
                ("02", "0", -1),
                ("02", "2", 1),
                ("12", "1", -1),
                ("12", "2", 1),
                ("012", "12", 1),
                ("012", "02", -1),
                ("012", "01", 1),
            ],
        )
    }

    /// No single further edge can be added to `m` while staying valid.
    fn is_maximal(c: &BasedComplex, m: &Matching) -> bool {
        c.differential().iter().all(|(s, t, _)| {
            let mut bigger = m.clone();
            !bigger.insert(s.clone(), t.clone()) || validate_matching(c, &bigger).is_err()
        })
    }

    #[test]
    fn single_cell_gives_empty_matching() {
        assert!(greedy_matching(&complex(&[("x", 0)], &[]), 0).is_empty());
    }

    #[test]
    fn interval_matches_one_endpoint() {
        let c = complex(&[("x", 0), ("y", 0), ("a", 1)], &[("a", "x", -1), ("a", "y", 1)]);
        let options = [Matching::from_pairs([("a", "x")]), Matching::from_pairs([("a", "y")])];
        for o in &options {
            assert!(validate_matching(&c, o).is_ok());
        }
        let mut seen = BTreeSet::new();
        for seed in 0..20 {
            let m = greedy_matching(&c, seed);
            let k = options.iter().position(|o| *o == m).expect("one of the two matchings");
            seen.insert(k);
        }
        assert_eq!(seen.len(), 2, "both outcomes reachable across seeds");
    }

    #[test]
    fn full_simplex_collapses_for_every_seed() {
        let c = simplex2();
        for seed in 0..100 {
            let m = greedy_matching(&c, seed);
            assert!(validate_matching(&c, &m).is_ok());
            assert_eq!(m.len(), 3, "seed {seed}");
            let crit = critical_cells(&c, &m);
            assert_eq!(crit.len(), 1);
            assert_eq!(c.cell(&crit[0]).unwrap().degree, 0);
        }
    }

    #[test]
    fn deterministic_and_maximal() {
        let c = simplex2();
        for seed in [0u64, 1, 99, u64::MAX] {
            let m = greedy_matching(&c, seed);
            assert_eq!(m, greedy_matching(&c, seed));
            assert!(is_maximal(&c, &m));
        }
        let sq = complex(
            &[("x", 0), ("y", 0), ("a", 1), ("b", 1)],
            &[("a", "x", 1), ("a", "y", 1), ("b", "x", 1), ("b", "y", 1)],
        );
        for seed in 0..10 {
            let m = greedy_matching(&sq, seed);
            assert!(validate_matching(&sq, &m).is_ok());
            assert!(is_maximal(&sq, &m));
        }
    }

    #[test]
    fn non_unit_blocks_are_skipped() {
        let c = complex(&[("x", 0), ("a", 1)], &[("a", "x", 2)]);
        assert!(greedy_matching(&c, 3).is_empty());
    }
}
