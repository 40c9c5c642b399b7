//! Independent checks: contraction identities and homology.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::complex::{BasedComplex, BlockMap, CellId};
use crate::error::{Error, Result};
use crate::hpt::Contraction;
use crate::matrix::Matrix;
use crate::ring::RingSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    /// `fg = 1`
    FgIsIdentity,
    /// `gf = 1 + dh + hd`
    GfHomotopy,
    FhZero,
    HgZero,
    HSquaredZero,
    FChainMap,
    GChainMap,
    BigDSquared,
    SmallDSquared,
}

impl Identity {
    pub const ALL: [Identity; 9] = [
        Identity::FgIsIdentity,
        Identity::GfHomotopy,
        Identity::FhZero,
        Identity::HgZero,
        Identity::HSquaredZero,
        Identity::FChainMap,
        Identity::GChainMap,
        Identity::BigDSquared,
        Identity::SmallDSquared,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Identity::FgIsIdentity => "fg = 1",
            Identity::GfHomotopy => "gf = 1 + dh + hd",
            Identity::FhZero => "fh = 0",
            Identity::HgZero => "hg = 0",
            Identity::HSquaredZero => "h^2 = 0",
            Identity::FChainMap => "f chain map",
            Identity::GChainMap => "g chain map",
            Identity::BigDSquared => "d_big^2 = 0",
            Identity::SmallDSquared => "d_small^2 = 0",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Lhs and rhs differ in block `src -> tgt` at `(row, col)`.
    Entry { src: CellId, tgt: CellId, row: usize, col: usize, expected: String, actual: String },
    /// The check could not be evaluated (shift or dimension mismatch).
    Structural(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Entry { src, tgt, row, col, expected, actual } => {
                write!(f, "block {src} -> {tgt} entry ({row}, {col}): expected {expected}, got {actual}")
            }
            Failure::Structural(msg) => f.write_str(msg),
        }
    }
}

/// Outcome of each of the nine contraction checks, in [`Identity::ALL`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub checks: Vec<(Identity, Vec<Failure>)>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, f)| f.is_empty())
    }

    pub fn failed(&self) -> impl Iterator<Item = (Identity, &[Failure])> {
        self.checks.iter().filter(|(_, f)| !f.is_empty()).map(|(i, f)| (*i, f.as_slice()))
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (id, failures) in &self.checks {
            if failures.is_empty() {
                writeln!(f, "  ok    {}", id.label())?;
            } else {
                writeln!(f, "  FAIL  {}", id.label())?;
                for x in failures {
                    writeln!(f, "          {x}")?;
                }
            }
        }
        Ok(())
    }
}

/// Entrywise differences between two block maps, one per differing block.
fn diff(actual: &BlockMap, expected: &BlockMap, ring: &RingSpec) -> Vec<Failure> {
    if actual.shift() != expected.shift() {
        return vec![Failure::Structural(format!("shift {} where {} was expected", actual.shift(), expected.shift()))];
    }
    let delta = match actual.sub(expected, ring) {
        Ok(d) => d,
        Err(e) => return vec![Failure::Structural(e.to_string())],
    };
    delta
        .iter()
        .map(|(s, t, m)| {
            let (row, col, _) = m.first_nonzero().expect("stored blocks are nonzero");
            let at = |b: &BlockMap| b.get(s, t).map_or(ring.zero(), |x| x.get(row, col).clone());
            Failure::Entry {
                src: s.clone(),
                tgt: t.clone(),
                row,
                col,
                expected: ring.format(&at(expected)),
                actual: ring.format(&at(actual)),
            }
        })
        .collect()
}

/// Runs all nine checks by block composition and exact comparison.
pub fn verify_contraction(c: &Contraction) -> IdentityReport {
    let ring = c.big.ring();
    let d_big = c.big.differential();
    let d_small = c.small.differential();
    let comp = |a: &BlockMap, b: &BlockMap| BlockMap::compose(a, b, ring);

    let structural = |e: Error| vec![Failure::Structural(e.to_string())];
    let mut checks = Vec::with_capacity(9);

    let mut shape_errors = Vec::new();
    for (name, map, src, tgt, shift) in
        [("f", &c.f, &c.big, &c.small, 0), ("g", &c.g, &c.small, &c.big, 0), ("h", &c.h, &c.big, &c.big, 1)]
    {
        if map.shift() != shift {
            shape_errors.push(format!("{name} has shift {}, expected {shift}", map.shift()));
        } else if let Err(e) = map.check_against(src, tgt) {
            shape_errors.push(format!("{name}: {e}"));
        }
    }
    if *c.small.ring() != *ring {
        shape_errors.push("big and small complexes have different rings".into());
    }

    let fg = comp(&c.f, &c.g).map(|x| diff(&x, &c.small.identity(), ring));
    checks.push((Identity::FgIsIdentity, fg.unwrap_or_else(structural)));

    let gf = (|| -> Result<Vec<Failure>> {
        let lhs = comp(&c.g, &c.f)?;
        let rhs = c.big.identity().add(&comp(d_big, &c.h)?, ring)?.add(&comp(&c.h, d_big)?, ring)?;
        Ok(diff(&lhs, &rhs, ring))
    })();
    checks.push((Identity::GfHomotopy, gf.unwrap_or_else(structural)));

    for (id, a, b) in
        [(Identity::FhZero, &c.f, &c.h), (Identity::HgZero, &c.h, &c.g), (Identity::HSquaredZero, &c.h, &c.h)]
    {
        let r = comp(a, b).map(|x| diff(&x, &BlockMap::zero(x.shift()), ring));
        checks.push((id, r.unwrap_or_else(structural)));
    }

    let f_chain = (|| Ok(diff(&comp(&c.f, d_big)?, &comp(d_small, &c.f)?, ring)))();
    checks.push((Identity::FChainMap, f_chain.unwrap_or_else(structural)));
    let g_chain = (|| Ok(diff(&comp(&c.g, d_small)?, &comp(d_big, &c.g)?, ring)))();
    checks.push((Identity::GChainMap, g_chain.unwrap_or_else(structural)));

    for (id, cx) in [(Identity::BigDSquared, &c.big), (Identity::SmallDSquared, &c.small)] {
        let failures = cx
            .check_d_squared()
            .into_iter()
            .map(|v| Failure::Entry {
                src: v.alpha,
                tgt: v.gamma,
                row: v.row,
                col: v.col,
                expected: "0".into(),
                actual: v.value,
            })
            .collect();
        checks.push((id, failures));
    }

    if !shape_errors.is_empty() {
        // attach shape problems to the first check so they are never lost
        checks[0].1.extend(shape_errors.into_iter().map(Failure::Structural));
    }
    IdentityReport { checks }
}

/// Smith invariants `d_1 | d_2 | …` of an integer matrix, followed by zeros;
/// the result has `min(rows, cols)` entries.
///
/// Pivot: smallest nonzero absolute value in the active submatrix, first in
/// row-major order on ties. Rows are cleared before columns.
pub fn smith_normal_form(mat: &Matrix) -> Result<Vec<BigInt>> {
    let mut a = mat.to_bigint()?;
    Ok(smith_invariants(&mut a, mat.rows(), mat.cols()))
}

fn smith_invariants(a: &mut [Vec<BigInt>], rows: usize, cols: usize) -> Vec<BigInt> {
    let n = rows.min(cols);
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if !x.is_zero() && pivot.is_none_or(|(pi, pj)| x.abs() < a[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                diag.resize(n, BigInt::zero());
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            // clear column t with row operations
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                let (upper, lower) = a.split_at_mut(i);
                for (x, y) in lower[0][t..].iter_mut().zip(&upper[t][t..]) {
                    *x -= &q * y;
                }
                clean &= a[i][t].is_zero();
            }
            // then row t with column operations
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                for row in a.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest; otherwise fold an offending row in
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match offending {
                Some(i) => {
                    let (upper, lower) = a.split_at_mut(i);
                    for (x, y) in upper[t][t..].iter_mut().zip(&lower[0][t..]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreeHomology {
    pub betti: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
}

/// Homology by degree; degrees with zero homology are absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyProfile {
    pub ring: RingSpec,
    pub degrees: BTreeMap<i64, DegreeHomology>,
}

impl HomologyProfile {
    pub fn betti(&self, degree: i64) -> usize {
        self.degrees.get(&degree).map_or(0, |h| h.betti)
    }

    pub fn torsion(&self, degree: i64) -> &[BigInt] {
        self.degrees.get(&degree).map_or(&[], |h| h.torsion.as_slice())
    }

    /// Betti numbers for degrees `0..=max_degree`.
    pub fn betti_vector(&self, max_degree: i64) -> Vec<usize> {
        (0..=max_degree).map(|d| self.betti(d)).collect()
    }

    /// One line per degree, e.g. `deg 1: Z^0 + Z/2`.
    pub fn render(&self, degrees: impl IntoIterator<Item = i64>) -> Vec<String> {
        degrees
            .into_iter()
            .map(|d| {
                let mut s = format!("deg {d}: {}^{}", self.ring, self.betti(d));
                for t in self.torsion(d) {
                    s.push_str(&format!(" + {}/{t}", self.ring));
                }
                s
            })
            .collect()
    }
}

/// The full matrix of `d_n` in `(degree, id)` cell order.
fn assembled_differential(complex: &BasedComplex, n: i64) -> Matrix {
    let ring = complex.ring();
    let offsets = |deg: i64| {
        let mut map = BTreeMap::new();
        let mut total = 0;
        for c in complex.cells_in_degree(deg) {
            map.insert(c.id.clone(), total);
            total += c.rank;
        }
        (map, total)
    };
    let (cols, ncols) = offsets(n);
    let (rows, nrows) = offsets(n - 1);
    let mut m = Matrix::zeros(ring, nrows, ncols);
    for (src, tgt, block) in complex.differential().iter() {
        let (Some(&c0), Some(&r0)) = (cols.get(src), rows.get(tgt)) else { continue };
        for i in 0..block.rows() {
            for j in 0..block.cols() {
                m.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }
    m
}

/// Betti numbers per degree, plus torsion over ℤ.
pub fn homology(complex: &BasedComplex) -> Result<HomologyProfile> {
    let ring = *complex.ring();
    let degrees = complex.degrees();
    // rank and (over ℤ) invariants of d_n for each n with cells in degree n
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    let mut invariants: BTreeMap<i64, Vec<BigInt>> = BTreeMap::new();
    for &n in &degrees {
        let d = assembled_differential(complex, n);
        if d.rows() == 0 || d.cols() == 0 {
            continue;
        }
        if ring.is_field() {
            ranks.insert(n, d.rank(&ring)?);
        } else {
            let inv = smith_normal_form(&d)?;
            ranks.insert(n, inv.iter().filter(|x| !x.is_zero()).count());
            invariants.insert(n, inv);
        }
    }
    let mut out = BTreeMap::new();
    for &n in &degrees {
        let dim: usize = complex.cells_in_degree(n).map(|c| c.rank).sum();
        let rank_of = |k: i64| ranks.get(&k).copied().unwrap_or(0);
        let betti = dim - rank_of(n) - rank_of(n + 1);
        let torsion: Vec<BigInt> = invariants
            .get(&(n + 1))
            .map(|inv| inv.iter().filter(|x| !x.is_zero() && !x.is_one()).cloned().collect())
            .unwrap_or_default();
        if betti > 0 || !torsion.is_empty() {
            out.insert(n, DegreeHomology { betti, torsion });
        }
    }
    Ok(HomologyProfile { ring, degrees: out })
}

/// Whether two complexes over the same ring have equal homology in every degree.
pub fn compare_homology(a: &BasedComplex, b: &BasedComplex) -> Result<bool> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch(format!("{} vs {}", a.ring(), b.ring())));
    }
    Ok(homology(a)?.degrees == homology(b)?.degrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Cell;
    use crate::gamma::reduce_direct;
    use crate::morse::Matching;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn complex(ring: RingSpec, cells: &[(&str, i64)], comps: &[(&str, &str, i64)]) -> BasedComplex {
        BasedComplex::build(
            ring,
            cells.iter().map(|&(id, d)| Cell::new(id, d, 1)).collect(),
            comps.iter().map(|&(s, t, v)| (s.into(), t.into(), Matrix::from_i64(&ring, &[&[v]]))).collect(),
        )
        .unwrap()
    }

    fn circle() -> BasedComplex {
        complex(
            z(),
            &[("v0", 0), ("v1", 0), ("v2", 0), ("01", 1), ("02", 1), ("12", 1)],
            &[("01", "v0", -1), ("01", "v1", 1), ("02", "v0", -1), ("02", "v2", 1), ("12", "v1", -1), ("12", "v2", 1)],
        )
    }

    #[test]
    fn snf_examples() {
        let r = z();
        assert_eq!(smith_normal_form(&Matrix::identity(&r, 2)).unwrap(), big(&[1, 1]));
        assert_eq!(smith_normal_form(&Matrix::from_i64(&r, &[&[0]])).unwrap(), big(&[0]));
        assert_eq!(smith_normal_form(&Matrix::from_i64(&r, &[&[2, 4], &[6, 8]])).unwrap(), big(&[2, 4]));
        assert_eq!(smith_normal_form(&Matrix::from_i64(&r, &[&[2, 0], &[0, 3]])).unwrap(), big(&[1, 6]));
        assert_eq!(smith_normal_form(&Matrix::from_i64(&r, &[&[0, 0, 5], &[0, 0, 0]])).unwrap(), big(&[5, 0]));
        assert!(smith_normal_form(&Matrix::identity(&RingSpec::Rationals, 1)).is_err());
    }

    #[test]
    fn identity_contraction_passes() {
        let report = verify_contraction(&Contraction::identity(&circle()));
        assert!(report.passed(), "{report}");
        assert_eq!(report.checks.len(), 9);
    }

    #[test]
    fn reduction_output_passes() {
        let c = complex(z(), &[("x", 0), ("y", 0), ("a", 1)], &[("a", "x", -1), ("a", "y", 1)]);
        let r = reduce_direct(&c, &Matching::from_pairs([("a", "y")])).unwrap();
        let report = verify_contraction(&Contraction { big: c, small: r.reduced, f: r.f, g: r.g, h: r.h });
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn abused_homotopy_is_reported() {
        let c = circle();
        let mut bad = Contraction::identity(&c);
        bad.h = BlockMap::compose(&bad.g, &bad.f, &z()).unwrap();
        let report = verify_contraction(&bad);
        assert!(!report.passed());
        assert!(report.failed().any(|(id, _)| id == Identity::FhZero));
        assert!(report.failed().any(|(_, f)| f.iter().any(|x| matches!(x, Failure::Structural(_)))));
    }

    #[test]
    fn wrong_homotopy_sign_is_caught() {
        let c = complex(z(), &[("x", 0), ("y", 0), ("a", 1)], &[("a", "x", -1), ("a", "y", 1)]);
        let mut r = reduce_direct(&c, &Matching::from_pairs([("a", "y")])).unwrap();
        r.h = r.h.neg(&z());
        let report = verify_contraction(&Contraction { big: c, small: r.reduced, f: r.f, g: r.g, h: r.h });
        let failed: Vec<Identity> = report.failed().map(|(i, _)| i).collect();
        assert_eq!(failed, vec![Identity::GfHomotopy]);
    }

    #[test]
    fn homology_examples() {
        let point = complex(z(), &[("x", 0)], &[]);
        let h = homology(&point).unwrap();
        assert_eq!(h.betti_vector(0), vec![1]);
        assert!(h.torsion(0).is_empty());

        let h = homology(&circle()).unwrap();
        assert_eq!(h.betti_vector(1), vec![1, 1]);
        assert_eq!(h.render([0, 1]), vec!["deg 0: Z^1", "deg 1: Z^1"]);

        // Z/2 from a single cell with boundary 2
        let torsion = complex(z(), &[("x", 0), ("a", 1)], &[("a", "x", 2)]);
        let h = homology(&torsion).unwrap();
        assert_eq!(h.betti_vector(1), vec![0, 0]);
        assert_eq!(h.torsion(0), &[BigInt::from(2)]);
        assert_eq!(h.render([0]), vec!["deg 0: Z^0 + Z/2"]);
    }

    #[test]
    fn compare_examples() {
        let c = circle();
        assert!(compare_homology(&c, &c).unwrap());
        let reduced = complex(z(), &[("v0", 0), ("12", 1)], &[]);
        assert!(compare_homology(&c, &reduced).unwrap());
        let point = complex(z(), &[("x", 0)], &[]);
        assert!(!compare_homology(&c, &point).unwrap());
        let q_point = complex(RingSpec::Rationals, &[("x", 0)], &[]);
        assert!(compare_homology(&point, &q_point).is_err());
    }
}
