//! Finite based chain complexes and the block-sparse graded maps between them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{RingElement, RingSpec};

/// Identifier of a summand `C_α`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(Arc<str>);

impl CellId {
    pub fn new(id: impl AsRef<str>) -> Self {
        CellId(Arc::from(id.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for CellId {
    fn from(s: &str) -> Self {
        CellId::new(s)
    }
}

impl From<String> for CellId {
    fn from(s: String) -> Self {
        CellId::new(s)
    }
}

/// A free summand of rank `rank` sitting in degree `degree`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub id: CellId,
    pub degree: i64,
    pub rank: usize,
}

impl Cell {
    pub fn new(id: impl Into<CellId>, degree: i64, rank: usize) -> Self {
        Cell { id: id.into(), degree, rank }
    }
}

/// A graded linear map stored as sparse blocks `src -> tgt`.
///
/// Zero blocks are never stored, so structural equality is equality of maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMap {
    shift: i64,
    blocks: BTreeMap<CellId, BTreeMap<CellId, Matrix>>,
}

impl BlockMap {
    pub fn zero(shift: i64) -> Self {
        BlockMap { shift, blocks: BTreeMap::new() }
    }

    /// Identity blocks on the given cells.
    pub fn identity<'a>(ring: &RingSpec, cells: impl IntoIterator<Item = &'a Cell>) -> Self {
        let mut m = BlockMap::zero(0);
        for c in cells {
            m.insert(c.id.clone(), c.id.clone(), Matrix::identity(ring, c.rank));
        }
        m
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Sets block `src -> tgt`, dropping it if zero.
    pub fn insert(&mut self, src: CellId, tgt: CellId, block: Matrix) {
        if block.is_zero() {
            if let Some(row) = self.blocks.get_mut(&src) {
                row.remove(&tgt);
                if row.is_empty() {
                    self.blocks.remove(&src);
                }
            }
        } else {
            self.blocks.entry(src).or_default().insert(tgt, block);
        }
    }

    /// Adds `block` to the block `src -> tgt`.
    pub fn accumulate(&mut self, src: &CellId, tgt: &CellId, block: &Matrix, ring: &RingSpec) -> Result<()> {
        let sum = match self.get(src, tgt) {
            Some(existing) => existing.add(block, ring)?,
            None => block.clone(),
        };
        self.insert(src.clone(), tgt.clone(), sum);
        Ok(())
    }

    pub fn get(&self, src: &CellId, tgt: &CellId) -> Option<&Matrix> {
        self.blocks.get(src).and_then(|row| row.get(tgt))
    }

    /// Blocks leaving `src`, keyed by target.
    pub fn from_source(&self, src: &CellId) -> Option<&BTreeMap<CellId, Matrix>> {
        self.blocks.get(src)
    }

    /// All blocks as `(src, tgt, matrix)` in lexicographic `(src, tgt)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&CellId, &CellId, &Matrix)> {
        self.blocks.iter().flat_map(|(s, row)| row.iter().map(move |(t, m)| (s, t, m)))
    }

    /// Number of nonzero blocks.
    pub fn block_count(&self) -> usize {
        self.blocks.values().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `outer ∘ inner`; shifts add.
    pub fn compose(outer: &BlockMap, inner: &BlockMap, ring: &RingSpec) -> Result<BlockMap> {
        let mut out = BlockMap::zero(outer.shift + inner.shift);
        for (src, mid_blocks) in &inner.blocks {
            let mut row: BTreeMap<CellId, Matrix> = BTreeMap::new();
            for (mid, a) in mid_blocks {
                let Some(outer_row) = outer.blocks.get(mid) else { continue };
                for (tgt, b) in outer_row {
                    let prod = b.mul(a, ring).map_err(|_| Error::DimensionMismatch {
                        context: format!("composing {src} -> {mid} -> {tgt}"),
                        expected: (b.cols(), a.cols()),
                        found: a.shape(),
                    })?;
                    match row.get_mut(tgt) {
                        Some(acc) => *acc = acc.add(&prod, ring)?,
                        None => {
                            row.insert(tgt.clone(), prod);
                        }
                    }
                }
            }
            for (tgt, m) in row {
                out.insert(src.clone(), tgt, m);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &BlockMap, ring: &RingSpec) -> Result<BlockMap> {
        if self.shift != other.shift {
            return Err(Error::ShiftMismatch { expected: self.shift, found: other.shift });
        }
        let mut out = self.clone();
        for (s, t, m) in other.iter() {
            out.accumulate(s, t, m, ring)?;
        }
        Ok(out)
    }

    pub fn neg(&self, ring: &RingSpec) -> BlockMap {
        let mut out = BlockMap::zero(self.shift);
        for (s, t, m) in self.iter() {
            out.insert(s.clone(), t.clone(), m.neg(ring));
        }
        out
    }

    pub fn sub(&self, other: &BlockMap, ring: &RingSpec) -> Result<BlockMap> {
        self.add(&other.neg(ring), ring)
    }

    /// Keeps the blocks for which `keep(src, tgt)` holds.
    pub fn filter(&self, mut keep: impl FnMut(&CellId, &CellId) -> bool) -> BlockMap {
        let mut out = BlockMap::zero(self.shift);
        for (s, t, m) in self.iter() {
            if keep(s, t) {
                out.insert(s.clone(), t.clone(), m.clone());
            }
        }
        out
    }

    /// Evaluates the map on a column vector of `C_src`, split by target cell.
    pub fn apply(
        &self,
        src: &CellId,
        v: &[RingElement],
        ring: &RingSpec,
    ) -> Result<BTreeMap<CellId, Vec<RingElement>>> {
        let mut out = BTreeMap::new();
        if let Some(row) = self.blocks.get(src) {
            for (tgt, m) in row {
                let image = m.mul_vec(v, ring)?;
                if image.iter().any(|x| !x.is_zero()) {
                    out.insert(tgt.clone(), image);
                }
            }
        }
        Ok(out)
    }

    /// Checks that every block connects `src` cells to `tgt` cells `shift`
    /// degrees apart with matching block dimensions.
    pub fn check_against(&self, src: &BasedComplex, tgt: &BasedComplex) -> Result<()> {
        for (s, t, m) in self.iter() {
            let sc = src.cell(s).ok_or_else(|| Error::UnknownCell(s.clone()))?;
            let tc = tgt.cell(t).ok_or_else(|| Error::UnknownCell(t.clone()))?;
            if tc.degree != sc.degree + self.shift {
                return Err(Error::DegreeMismatch {
                    src: s.clone(),
                    tgt: t.clone(),
                    src_degree: sc.degree,
                    tgt_degree: tc.degree,
                    shift: self.shift,
                });
            }
            if m.shape() != (tc.rank, sc.rank) {
                return Err(Error::DimensionMismatch {
                    context: format!("block {s} -> {t}"),
                    expected: (tc.rank, sc.rank),
                    found: m.shape(),
                });
            }
        }
        Ok(())
    }
}

/// A nonzero entry of `d∘d`, from cell `alpha` two degrees down to `gamma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSquaredViolation {
    pub gamma: CellId,
    pub alpha: CellId,
    pub row: usize,
    pub col: usize,
    pub value: String,
}

impl fmt::Display for DSquaredViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d^2)[{} <- {}] entry ({}, {}) = {}", self.gamma, self.alpha, self.row, self.col, self.value)
    }
}

/// A finite chain complex `C_n = ⊕_{α ∈ I_n} C_α` with block differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedComplex {
    ring: RingSpec,
    /// Sorted by `(degree, id)`.
    cells: Vec<Cell>,
    index: HashMap<CellId, usize>,
    differential: BlockMap,
}

impl BasedComplex {
    /// Validates cells and components and checks `d² = 0`.
    pub fn build(ring: RingSpec, cells: Vec<Cell>, components: Vec<(CellId, CellId, Matrix)>) -> Result<Self> {
        let mut d = BlockMap::zero(-1);
        let mut seen = std::collections::HashSet::new();
        for (src, tgt, m) in components {
            if !seen.insert((src.clone(), tgt.clone())) {
                return Err(Error::DuplicateComponent(src, tgt));
            }
            d.insert(src, tgt, m);
        }
        Self::from_differential(ring, cells, d)
    }

    /// Like [`BasedComplex::build`] with the differential already assembled.
    pub fn from_differential(ring: RingSpec, cells: Vec<Cell>, differential: BlockMap) -> Result<Self> {
        let complex = Self::from_parts(ring, cells, differential)?;
        let violations = complex.check_d_squared();
        if !violations.is_empty() {
            return Err(Error::DSquaredNonzero(violations));
        }
        Ok(complex)
    }

    /// Structural validation only; `d² = 0` is not checked.
    pub fn from_parts(ring: RingSpec, mut cells: Vec<Cell>, differential: BlockMap) -> Result<Self> {
        if differential.shift() != -1 {
            return Err(Error::ShiftMismatch { expected: -1, found: differential.shift() });
        }
        cells.sort_by(|a, b| (a.degree, &a.id).cmp(&(b.degree, &b.id)));
        let mut index = HashMap::with_capacity(cells.len());
        for (i, c) in cells.iter().enumerate() {
            if c.id.as_str().is_empty() {
                return Err(Error::EmptyCellId);
            }
            if c.rank == 0 {
                return Err(Error::ZeroRank(c.id.clone()));
            }
            if index.insert(c.id.clone(), i).is_some() {
                return Err(Error::DuplicateCell(c.id.clone()));
            }
        }
        for (_, _, m) in differential.iter() {
            if m.entries().iter().any(|x| !ring.contains(x)) {
                return Err(Error::RingMismatch(format!("differential entry outside {ring}")));
            }
        }
        let complex = BasedComplex { ring, cells, index, differential };
        complex.differential.check_against(&complex, &complex)?;
        Ok(complex)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    /// Cells in `(degree, id)` order.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: &CellId) -> Option<&Cell> {
        self.index.get(id).map(|&i| &self.cells[i])
    }

    /// Position of `id` in the `(degree, id)` order.
    pub fn position(&self, id: &CellId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn contains(&self, id: &CellId) -> bool {
        self.index.contains_key(id)
    }

    pub fn differential(&self) -> &BlockMap {
        &self.differential
    }

    /// The block `d_{tgt,src}`, if nonzero.
    pub fn component(&self, src: &CellId, tgt: &CellId) -> Option<&Matrix> {
        self.differential.get(src, tgt)
    }

    pub fn cells_in_degree(&self, degree: i64) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(move |c| c.degree == degree)
    }

    /// Distinct degrees present, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self.cells.iter().map(|c| c.degree).collect();
        out.dedup();
        out
    }

    pub fn total_rank(&self) -> usize {
        self.cells.iter().map(|c| c.rank).sum()
    }

    pub fn identity(&self) -> BlockMap {
        BlockMap::identity(&self.ring, &self.cells)
    }

    /// All nonzero entries of `d∘d`, ordered by `(γ, α, row, col)`.
    pub fn check_d_squared(&self) -> Vec<DSquaredViolation> {
        let dd = BlockMap::compose(&self.differential, &self.differential, &self.ring)
            .expect("differential dimensions validated");
        let mut out = Vec::new();
        for (alpha, gamma, m) in dd.iter() {
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    let v = m.get(r, c);
                    if !v.is_zero() {
                        out.push(DSquaredViolation {
                            gamma: gamma.clone(),
                            alpha: alpha.clone(),
                            row: r,
                            col: c,
                            value: self.ring.format(v),
                        });
                    }
                }
            }
        }
        out.sort_by(|a, b| (&a.gamma, &a.alpha, a.row, a.col).cmp(&(&b.gamma, &b.alpha, b.row, b.col)));
        out
    }

    /// Evaluates a graded map on an element of `C_src`.
    pub fn apply(&self, m: &BlockMap, src: &CellId, v: &[RingElement]) -> Result<BTreeMap<CellId, Vec<RingElement>>> {
        let cell = self.cell(src).ok_or_else(|| Error::UnknownCell(src.clone()))?;
        if v.len() != cell.rank {
            return Err(Error::DimensionMismatch {
                context: format!("vector on {src}"),
                expected: (cell.rank, 1),
                found: (v.len(), 1),
            });
        }
        m.apply(src, v, &self.ring)
    }

    /// Same complex with integer coefficients mapped into `ring`.
    pub fn change_ring(&self, ring: RingSpec) -> Result<BasedComplex> {
        let mut d = BlockMap::zero(-1);
        for (s, t, m) in self.differential.iter() {
            d.insert(s.clone(), t.clone(), m.coerce_integer(&ring)?);
        }
        BasedComplex::from_differential(ring, self.cells.clone(), d)
    }

    /// Number of nonzero differential blocks.
    pub fn edge_count(&self) -> usize {
        self.differential.block_count()
    }
}
