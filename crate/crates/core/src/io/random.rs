//! Seeded random based complexes.
//!
//! Construction: cells get random degrees and ranks. Disjoint pairs of cells
//! in adjacent degrees receive a diagonal block `Δ` of nonzero scalars, so
//! `Δ² = 0`. In each degree a random unit lower-triangular change of basis
//! `P_n` is applied: `d_n = P_{n-1} Δ_n P_n^{-1}`, hence `d² = 0` holds
//! exactly. Over ℤ the scalars are mostly `±1` with occasional `±2`, which
//! produces torsion.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::complex::{BasedComplex, BlockMap, Cell};
use crate::error::{Error, Result};
use crate::lcg::Lcg;
use crate::matrix::Matrix;
use crate::ring::{RingElement, RingSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomParams {
    pub cells: usize,
    pub max_degree: u32,
    pub max_rank: usize,
    /// Probability used for pairing cells and for off-diagonal basis changes.
    pub density: f64,
    pub ring: RingSpec,
    pub seed: u64,
}

fn scalar(rng: &mut Lcg, ring: &RingSpec) -> RingElement {
    let sign = if rng.chance(0.5) { 1 } else { -1 };
    match ring {
        RingSpec::Integers => ring.from_i64(sign * if rng.chance(0.85) { 1 } else { 2 }),
        RingSpec::Rationals => {
            const CHOICES: [(i64, i64); 5] = [(1, 1), (2, 1), (3, 1), (1, 2), (2, 3)];
            let (n, d) = CHOICES[rng.below(CHOICES.len())];
            RingElement::Rat(BigRational::new(BigInt::from(sign * n), BigInt::from(d)))
        }
        RingSpec::PrimeField(p) => ring.from_i64(1 + rng.below(*p as usize - 1) as i64),
    }
}

/// Inverse of a unit lower-triangular matrix by forward substitution.
fn unit_lower_inverse(l: &Matrix, ring: &RingSpec) -> Matrix {
    let n = l.rows();
    let mut x = Matrix::identity(ring, n);
    for i in 0..n {
        for j in 0..i {
            let mut acc = ring.zero();
            for k in j..i {
                let lk = l.get(i, k);
                if !lk.is_zero() {
                    acc = ring.add(&acc, &ring.mul(lk, x.get(k, j)));
                }
            }
            x.set(i, j, ring.neg(&acc));
        }
    }
    x
}

pub fn gen_random(params: &RandomParams) -> Result<BasedComplex> {
    let RandomParams { cells: count, max_degree, max_rank, density, ring, seed } = *params;
    if count == 0 {
        return Err(Error::InvalidParameter("cell count must be positive".into()));
    }
    if max_rank == 0 {
        return Err(Error::InvalidParameter("max rank must be positive".into()));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!("density {density} outside [0, 1]")));
    }
    let mut rng = Lcg::new(seed);
    let width = (count - 1).to_string().len();
    let mut cells: Vec<Cell> = (0..count)
        .map(|i| {
            let degree = rng.below(max_degree as usize + 1) as i64;
            let rank = 1 + rng.below(max_rank);
            Cell::new(format!("c{i:0width$}"), degree, rank)
        })
        .collect();
    cells.sort_by(|a, b| (a.degree, &a.id).cmp(&(b.degree, &b.id)));

    // coordinate offsets of each cell within its degree
    let mut offset = vec![0usize; cells.len()];
    let mut dim: BTreeMap<i64, usize> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        let d = dim.entry(c.degree).or_default();
        offset[i] = *d;
        *d += c.rank;
    }
    let dim_of = |n: i64| dim.get(&n).copied().unwrap_or(0);

    // Δ: disjoint pairs α -> β with deg β = deg α - 1
    let mut order: Vec<usize> = (0..cells.len()).collect();
    rng.shuffle(&mut order);
    let mut paired = vec![false; cells.len()];
    let mut delta: BTreeMap<i64, Matrix> = BTreeMap::new();
    for &a in &order {
        if paired[a] || cells[a].degree == 0 || !rng.chance(density) {
            continue;
        }
        let free: Vec<usize> =
            (0..cells.len()).filter(|&b| !paired[b] && cells[b].degree == cells[a].degree - 1).collect();
        if free.is_empty() {
            continue;
        }
        let b = free[rng.below(free.len())];
        paired[a] = true;
        paired[b] = true;
        let n = cells[a].degree;
        let m = delta.entry(n).or_insert_with(|| Matrix::zeros(&ring, dim_of(n - 1), dim_of(n)));
        for i in 0..cells[a].rank.min(cells[b].rank) {
            m.set(offset[b] + i, offset[a] + i, scalar(&mut rng, &ring));
        }
    }

    let mut basis: BTreeMap<i64, (Matrix, Matrix)> = BTreeMap::new();
    for (&n, &size) in &dim {
        let mut p = Matrix::identity(&ring, size);
        for i in 0..size {
            for j in 0..i {
                if rng.chance(density * 0.3) {
                    let v = [-2i64, -1, 1, 2][rng.below(4)];
                    p.set(i, j, ring.from_i64(v));
                }
            }
        }
        let p_inv = unit_lower_inverse(&p, &ring);
        basis.insert(n, (p, p_inv));
    }

    let mut d = BlockMap::zero(-1);
    for (&n, dn) in &delta {
        let full = basis[&(n - 1)].0.mul(dn, &ring)?.mul(&basis[&n].1, &ring)?;
        for (ai, a) in cells.iter().enumerate().filter(|(_, c)| c.degree == n) {
            for (bi, b) in cells.iter().enumerate().filter(|(_, c)| c.degree == n - 1) {
                let mut block = Matrix::zeros(&ring, b.rank, a.rank);
                for r in 0..b.rank {
                    for c in 0..a.rank {
                        block.set(r, c, full.get(offset[bi] + r, offset[ai] + c).clone());
                    }
                }
                d.insert(a.id.clone(), b.id.clone(), block);
            }
        }
    }
    BasedComplex::from_differential(ring, cells, d)
}
