//! Dense matrices over a [`RingSpec`], used for the blocks of graded maps.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{RingElement, RingSpec};

/// Row-major dense matrix. Block `f_{β,α}` has `rows = rank(β)` and `cols = rank(α)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<RingElement>,
}

impl Matrix {
    pub fn zeros(ring: &RingSpec, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &RingSpec, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = ring.one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<RingElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries".into(),
                expected: (rows, cols),
                found: (entries.len(), 1),
            });
        }
        Ok(Matrix { rows, cols, entries })
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<RingElement>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                context: "ragged matrix rows".into(),
                expected: (nrows, ncols),
                found: (nrows, bad.len()),
            });
        }
        Ok(Matrix { rows: nrows, cols: ncols, entries: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(ring: &RingSpec, rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| ring.from_i64(x)).collect()).collect())
            .expect("rectangular input")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &RingElement {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: RingElement) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[RingElement] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElement::is_zero)
    }

    /// Position and value of the first nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &RingElement)> {
        self.entries.iter().position(|x| !x.is_zero()).map(|i| (i / self.cols, i % self.cols, &self.entries[i]))
    }

    pub fn mul(&self, rhs: &Matrix, ring: &RingSpec) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product".into(),
                expected: (self.cols, rhs.cols),
                found: rhs.shape(),
            });
        }
        let mut out = Matrix::zeros(ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.entries[idx] = ring.add(&out.entries[idx], &ring.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[RingElement], ring: &RingSpec) -> Result<Vec<RingElement>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product".into(),
                expected: (self.cols, 1),
                found: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(ring.zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b))))
            .collect())
    }

    pub fn add(&self, rhs: &Matrix, ring: &RingSpec) -> Result<Matrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                context: "matrix sum".into(),
                expected: self.shape(),
                found: rhs.shape(),
            });
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| ring.add(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn neg(&self, ring: &RingSpec) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|a| ring.neg(a)).collect() }
    }

    /// Exact two-sided inverse. Over a field this is Gauss–Jordan elimination;
    /// over ℤ the determinant must be ±1 and the inverse is `det · adj`.
    pub fn inverse(&self, ring: &RingSpec) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                context: "inverse of non-square matrix".into(),
                expected: (self.rows, self.rows),
                found: self.shape(),
            });
        }
        if ring.is_field() {
            self.inverse_field(ring)
        } else {
            self.inverse_integer(ring)
        }
    }

    pub fn is_invertible(&self, ring: &RingSpec) -> bool {
        self.inverse(ring).is_ok()
    }

    fn inverse_field(&self, ring: &RingSpec) -> Result<Matrix> {
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(ring, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or_else(|| Error::NotInvertible(format!("singular {n}x{n} matrix")))?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p_inv = ring.invert(a.get(col, col))?;
            a.scale_row(col, &p_inv, ring);
            inv.scale_row(col, &p_inv, ring);
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = ring.neg(a.get(r, col));
                a.add_row_multiple(r, col, &factor, ring);
                inv.add_row_multiple(r, col, &factor, ring);
            }
        }
        Ok(inv)
    }

    fn inverse_integer(&self, ring: &RingSpec) -> Result<Matrix> {
        let a = self.to_bigint()?;
        let det = bareiss_determinant(&a);
        if !det.abs().is_one() {
            return Err(Error::NotInvertible(format!("integer matrix with determinant {det}")));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(self.clone());
        }
        // inverse = adj / det = det * adj, adj[j][i] = (-1)^(i+j) * minor(i, j)
        let mut out = Matrix::zeros(ring, n, n);
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<BigInt>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| (0..n).filter(|&c| c != j).map(|c| a[r][c].clone()).collect())
                    .collect();
                let mut cof = bareiss_determinant(&minor);
                if (i + j) % 2 == 1 {
                    cof = -cof;
                }
                out.set(j, i, RingElement::Int(cof * &det));
            }
        }
        Ok(out)
    }

    /// Rank over a field by row reduction.
    pub fn rank(&self, ring: &RingSpec) -> Result<usize> {
        if !ring.is_field() {
            return Err(Error::RingMismatch("rank by elimination needs a field".into()));
        }
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(rank, pivot);
            let p_inv = ring.invert(a.get(rank, col))?;
            for r in rank + 1..self.rows {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let factor = ring.neg(&ring.mul(a.get(r, col), &p_inv));
                a.add_row_multiple(r, rank, &factor, ring);
            }
            rank += 1;
        }
        Ok(rank)
    }

    /// Integer entries as big integers; fails for non-integer matrices.
    pub fn to_bigint(&self) -> Result<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| match x {
                        RingElement::Int(n) => Ok(n.clone()),
                        other => Err(Error::RingMismatch(format!("{other:?} is not an integer"))),
                    })
                    .collect()
            })
            .collect()
    }

    /// Entrywise image under `ring`'s canonical map from ℤ.
    pub fn coerce_integer(&self, ring: &RingSpec) -> Result<Matrix> {
        let entries = self.entries.iter().map(|x| ring.coerce_integer(x)).collect::<Result<_>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, row: usize, s: &RingElement, ring: &RingSpec) {
        for c in 0..self.cols {
            let idx = row * self.cols + c;
            self.entries[idx] = ring.mul(&self.entries[idx], s);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &RingElement, ring: &RingSpec) {
        for c in 0..self.cols {
            let s = &self.entries[src * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let v = ring.mul(factor, s);
            let idx = dst * self.cols + c;
            self.entries[idx] = ring.add(&self.entries[idx], &v);
        }
    }
}

/// Fraction-free determinant of a square integer matrix.
pub fn bareiss_determinant(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_inverse_requires_unit_determinant() {
        let z = RingSpec::Integers;
        let m = Matrix::from_i64(&z, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse(&z).unwrap();
        assert_eq!(inv, Matrix::from_i64(&z, &[&[1, -1], &[-1, 2]]));
        assert_eq!(m.mul(&inv, &z).unwrap(), Matrix::identity(&z, 2));

        let singular_over_z = Matrix::from_i64(&z, &[&[2, 0], &[0, 1]]);
        assert!(matches!(singular_over_z.inverse(&z), Err(Error::NotInvertible(_))));
        assert!(Matrix::from_i64(&z, &[&[-1]]).is_invertible(&z));
        assert!(!Matrix::from_i64(&z, &[&[3]]).is_invertible(&z));
    }

    #[test]
    fn integer_inverse_three_by_three() {
        let z = RingSpec::Integers;
        let m = Matrix::from_i64(&z, &[&[1, 2, 3], &[0, 1, 4], &[5, 6, 0]]);
        let inv = m.inverse(&z).unwrap();
        assert_eq!(m.mul(&inv, &z).unwrap(), Matrix::identity(&z, 3));
        assert_eq!(inv.mul(&m, &z).unwrap(), Matrix::identity(&z, 3));
    }

    #[test]
    fn field_inverse() {
        for ring in [RingSpec::Rationals, RingSpec::PrimeField(5)] {
            let m = Matrix::from_i64(&ring, &[&[0, 2, 1], &[1, 1, 0], &[3, 0, 2]]);
            let inv = m.inverse(&ring).unwrap();
            assert_eq!(m.mul(&inv, &ring).unwrap(), Matrix::identity(&ring, 3));
        }
        let f2 = RingSpec::PrimeField(2);
        assert!(!Matrix::from_i64(&f2, &[&[1, 1], &[1, 1]]).is_invertible(&f2));
    }

    #[test]
    fn non_square_inverse_is_dimension_error() {
        let q = RingSpec::Rationals;
        let m = Matrix::from_i64(&q, &[&[1, 0]]);
        assert!(matches!(m.inverse(&q), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rank_over_fields() {
        let q = RingSpec::Rationals;
        assert_eq!(Matrix::from_i64(&q, &[&[1, 2], &[2, 4]]).rank(&q).unwrap(), 1);
        let f2 = RingSpec::PrimeField(2);
        assert_eq!(Matrix::from_i64(&f2, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]).rank(&f2).unwrap(), 2);
        assert_eq!(Matrix::from_i64(&q, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]).rank(&q).unwrap(), 3);
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let rows = [[3i64, -2, 5, 1], [0, 4, -1, 2], [7, 1, 1, -3], [2, 2, -6, 0]];
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        fn laplace(m: &[Vec<i64>]) -> i64 {
            if m.len() == 1 {
                return m[0][0];
            }
            (0..m.len())
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * m[0][j] * laplace(&minor)
                })
                .sum()
        }
        let small: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        assert_eq!(bareiss_determinant(&big), BigInt::from(laplace(&small)));
    }
}
