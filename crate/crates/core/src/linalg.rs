//! Dense matrices over a [`FieldCtx`] with exact row reduction.
//!
//! Pivoting is deterministic: the first nonzero entry in column order, scanning rows
//! top to bottom. Kernel and image bases are read off the reduced row echelon form and
//! are therefore canonical for a given matrix.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("system has no solution")]
    Inconsistent,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.ctx)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of reducing a matrix to reduced row echelon form.
struct Rref {
    m: Matrix,
    pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(ctx: &Arc<FieldCtx>, rows: usize, cols: usize) -> Matrix {
        Matrix {
            ctx: Arc::clone(ctx),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ctx: &Arc<FieldCtx>, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from raw encoded entries, row-major.
    pub fn from_raw_rows(ctx: &Arc<FieldCtx>, rows: &[Vec<u64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(ctx, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                assert!(v < ctx.order());
                m.data[i * c + j] = v;
            }
        }
        m
    }

    /// Builds a matrix from integer entries reduced into the prime field.
    pub fn from_int_rows(ctx: &Arc<FieldCtx>, rows: &[Vec<i64>]) -> Matrix {
        let raw: Vec<Vec<u64>> = rows
            .iter()
            .map(|row| row.iter().map(|&v| ctx.from_int(v)).collect())
            .collect();
        Matrix::from_raw_rows(ctx, &raw)
    }

    pub fn from_elements(ctx: &Arc<FieldCtx>, rows: &[Vec<FieldElement>]) -> Matrix {
        let raw: Vec<Vec<u64>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        assert_eq!(**e.ctx(), **ctx, "field context mismatch");
                        e.raw()
                    })
                    .collect()
            })
            .collect();
        Matrix::from_raw_rows(ctx, &raw)
    }

    /// Matrix whose columns are the given raw vectors.
    pub fn from_columns(ctx: &Arc<FieldCtx>, dim: usize, cols: &[Vec<u64>]) -> Matrix {
        let mut m = Matrix::zeros(ctx, dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), dim);
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v;
            }
        }
        m
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn raw(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set_raw(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.ctx.elem(self.raw(r, c))
    }

    pub fn set(&mut self, r: usize, c: usize, v: &FieldElement) {
        self.set_raw(r, c, v.raw());
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.raw(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.ctx, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.raw(r, c);
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.raw(r, c) == u64::from(r == c)))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.ctx;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.raw(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.raw(k, j);
                    if b != 0 {
                        let idx = i * out.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let f = &self.ctx;
        (0..self.rows)
            .map(|r| (0..self.cols).fold(0, |acc, c| f.add(acc, f.mul(self.raw(r, c), v[c]))))
            .collect()
    }

    fn zip_with(
        &self,
        other: &Matrix,
        op: impl Fn(u64, u64) -> u64,
    ) -> Result<Matrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape(
                "elementwise operands differ in shape".into(),
            ));
        }
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&other.data) {
            *o = op(*o, b);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(other, |a, b| self.ctx.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(other, |a, b| self.ctx.sub(a, b))
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = self.ctx.mul(*v, c);
        }
        out
    }

    /// `self - I`.
    pub fn minus_identity(&self) -> Matrix {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            let idx = i * self.cols + i;
            out.data[idx] = self.ctx.sub(out.data[idx], 1);
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.ctx, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).unwrap();
            }
        }
        acc
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(&self.ctx, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set_raw(r, c, self.raw(r, c));
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set_raw(self.rows + r, self.cols + c, other.raw(r, c));
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::Shape("hstack row counts differ".into()));
        }
        let mut out = Matrix::zeros(&self.ctx, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set_raw(r, c, self.raw(r, c));
            }
            for c in 0..other.cols {
                out.set_raw(r, self.cols + c, other.raw(r, c));
            }
        }
        Ok(out)
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let cols: Vec<Vec<u64>> = idx.iter().map(|&c| self.column(c)).collect();
        Matrix::from_columns(&self.ctx, self.rows, &cols)
    }

    fn rref(&self) -> Rref {
        let f = &self.ctx;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.raw(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.raw(row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let idx = row * m.cols + c;
                m.data[idx] = f.mul(m.data[idx], inv);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.raw(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let sub = f.mul(factor, m.raw(row, c));
                    let idx = r * m.cols + c;
                    m.data[idx] = f.sub(m.data[idx], sub);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{v : self * v = 0}` as raw column vectors.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let Rref { m, pivots } = self.rref();
        let f = &self.ctx;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u64; self.cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.raw(r, fc));
                }
                v
            })
            .collect()
    }

    /// Basis of the column space, chosen among the original columns.
    pub fn column_basis(&self) -> Vec<Vec<u64>> {
        self.rref().pivots.iter().map(|&c| self.column(c)).collect()
    }

    /// Some `x` with `self * x = b`.
    pub fn solve(&self, b: &[u64]) -> Result<Vec<u64>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Shape("right-hand side length".into()));
        }
        let aug = self.hstack(&Matrix::from_columns(&self.ctx, self.rows, &[b.to_vec()]))?;
        let Rref { m, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(LinalgError::Inconsistent);
        }
        let mut x = vec![0u64; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = m.raw(r, self.cols);
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(&self.ctx, n))?;
        let Rref { m, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        let mut inv = Matrix::zeros(&self.ctx, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set_raw(r, c, m.raw(r, n + c));
            }
        }
        Ok(inv)
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self.raw(r, c) == 0))
    }
}

/// Rank of the span of a list of raw vectors of length `dim`.
pub fn span_rank(ctx: &Arc<FieldCtx>, dim: usize, vectors: &[Vec<u64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(ctx, dim, vectors).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(ctx: &Arc<FieldCtx>, r: usize, c: usize, rng: &mut ChaCha8Rng) -> Matrix {
        let rows: Vec<Vec<u64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(0..ctx.order())).collect())
            .collect();
        Matrix::from_raw_rows(ctx, &rows)
    }

    #[test]
    fn rank_of_small_matrices() {
        let f3 = FieldCtx::prime(3).unwrap();
        let m = Matrix::from_int_rows(&f3, &[vec![1, 2], vec![2, 1]]);
        // second row = 2 * first row mod 3
        assert_eq!(m.rank(), 1);
        let f5 = FieldCtx::prime(5).unwrap();
        let m = Matrix::from_int_rows(&f5, &[vec![1, 2], vec![2, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(Matrix::zeros(&f5, 3, 4).rank(), 0);
    }

    #[test]
    fn rank_nullity_and_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for ctx in [
            FieldCtx::prime(2).unwrap(),
            FieldCtx::prime(7).unwrap(),
            FieldCtx::f4(),
        ] {
            for _ in 0..50 {
                let (r, c) = (rng.gen_range(1..7), rng.gen_range(1..7));
                let mut m = random_matrix(&ctx, r, c, &mut rng);
                if rng.gen_bool(0.5) && r > 1 {
                    // force a dependent row
                    for j in 0..c {
                        let v = m.raw(0, j);
                        m.set_raw(r - 1, j, v);
                    }
                }
                let ker = m.kernel();
                assert_eq!(m.rank() + ker.len(), c);
                for v in &ker {
                    assert!(m.mul_vec(v).iter().all(|&x| x == 0));
                }
                assert_eq!(span_rank(&ctx, c, &ker), ker.len());
                assert_eq!(m.transpose().rank(), m.rank());
            }
        }
    }

    #[test]
    fn inverse_and_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ctx = FieldCtx::prime(5).unwrap();
        let mut found = 0;
        while found < 20 {
            let m = random_matrix(&ctx, 4, 4, &mut rng);
            match m.inverse() {
                Ok(inv) => {
                    found += 1;
                    assert!(m.mul(&inv).unwrap().is_identity());
                    let b: Vec<u64> = (0..4).map(|_| rng.gen_range(0..5)).collect();
                    let x = m.solve(&b).unwrap();
                    assert_eq!(m.mul_vec(&x), b);
                }
                Err(e) => {
                    assert_eq!(e, LinalgError::Singular);
                    assert!(m.rank() < 4);
                }
            }
        }
        let singular = Matrix::from_int_rows(&ctx, &[vec![1, 1], vec![1, 1]]);
        assert_eq!(singular.solve(&[0, 1]), Err(LinalgError::Inconsistent));
    }

    #[test]
    fn power_of_unipotent_block() {
        let f3 = FieldCtx::prime(3).unwrap();
        let j = Matrix::from_int_rows(&f3, &[vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        assert!(!j.pow(2).is_identity());
        assert!(j.pow(3).is_identity());
        assert!(j.minus_identity().pow(3).is_zero());
        assert!(!j.minus_identity().pow(2).is_zero());
    }
}
