//! Integer matrices: a dense form used by the Smith reduction and a
//! column-major sparse form used for boundary operators.

use std::fmt;

use thiserror::Error;

/// Raised when an exact integer computation leaves the `i128` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("integer overflow in exact matrix arithmetic")]
pub struct Overflow;

pub(crate) fn mul(a: i128, b: i128) -> Result<i128, Overflow> {
    a.checked_mul(b).ok_or(Overflow)
}

pub(crate) fn sub(a: i128, b: i128) -> Result<i128, Overflow> {
    a.checked_sub(b).ok_or(Overflow)
}

pub(crate) fn add(a: i128, b: i128) -> Result<i128, Overflow> {
    a.checked_add(b).ok_or(Overflow)
}

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row vectors. Panics if the rows are ragged.
    pub fn from_rows<T: Into<i128> + Copy>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x.into());
            }
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, entries: &[i128]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, &d) in entries.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix, Overflow> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let v = add(out.get(i, j), mul(a, b)?)?;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i128]) -> Result<Vec<i128>, Overflow> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).try_fold(0i128, |acc, (&a, &b)| add(acc, mul(a, b)?)))
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i128, Overflow> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a.get(k, k) == 0 {
                let Some(p) = (k + 1..n).find(|&i| a.get(i, k) != 0) else {
                    return Ok(0);
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = sub(mul(a.get(i, j), a.get(k, k))?, mul(a.get(i, k), a.get(k, j))?)?;
                    a.set(i, j, v / prev);
                }
            }
            prev = a.get(k, k);
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    pub(crate) fn row_axpy(&mut self, dst: usize, src: usize, q: i128) -> Result<(), Overflow> {
        if q == 0 {
            return Ok(());
        }
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s != 0 {
                let v = sub(self.get(dst, j), mul(q, s)?)?;
                self.set(dst, j, v);
            }
        }
        Ok(())
    }

    /// col[dst] -= q * col[src]
    pub(crate) fn col_axpy(&mut self, dst: usize, src: usize, q: i128) -> Result<(), Overflow> {
        if q == 0 {
            return Ok(());
        }
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s != 0 {
                let v = sub(self.get(i, dst), mul(q, s)?)?;
                self.set(i, dst, v);
            }
        }
        Ok(())
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = self.get(i, j);
            self.set(i, j, -v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Column-major sparse integer matrix. Each column lists `(row, value)` pairs
/// sorted by row, with no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, columns: vec![Vec::new(); cols] }
    }

    /// Builds a matrix from per-column entries; duplicate rows within a column
    /// are summed and zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, i64)>>) -> Self {
        let columns = columns
            .into_iter()
            .map(|mut col| {
                col.sort_unstable_by_key(|&(r, _)| r);
                let mut out: Vec<(usize, i64)> = Vec::with_capacity(col.len());
                for (r, v) in col {
                    assert!(r < rows, "row index {r} out of range {rows}");
                    match out.last_mut() {
                        Some((lr, lv)) if *lr == r => *lv += v,
                        _ => out.push((r, v)),
                    }
                }
                out.retain(|&(_, v)| v != 0);
                out
            })
            .collect();
        SparseMatrix { rows, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                m.set(i, j, v as i128);
            }
        }
        m
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                cols[i].push((j, v));
            }
        }
        SparseMatrix { rows: self.cols(), columns: cols }
    }

    /// `self * other`.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), other.rows, "dimension mismatch in sparse product");
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut acc: Vec<(usize, i64)> = Vec::new();
                for &(k, b) in col {
                    for &(i, a) in &self.columns[k] {
                        acc.push((i, a * b));
                    }
                }
                acc
            })
            .collect();
        SparseMatrix::from_columns(self.rows, columns)
    }

    pub fn mul_vec(&self, v: &[i128]) -> Result<Vec<i128>, Overflow> {
        assert_eq!(self.cols(), v.len());
        let mut out = vec![0i128; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if v[j] == 0 {
                continue;
            }
            for &(i, a) in col {
                out[i] = add(out[i], mul(a as i128, v[j])?)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows(&[vec![2i64, 1], vec![7, 4]]);
        assert_eq!(m.determinant().unwrap(), 1);
        let m = IntMatrix::from_rows(&[vec![0i64, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]);
        assert_eq!(m.determinant().unwrap(), -3);
    }

    #[test]
    fn sparse_compose_and_dense_agree() {
        let a = SparseMatrix::from_columns(2, vec![vec![(0, 1), (1, -1)], vec![(1, 2)]]);
        let b = SparseMatrix::from_columns(2, vec![vec![(0, 3)], vec![(0, 1), (1, 1)]]);
        let dense = a.to_dense().checked_mul(&b.to_dense()).unwrap();
        assert_eq!(a.compose(&b).to_dense(), dense);
    }

    #[test]
    fn duplicate_entries_merge() {
        let m = SparseMatrix::from_columns(3, vec![vec![(2, 1), (0, 4), (2, -1)]]);
        assert_eq!(m.column(0), &[(0, 4)]);
    }
}
