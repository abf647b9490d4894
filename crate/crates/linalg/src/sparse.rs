use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::LinalgError;

/// Column-major sparse matrix over the integers.
///
/// Columns are sorted by row index and never store zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(u32, BigInt)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i as u32, BigInt::one())]).collect();
        Self {
            rows: n,
            cols: n,
            columns,
        }
    }

    /// Builds a matrix from unsorted column entries; duplicates are summed.
    pub fn from_columns<I>(rows: usize, columns: Vec<I>) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let cols = columns.len();
        let mut out = Vec::with_capacity(cols);
        for (j, col) in columns.into_iter().enumerate() {
            let mut entries: Vec<(u32, BigInt)> = Vec::new();
            for (i, v) in col {
                if i >= rows {
                    return Err(LinalgError::Dimension(format!(
                        "row {i} out of range in column {j} (rows = {rows})"
                    )));
                }
                entries.push((i as u32, v));
            }
            entries.sort_by_key(|e| e.0);
            let mut merged: Vec<(u32, BigInt)> = Vec::with_capacity(entries.len());
            for (i, v) in entries {
                match merged.last_mut() {
                    Some(last) if last.0 == i => last.1 += v,
                    _ => merged.push((i, v)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            out.push(merged);
        }
        Ok(Self {
            rows,
            cols,
            columns: out,
        })
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut columns = vec![Vec::new(); ncols];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    columns[j].push((i as u32, BigInt::from(v)));
                }
            }
        }
        Self {
            rows: nrows,
            cols: ncols,
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(u32, BigInt)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[(u32, BigInt)]> {
        self.columns.iter().map(Vec::as_slice)
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        match self.columns[j].binary_search_by_key(&(i as u32), |e| e.0) {
            Ok(k) => self.columns[j][k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        let col = &mut self.columns[j];
        match col.binary_search_by_key(&(i as u32), |e| e.0) {
            Ok(k) if v.is_zero() => {
                col.remove(k);
            }
            Ok(k) => col[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => col.insert(k, (i as u32, v)),
        }
    }

    /// Appends the columns of `other` on the right.
    pub fn hstack(&self, other: &SparseIntMatrix) -> Result<Self, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::Dimension(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Ok(Self {
            rows: self.rows,
            cols: self.cols + other.cols,
            columns,
        })
    }

    pub fn transpose(&self) -> Self {
        let mut columns = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                columns[*i as usize].push((j as u32, v.clone()));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        let mut y = vec![BigInt::zero(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for (i, v) in col {
                y[*i as usize] += v * &x[j];
            }
        }
        y
    }

    pub fn mul(&self, rhs: &SparseIntMatrix) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut columns = Vec::with_capacity(rhs.cols);
        let mut acc = vec![BigInt::zero(); self.rows];
        let mut touched: Vec<u32> = Vec::new();
        for col in &rhs.columns {
            for (k, b) in col {
                for (i, a) in &self.columns[*k as usize] {
                    let slot = &mut acc[*i as usize];
                    if slot.is_zero() {
                        touched.push(*i);
                    }
                    *slot += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut out = Vec::new();
            for &i in &touched {
                let v = std::mem::take(&mut acc[i as usize]);
                if !v.is_zero() {
                    out.push((i, v));
                }
            }
            touched.clear();
            columns.push(out);
        }
        Ok(Self {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                out[*i as usize][j] = v.clone();
            }
        }
        out
    }

    /// Reduces entries of the listed rows modulo 2 (to 0 or 1).
    pub fn reduce_rows_mod2(&mut self, rows: &[bool]) {
        for col in &mut self.columns {
            for e in col.iter_mut() {
                if rows[e.0 as usize] {
                    let odd = e.1.bit(0);
                    e.1 = if odd { BigInt::one() } else { BigInt::zero() };
                }
            }
            col.retain(|e| !e.1.is_zero());
        }
    }

    /// Submatrix on the given row and column index lists (in that order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut row_map = vec![u32::MAX; self.rows];
        for (k, &i) in rows.iter().enumerate() {
            row_map[i] = k as u32;
        }
        let columns = cols
            .iter()
            .map(|&j| {
                let mut c: Vec<(u32, BigInt)> = self.columns[j]
                    .iter()
                    .filter(|(i, _)| row_map[*i as usize] != u32::MAX)
                    .map(|(i, v)| (row_map[*i as usize], v.clone()))
                    .collect();
                c.sort_by_key(|e| e.0);
                c
            })
            .collect();
        Self {
            rows: rows.len(),
            cols: cols.len(),
            columns,
        }
    }
}

impl fmt::Debug for SparseIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseIntMatrix({}x{}, nnz={})", self.rows, self.cols, self.nnz())?;
        if self.rows * self.cols <= 64 {
            for row in self.to_dense() {
                write!(f, "\n  [")?;
                for (k, v) in row.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")?;
            }
        }
        Ok(())
    }
}
