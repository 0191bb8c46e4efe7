use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// An integer matrix stored by sparse columns. Column j lists the nonzero
/// entries (row, value) of the image of the j-th basis vector, sorted by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for (j, col) in m.columns.iter_mut().enumerate() {
            col.push((j, BigInt::one()));
        }
        m
    }

    /// n * identity.
    pub fn scalar(n: usize, c: &BigInt) -> Self {
        let mut m = Self::zeros(n, n);
        if !c.is_zero() {
            for (j, col) in m.columns.iter_mut().enumerate() {
                col.push((j, c.clone()));
            }
        }
        m
    }

    /// Build from sparse columns; entries may be unsorted and contain
    /// duplicates (summed) or zeros (dropped).
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, BigInt)>>) -> Self {
        let cols = columns.len();
        let columns = columns.into_iter().map(normalize_column).collect();
        let m = IntMatrix { rows, cols, columns };
        debug_assert!(m.columns.iter().flatten().all(|(r, _)| *r < rows));
        m
    }

    /// Sparse columns with small integer entries.
    pub fn from_i64_columns(rows: usize, columns: Vec<Vec<(usize, i64)>>) -> Self {
        Self::from_columns(
            rows,
            columns
                .into_iter()
                .map(|c| c.into_iter().map(|(r, v)| (r, BigInt::from(v))).collect())
                .collect(),
        )
    }

    /// Row-major dense input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut columns = vec![Vec::new(); ncols];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    columns[j].push((i, BigInt::from(v)));
                }
            }
        }
        IntMatrix {
            rows: nrows,
            cols: ncols,
            columns,
        }
    }

    pub fn from_dense(rows: usize, cols: usize, data: &[Vec<BigInt>]) -> Self {
        let mut columns = vec![Vec::new(); cols];
        for (i, row) in data.iter().enumerate().take(rows) {
            for (j, v) in row.iter().enumerate().take(cols) {
                if !v.is_zero() {
                    columns[j].push((i, v.clone()));
                }
            }
        }
        IntMatrix { rows, cols, columns }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(usize, BigInt)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<(usize, BigInt)>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        match self.columns[j].binary_search_by_key(&i, |(r, _)| *r) {
            Ok(k) => self.columns[j][k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut columns = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                columns[*i].push((j, v.clone()));
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }

    /// self * v for a dense vector v.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in apply");
        let mut out = vec![BigInt::zero(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (i, a) in col {
                out[*i] += a * &v[j];
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Mismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut acc: Vec<(usize, BigInt)> = Vec::new();
                for (k, b) in col {
                    for (i, a) in &self.columns[*k] {
                        acc.push((*i, a * b));
                    }
                }
                normalize_column(acc)
            })
            .collect();
        Ok(IntMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, &BigInt::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, &BigInt::from(-1))
    }

    fn combine(&self, other: &Self, sign: &BigInt) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Mismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut acc = a.clone();
                acc.extend(b.iter().map(|(i, v)| (*i, v * sign)));
                normalize_column(acc)
            })
            .collect();
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self
                .columns
                .iter()
                .map(|col| col.iter().map(|(i, v)| (*i, v * c)).collect())
                .collect(),
        }
    }

    /// Kronecker product: (A (x) B)[(i,k),(j,l)] = A[i,j] B[k,l], row index
    /// i * B.rows + k.
    pub fn kronecker(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let mut columns = Vec::with_capacity(self.cols * other.cols);
        for acol in &self.columns {
            for bcol in &other.columns {
                let mut c = Vec::with_capacity(acol.len() * bcol.len());
                for (i, a) in acol {
                    for (k, b) in bcol {
                        c.push((i * other.rows + k, a * b));
                    }
                }
                c.sort_by_key(|(r, _)| *r);
                columns.push(c);
            }
        }
        IntMatrix {
            rows,
            cols: self.cols * other.cols,
            columns,
        }
    }

    /// Block matrix from a grid of optional blocks (None = zero block).
    /// Row heights and column widths must be supplied.
    pub fn block(heights: &[usize], widths: &[usize], blocks: &[Vec<Option<&IntMatrix>>]) -> Self {
        let rows: usize = heights.iter().sum();
        let mut columns = Vec::new();
        for (bj, &w) in widths.iter().enumerate() {
            for j in 0..w {
                let mut col = Vec::new();
                let mut off = 0;
                for (bi, &h) in heights.iter().enumerate() {
                    if let Some(m) = blocks[bi][bj] {
                        assert_eq!((m.rows, m.cols), (h, w), "block shape mismatch");
                        for (i, v) in &m.columns[j] {
                            col.push((off + i, v.clone()));
                        }
                    }
                    off += h;
                }
                columns.push(col);
            }
        }
        IntMatrix {
            rows,
            cols: widths.iter().sum(),
            columns,
        }
    }

    /// Reduce every entry into [0, m).
    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self
                .columns
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|(i, v)| (*i, ((v % m) + m) % m))
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect(),
        }
    }

    /// Row-major dense JSON array of integers.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.to_dense()
                .into_iter()
                .map(|row| Value::Array(row.into_iter().map(bigint_to_json).collect()))
                .collect(),
        )
    }

    /// Parse a row-major JSON matrix; the shape is needed because empty
    /// matrices carry no column count.
    pub fn from_json(v: &Value, rows: usize, cols: usize) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::InvalidArgument("matrix must be a JSON array".into()))?;
        if arr.len() != rows {
            return Err(Error::Mismatch(format!(
                "matrix has {} rows, expected {rows}",
                arr.len()
            )));
        }
        let mut data = Vec::with_capacity(rows);
        for row in arr {
            let r = row
                .as_array()
                .ok_or_else(|| Error::InvalidArgument("matrix row must be an array".into()))?;
            if r.len() != cols {
                return Err(Error::Mismatch(format!(
                    "matrix row has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.push(r.iter().map(json_to_bigint).collect::<Result<Vec<_>>>()?);
        }
        Ok(Self::from_dense(rows, cols, &data))
    }
}

fn normalize_column(mut col: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    col.sort_by_key(|(r, _)| *r);
    let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(col.len());
    for (r, v) in col {
        match out.last_mut() {
            Some((lr, lv)) if *lr == r => *lv += v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

pub(crate) fn bigint_to_json(v: BigInt) -> Value {
    match i64::try_from(&v) {
        Ok(x) => Value::from(x),
        Err(_) => Value::String(v.to_string()),
    }
}

pub(crate) fn json_to_bigint(v: &Value) -> Result<BigInt> {
    if let Some(x) = v.as_i64() {
        return Ok(BigInt::from(x));
    }
    if let Some(s) = v.as_str() {
        return s
            .parse::<BigInt>()
            .map_err(|_| Error::InvalidArgument(format!("bad integer {s:?}")));
    }
    Err(Error::InvalidArgument(format!("expected integer, got {v}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_and_transpose() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        let b = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b).unwrap(), IntMatrix::from_rows(&[vec![2, 1], vec![4, 3]]));
        assert_eq!(a.transpose(), IntMatrix::from_rows(&[vec![1, 3], vec![2, 4]]));
        assert!(a.mul(&IntMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn kronecker_shape() {
        let a = IntMatrix::from_rows(&[vec![1, 2]]);
        let b = IntMatrix::from_rows(&[vec![0], vec![3]]);
        let k = a.kronecker(&b);
        assert_eq!(k, IntMatrix::from_rows(&[vec![0, 0], vec![3, 6]]));
    }

    #[test]
    fn json_round_trip() {
        let a = IntMatrix::from_rows(&[vec![1, -2, 0], vec![0, 0, 5]]);
        let j = a.to_json();
        assert_eq!(j.to_string(), "[[1,-2,0],[0,0,5]]");
        assert_eq!(IntMatrix::from_json(&j, 2, 3).unwrap(), a);
    }
}
