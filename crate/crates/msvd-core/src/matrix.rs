//! Dense double-precision matrix with row-major storage, plus the 2x2-block
//! reshape operations the multiresolution transform is built on.

use crate::error::{Error, Result};

/// Dense `rows x cols` matrix of `f64`, row-major.
///
/// Constructors reject empty shapes and non-finite entries; every operation
/// is a pure function of its inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dimension(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::dimension(format!(
                "data length {} does not match shape {rows}x{cols}",
                data.len()
            )));
        }
        if let Some(idx) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: idx / cols,
                col: idx % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// All-zero matrix. Panics on an empty shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// The `n x n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Builds a matrix by evaluating `f(row, col)` at every position.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = f(r, c);
            }
        }
        m
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

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.cols + col] = value;
    }

    /// Row-major view of the underlying data.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        assert!(r < self.rows, "row index out of bounds");
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Entry-wise map; the shape is preserved.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Standard matrix product `self * rhs`.
    pub fn multiply(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::dimension(format!(
                "inner dimensions do not match: {}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let lhs_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in lhs_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    /// Frobenius norm, accumulated with Neumaier compensation so the result
    /// is stable under permutations of the entries.
    pub fn frobenius_norm(&self) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for &x in &self.data {
            let sq = x * x;
            let t = sum + sq;
            if sum.abs() >= sq.abs() {
                comp += (sum - t) + sq;
            } else {
                comp += (sq - t) + sum;
            }
            sum = t;
        }
        (sum + comp).sqrt()
    }

    /// Regroups an even-sized image into a `4 x (rows/2 * cols/2)` matrix:
    /// column `j` holds the j-th non-overlapping 2x2 block (blocks enumerated
    /// row-major over the block grid), ordered within the block as
    /// [top-left, bottom-left, top-right, bottom-right].
    pub fn block_to_columns(&self) -> Result<Matrix> {
        if self.rows % 2 != 0 {
            return Err(Error::dimension(format!(
                "rows must be even for 2x2 blocking, got {}",
                self.rows
            )));
        }
        if self.cols % 2 != 0 {
            return Err(Error::dimension(format!(
                "cols must be even for 2x2 blocking, got {}",
                self.cols
            )));
        }
        let bh = self.rows / 2;
        let bw = self.cols / 2;
        let m = bh * bw;
        let mut data = vec![0.0; 4 * m];
        for br in 0..bh {
            for bc in 0..bw {
                let j = br * bw + bc;
                let r = 2 * br;
                let c = 2 * bc;
                data[j] = self.data[r * self.cols + c];
                data[m + j] = self.data[(r + 1) * self.cols + c];
                data[2 * m + j] = self.data[r * self.cols + c + 1];
                data[3 * m + j] = self.data[(r + 1) * self.cols + c + 1];
            }
        }
        Ok(Matrix {
            rows: 4,
            cols: m,
            data,
        })
    }

    /// Exact inverse of [`Matrix::block_to_columns`]: scatters a `4 x m`
    /// matrix of 2x2 blocks back onto an `out_rows x out_cols` grid.
    pub fn columns_to_block(&self, out_rows: usize, out_cols: usize) -> Result<Matrix> {
        if self.rows != 4 {
            return Err(Error::dimension(format!(
                "expected 4 rows of block samples, got {}",
                self.rows
            )));
        }
        if out_rows == 0 || out_rows % 2 != 0 || out_cols == 0 || out_cols % 2 != 0 {
            return Err(Error::dimension(format!(
                "output shape must be even and positive, got {out_rows}x{out_cols}"
            )));
        }
        let bh = out_rows / 2;
        let bw = out_cols / 2;
        let m = bh * bw;
        if self.cols != m {
            return Err(Error::dimension(format!(
                "{} block columns cannot fill a {out_rows}x{out_cols} image ({m} blocks)",
                self.cols
            )));
        }
        let mut data = vec![0.0; out_rows * out_cols];
        for br in 0..bh {
            for bc in 0..bw {
                let j = br * bw + bc;
                let r = 2 * br;
                let c = 2 * bc;
                data[r * out_cols + c] = self.data[j];
                data[(r + 1) * out_cols + c] = self.data[m + j];
                data[r * out_cols + c + 1] = self.data[2 * m + j];
                data[(r + 1) * out_cols + c + 1] = self.data[3 * m + j];
            }
        }
        Ok(Matrix {
            rows: out_rows,
            cols: out_cols,
            data,
        })
    }

    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }
}

/// Largest absolute entry-wise difference. Panics on shape mismatch.
pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
