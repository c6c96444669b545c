use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix stored in column-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for c in 0..cols {
            for r in 0..rows {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Wraps column-major data.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_col_major",
                left: vec![rows, cols],
                right: vec![data.len()],
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                op: "from_rows",
                left: vec![ncols],
                right: vec![bad.len()],
            });
        }
        Ok(Self::from_fn(rows.len(), ncols, |r, c| rows[r][c]))
    }

    /// Real-valued convenience constructor, rows given as slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Single-column matrix.
    pub fn from_column(col: &[Complex64]) -> Self {
        Self {
            rows: col.len(),
            cols: 1,
            data: col.to_vec(),
        }
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

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn column(&self, c: usize) -> &[Complex64] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn column_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn row(&self, r: usize) -> Vec<Complex64> {
        (0..self.cols).map(|c| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: vec![self.rows, self.cols],
                right: vec![rhs.rows, rhs.cols],
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for c in 0..rhs.cols {
            let dst = &mut out.data[c * self.rows..(c + 1) * self.rows];
            for (k, &b) in rhs.column(c).iter().enumerate() {
                if b == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (d, &a) in dst.iter_mut().zip(self.column(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    fn zip_with(
        &self,
        rhs: &ComplexMatrix,
        op: &'static str,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<ComplexMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: vec![self.rows, self.cols],
                right: vec![rhs.rows, rhs.cols],
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> Result<f64> {
        Ok(self
            .sub(rhs)?
            .data
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r + c * self.rows]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r + c * self.rows]
    }
}
