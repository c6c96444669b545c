use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Third-order complex tensor, linear index `i1 + d1*(i2 + d2*i3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTensor3 {
    dims: [usize; 3],
    data: Vec<Complex64>,
}

impl ComplexTensor3 {
    pub fn new(dims: [usize; 3], data: Vec<Complex64>) -> Result<Self> {
        let len: usize = dims.iter().product();
        if data.len() != len {
            return Err(Error::DimensionMismatch {
                op: "ComplexTensor3::new",
                left: dims.to_vec(),
                right: vec![data.len()],
            });
        }
        Ok(Self { dims, data })
    }

    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dims.iter().product());
        for i3 in 0..dims[2] {
            for i2 in 0..dims[1] {
                for i1 in 0..dims[0] {
                    data.push(f(i1, i2, i3));
                }
            }
        }
        Self { dims, data }
    }

    /// Outer product `a ∘ b ∘ c`.
    pub fn outer(a: &[Complex64], b: &[Complex64], c: &[Complex64]) -> Self {
        Self::from_fn([a.len(), b.len(), c.len()], |i, j, k| a[i] * b[j] * c[k])
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i1: usize, i2: usize, i3: usize) -> Complex64 {
        let [d1, d2, _] = self.dims;
        self.data[i1 + d1 * (i2 + d2 * i3)]
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Mode-`n` unfolding (`n` in 1..=3). Rows follow mode `n`; the remaining
    /// modes index the columns with the lower mode varying fastest.
    pub fn unfold(&self, mode: usize) -> ComplexMatrix {
        let [d1, d2, d3] = self.dims;
        match mode {
            1 => ComplexMatrix::from_fn(d1, d2 * d3, |r, c| self.get(r, c % d2, c / d2)),
            2 => ComplexMatrix::from_fn(d2, d1 * d3, |r, c| self.get(c % d1, r, c / d1)),
            3 => ComplexMatrix::from_fn(d3, d1 * d2, |r, c| self.get(c % d1, c / d1, r)),
            _ => panic!("ComplexTensor3 has modes 1..=3, got {mode}"),
        }
    }

    pub fn sub(&self, rhs: &ComplexTensor3) -> Result<ComplexTensor3> {
        if self.dims != rhs.dims {
            return Err(Error::DimensionMismatch {
                op: "ComplexTensor3::sub",
                left: self.dims.to_vec(),
                right: rhs.dims.to_vec(),
            });
        }
        Ok(Self {
            dims: self.dims,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dims: self.dims,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }
}

/// Fourth-order complex tensor, linear index `i1 + d1*(i2 + d2*(i3 + d3*i4))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTensor4 {
    dims: [usize; 4],
    data: Vec<Complex64>,
}

impl ComplexTensor4 {
    pub fn new(dims: [usize; 4], data: Vec<Complex64>) -> Result<Self> {
        let len: usize = dims.iter().product();
        if data.len() != len {
            return Err(Error::DimensionMismatch {
                op: "ComplexTensor4::new",
                left: dims.to_vec(),
                right: vec![data.len()],
            });
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: [usize; 4]) -> Self {
        Self {
            dims,
            data: vec![Complex64::new(0.0, 0.0); dims.iter().product()],
        }
    }

    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    fn offset(&self, i1: usize, i2: usize, i3: usize, i4: usize) -> usize {
        let [d1, d2, d3, _] = self.dims;
        i1 + d1 * (i2 + d2 * (i3 + d3 * i4))
    }

    pub fn get(&self, i1: usize, i2: usize, i3: usize, i4: usize) -> Complex64 {
        self.data[self.offset(i1, i2, i3, i4)]
    }

    pub fn set(&mut self, i1: usize, i2: usize, i3: usize, i4: usize, v: Complex64) {
        let o = self.offset(i1, i2, i3, i4);
        self.data[o] = v;
    }

    /// The `d1 x d2` frontal slice at `(i3, i4)`.
    pub fn slice(&self, i3: usize, i4: usize) -> ComplexMatrix {
        let [d1, d2, _, _] = self.dims;
        let start = self.offset(0, 0, i3, i4);
        ComplexMatrix::from_col_major(d1, d2, self.data[start..start + d1 * d2].to_vec())
            .expect("slice length matches its shape")
    }

    /// Overwrites the frontal slice at `(i3, i4)`.
    pub fn set_slice(&mut self, i3: usize, i4: usize, m: &ComplexMatrix) -> Result<()> {
        let [d1, d2, _, _] = self.dims;
        if m.shape() != (d1, d2) {
            return Err(Error::DimensionMismatch {
                op: "ComplexTensor4::set_slice",
                left: vec![d1, d2],
                right: vec![m.rows(), m.cols()],
            });
        }
        let start = self.offset(0, 0, i3, i4);
        self.data[start..start + d1 * d2].copy_from_slice(m.data());
        Ok(())
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn tensor3_linear_index() {
        let t = ComplexTensor3::new([2, 3, 2], (0..12).map(|i| r(i as f64)).collect()).unwrap();
        assert_eq!(t.get(1, 2, 1), r((1 + 2 * (2 + 3)) as f64));
        assert!(ComplexTensor3::new([2, 2, 2], vec![r(0.0); 7]).is_err());
    }

    #[test]
    fn unfoldings_hold_every_entry_once() {
        let t = ComplexTensor3::new([2, 3, 4], (0..24).map(|i| r(i as f64)).collect()).unwrap();
        for mode in 1..=3 {
            let u = t.unfold(mode);
            assert_eq!(u.rows(), t.dims()[mode - 1]);
            let mut seen: Vec<f64> = u.data().iter().map(|z| z.re).collect();
            seen.sort_by(f64::total_cmp);
            assert_eq!(seen, (0..24).map(f64::from).collect::<Vec<_>>());
        }
        // Mode-1 unfolding is a plain reshape of the column-major data.
        assert_eq!(t.unfold(1).data(), t.data());
        assert_eq!(t.unfold(3)[(2, 5)], t.get(1, 2, 2));
        assert_eq!(t.unfold(2)[(1, 7)], t.get(1, 1, 3));
    }

    #[test]
    fn tensor4_slices() {
        let mut t = ComplexTensor4::zeros([2, 2, 3, 2]);
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        t.set_slice(2, 1, &m).unwrap();
        assert_eq!(t.slice(2, 1), m);
        assert_eq!(t.get(1, 0, 2, 1), r(3.0));
        assert_eq!(t.slice(0, 0), ComplexMatrix::zeros(2, 2));
        assert!(t.set_slice(0, 0, &ComplexMatrix::zeros(3, 2)).is_err());
    }
}
