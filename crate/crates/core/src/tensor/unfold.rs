//! Unfoldings of the `M_r x Q x K x J` received-signal tensor and the
//! tensorization of motion-augmented columns.
//!
//! The index maps are chosen so that, without noise,
//!
//! - `unfold_y1(Y) = (G^T ⋄ H) (Φ ⋄ T)^T`
//! - `unfold_y2(Y) = (T ⋄ G^T ⋄ H) Φ^T`
//!
//! hold exactly with [`khatri_rao`](super::khatri_rao) as defined in this
//! crate (left factor outer, right factor inner).

use num_complex::Complex64;

use super::{hadamard, ComplexMatrix, ComplexTensor3, ComplexTensor4};
use crate::error::{Error, Result};

/// `Y1[(q*M_r + m_r), (j*K + k)] = Y[m_r, q, k, j]`, a `Q M_r x J K` matrix.
pub fn unfold_y1(y: &ComplexTensor4) -> ComplexMatrix {
    let [mr, q, k, j] = y.dims();
    // Rows (q outer, m_r inner) are exactly the first two tensor modes in
    // linear order, and columns (j outer, k inner) are the last two.
    ComplexMatrix::from_col_major(mr * q, k * j, y.data().to_vec())
        .expect("tensor length matches unfolding shape")
}

/// Inverse of [`unfold_y1`].
pub fn refold_y1(y1: &ComplexMatrix, dims: [usize; 4]) -> Result<ComplexTensor4> {
    let [mr, q, k, j] = dims;
    if y1.shape() != (mr * q, k * j) {
        return Err(Error::DimensionMismatch {
            op: "refold_y1",
            left: vec![y1.rows(), y1.cols()],
            right: dims.to_vec(),
        });
    }
    ComplexTensor4::new(dims, y1.data().to_vec())
}

/// `Y2[(k*Q*M_r + q*M_r + m_r), j] = Y[m_r, q, k, j]`, a `K Q M_r x J` matrix.
pub fn unfold_y2(y: &ComplexTensor4) -> ComplexMatrix {
    let [mr, q, k, j] = y.dims();
    ComplexMatrix::from_col_major(mr * q * k, j, y.data().to_vec())
        .expect("tensor length matches unfolding shape")
}

/// Tensorizes a length-`K Q M_r` column: `out[m_r, q, k] = z[k*Q*M_r + q*M_r + m_r]`.
///
/// For `z = t ⊗ g ⊗ h` the result is `h ∘ g ∘ t`.
pub fn fold3(z: &[Complex64], mr: usize, q: usize, k: usize) -> Result<ComplexTensor3> {
    if z.len() != mr * q * k {
        return Err(Error::DimensionMismatch {
            op: "fold3",
            left: vec![z.len()],
            right: vec![mr, q, k],
        });
    }
    ComplexTensor3::new([mr, q, k], z.to_vec())
}

/// Builds `Y = I_{4,M} ×1 H ×2 G^T ×3 T ×4 Φ` slice by slice, with slice
/// `(k, j)` equal to `H diag(φ_j ⊙ t_k) G`.
///
/// Shapes: `H` is `M_r x M`, `G` is `M x Q`, `T` is `K x M`, `Φ` is `J x M`.
pub fn parafac4_reconstruct(
    h: &ComplexMatrix,
    g: &ComplexMatrix,
    t: &ComplexMatrix,
    phi: &ComplexMatrix,
) -> Result<ComplexTensor4> {
    let m = h.cols();
    if g.rows() != m || t.cols() != m || phi.cols() != m {
        return Err(Error::DimensionMismatch {
            op: "parafac4_reconstruct",
            left: vec![h.rows(), h.cols(), g.rows(), g.cols()],
            right: vec![t.rows(), t.cols(), phi.rows(), phi.cols()],
        });
    }
    let (kk, jj) = (t.rows(), phi.rows());
    let mut y = ComplexTensor4::zeros([h.rows(), g.cols(), kk, jj]);
    for j in 0..jj {
        let phi_j = phi.row(j);
        for k in 0..kk {
            let d = hadamard(&phi_j, &t.row(k))?;
            let block = cascade(h, &d, g)?;
            y.set_slice(k, j, &block)?;
        }
    }
    Ok(y)
}

/// `H diag(d) G`.
pub(crate) fn cascade(
    h: &ComplexMatrix,
    d: &[Complex64],
    g: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let mut hd = h.clone();
    for (m, &dm) in d.iter().enumerate() {
        hd.column_mut(m).iter_mut().for_each(|x| *x *= dm);
    }
    hd.matmul(g)
}
