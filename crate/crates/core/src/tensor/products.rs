//! Structured products: Khatri-Rao, Kronecker (vectors) and Hadamard.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Column-wise Kronecker product `A ⋄ B`.
///
/// Entry `(i*K + k, m)` of the result is `A[i,m] * B[k,m]`, so column `m`
/// equals `kron_vec(A[:,m], B[:,m])`.
pub fn khatri_rao(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            op: "khatri_rao",
            left: vec![a.rows(), a.cols()],
            right: vec![b.rows(), b.cols()],
        });
    }
    let mut data = Vec::with_capacity(a.rows() * b.rows() * a.cols());
    for m in 0..a.cols() {
        data.extend(kron_vec(a.column(m), b.column(m)));
    }
    ComplexMatrix::from_col_major(a.rows() * b.rows(), a.cols(), data)
}

/// Kronecker product of two vectors, `result[i*q + j] = a[i] * b[j]`.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

pub fn hadamard(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            op: "hadamard",
            left: vec![a.len()],
            right: vec![b.len()],
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x * y).collect())
}
