use num_complex::Complex64;

use super::{rank1_svd, ComplexTensor3};
use crate::error::{Error, Result};

/// Rank-1 truncated HOSVD of a third-order tensor: `core * (u1 ∘ u2 ∘ u3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank1Triple {
    pub u1: Vec<Complex64>,
    pub u2: Vec<Complex64>,
    pub u3: Vec<Complex64>,
    pub core: Complex64,
}

impl Rank1Triple {
    pub fn reconstruct(&self) -> ComplexTensor3 {
        ComplexTensor3::outer(&self.u1, &self.u2, &self.u3).scale(self.core)
    }
}

/// Dominant mode-n singular vectors plus the scalar core
/// `Z ×1 u1^H ×2 u2^H ×3 u3^H`.
///
/// The core is left complex; splitting it across the three factors is the
/// caller's business since the complex cube root has three branches.
pub fn hosvd_rank1(z: &ComplexTensor3) -> Result<Rank1Triple> {
    let norm = z.norm();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::DegenerateColumn { column: 0 });
    }
    let u1 = rank1_svd(&z.unfold(1))?.u;
    let u2 = rank1_svd(&z.unfold(2))?.u;
    let u3 = rank1_svd(&z.unfold(3))?.u;
    let mut core = Complex64::new(0.0, 0.0);
    for (k, c) in u3.iter().enumerate() {
        for (j, b) in u2.iter().enumerate() {
            let w = (b * c).conj();
            for (i, a) in u1.iter().enumerate() {
                core += z.get(i, j, k) * a.conj() * w;
            }
        }
    }
    Ok(Rank1Triple { u1, u2, u3, core })
}
