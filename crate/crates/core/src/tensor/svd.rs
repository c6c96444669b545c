//! Dominant singular triple of a small dense complex matrix.
//!
//! Uses one-sided (Hestenes) Jacobi rotations on whichever of `X` or `X^H`
//! has fewer columns. The matrices handled here are at most a few hundred
//! entries, so a full orthogonalization is cheap and avoids the slow
//! convergence of power iteration when the two leading singular values are
//! close.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Off-diagonal tolerance, relative to the geometric mean of column norms.
const ORTHO_TOL: f64 = 1e-14;

/// `X ≈ sigma * u * v^H`, with unit-norm `u`, `v` and `sigma >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularTriple {
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub sigma: f64,
}

impl SingularTriple {
    /// `sigma * u * v^H`.
    pub fn outer(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.u.len(), self.v.len(), |r, c| {
            self.u[r] * self.v[c].conj() * self.sigma
        })
    }
}

/// Best rank-1 approximation of `x`.
///
/// The phase of the pair is fixed so that the largest-modulus entry of `u`
/// is real and positive.
pub fn rank1_svd(x: &ComplexMatrix) -> Result<SingularTriple> {
    let norm = x.frobenius_norm();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::DegenerateColumn { column: 0 });
    }
    let max_sweeps = 10 * x.rows().max(x.cols());
    let transposed = x.cols() > x.rows();
    let a = if transposed { x.adjoint() } else { x.clone() };
    let (av, v) = jacobi_svd(a, max_sweeps)?;

    let (best, sigma) = (0..av.cols()).map(|c| (c, norm_of(av.column(c)))).fold(
        (0, f64::NEG_INFINITY),
        |acc, cur| if cur.1 > acc.1 { cur } else { acc },
    );
    let left: Vec<Complex64> = av.column(best).iter().map(|z| z / sigma).collect();
    let right = v.column(best).to_vec();
    let (mut u, mut v) = if transposed {
        (right, left)
    } else {
        (left, right)
    };

    let pivot = u.iter().copied().fold(Complex64::new(0.0, 0.0), |p, z| {
        if z.norm() > p.norm() {
            z
        } else {
            p
        }
    });
    let phase = (pivot / pivot.norm()).conj();
    u.iter_mut().for_each(|z| *z *= phase);
    v.iter_mut().for_each(|z| *z *= phase);
    Ok(SingularTriple { u, v, sigma })
}

fn norm_of(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Returns `(A V, V)` with mutually orthogonal columns of `A V` and unitary `V`.
fn jacobi_svd(mut a: ComplexMatrix, max_sweeps: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.cols();
    let mut v = ComplexMatrix::identity(n);
    if n < 2 {
        return Ok((a, v));
    }
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let (ai, aj) = (a.column(i), a.column(j));
                let alpha: f64 = ai.iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = aj.iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = ai.iter().zip(aj).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= ORTHO_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotating a_j by conj(gamma)/|gamma| makes <a_i, a_j> real, after
                // which the real Jacobi rotation zeroes it.
                let w = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, i, j, w, c, s);
                rotate(&mut v, i, j, w, c, s);
            }
        }
        if !rotated {
            return Ok((a, v));
        }
    }
    Err(Error::NoConvergence {
        iterations: max_sweeps,
    })
}

fn rotate(m: &mut ComplexMatrix, i: usize, j: usize, w: Complex64, c: f64, s: f64) {
    let rows = m.rows();
    for r in 0..rows {
        let x = m[(r, i)];
        let y = m[(r, j)] * w;
        m[(r, i)] = x * c - y * s;
        m[(r, j)] = x * s + y * c;
    }
}
