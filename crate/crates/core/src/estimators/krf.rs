//! Khatri-Rao factorization of the filtered channel estimates.
//!
//! Every column of `Θ̂` (resp. `Ẑ`) is an outer product of two (resp. three)
//! factor columns in disguise, so each column is reshaped into a matrix
//! (resp. third-order tensor) and replaced by its best rank-1 fit. Columns are
//! independent of each other.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{fold3, hosvd_rank1, khatri_rao, rank1_svd, ComplexMatrix};

/// Columns with norm below this fraction of the whole matrix are degenerate.
const DEGENERATE_TOL: f64 = 1e-14;

fn check_columns(x: &ComplexMatrix) -> Result<()> {
    let total = x.frobenius_norm();
    for m in 0..x.cols() {
        let n = x.column(m).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !n.is_finite() || n == 0.0 || n < DEGENERATE_TOL * total {
            return Err(Error::DegenerateColumn { column: m });
        }
    }
    Ok(())
}

fn relabel(err: Error, column: usize) -> Error {
    match err {
        Error::DegenerateColumn { .. } => Error::DegenerateColumn { column },
        other => other,
    }
}

/// Factors recovered from `Θ̂ ≈ G^T ⋄ H`.
#[derive(Debug, Clone, PartialEq)]
pub struct Krf2 {
    /// `M x Q`
    pub g_hat: ComplexMatrix,
    /// `M_r x M`
    pub h_hat: ComplexMatrix,
}

impl Krf2 {
    /// Refined combined channel `Ĝ^T ⋄ Ĥ`.
    pub fn theta(&self) -> ComplexMatrix {
        khatri_rao(&self.g_hat.transpose(), &self.h_hat).expect("factor shapes agree")
    }
}

/// Two-factor KRF of a `Q M_r x M` combined-channel estimate.
///
/// Column `m` is reshaped to the `M_r x Q` matrix `X_m = h_m g_m^T` and its
/// dominant singular triple `σ u v^H` is split evenly:
/// `Ĥ[:,m] = √σ u`, `Ĝ[m,:] = √σ v^*`.
pub fn krf2(theta: &ComplexMatrix, mr: usize, q: usize) -> Result<Krf2> {
    if theta.rows() != mr * q {
        return Err(Error::DimensionMismatch {
            op: "krf2",
            left: vec![theta.rows(), theta.cols()],
            right: vec![mr, q],
        });
    }
    check_columns(theta)?;
    let m = theta.cols();
    let mut g_hat = ComplexMatrix::zeros(m, q);
    let mut h_hat = ComplexMatrix::zeros(mr, m);
    for col in 0..m {
        let x = ComplexMatrix::from_col_major(mr, q, theta.column(col).to_vec())?;
        let s = rank1_svd(&x).map_err(|e| relabel(e, col))?;
        let root = s.sigma.sqrt();
        for (dst, u) in h_hat.column_mut(col).iter_mut().zip(&s.u) {
            *dst = u * root;
        }
        for (qq, v) in s.v.iter().enumerate() {
            g_hat[(col, qq)] = v.conj() * root;
        }
    }
    Ok(Krf2 { g_hat, h_hat })
}

/// Factors recovered from `Ẑ ≈ T ⋄ G^T ⋄ H`.
#[derive(Debug, Clone, PartialEq)]
pub struct Krf3 {
    /// `K x M`
    pub t_hat: ComplexMatrix,
    /// `M x Q`
    pub g_hat: ComplexMatrix,
    /// `M_r x M`
    pub h_hat: ComplexMatrix,
}

impl Krf3 {
    pub fn theta(&self) -> ComplexMatrix {
        khatri_rao(&self.g_hat.transpose(), &self.h_hat).expect("factor shapes agree")
    }

    /// Refined motion-augmented channel `T̂ ⋄ Ĝ^T ⋄ Ĥ`.
    pub fn z(&self) -> ComplexMatrix {
        khatri_rao(&self.t_hat, &self.theta()).expect("factor shapes agree")
    }

    /// Projects `T̂` onto unit-modulus entries.
    ///
    /// Each column is first divided by its mean entry modulus, which is moved
    /// into the matching row of `Ĝ`; the remaining per-entry magnitudes are
    /// then dropped. Without noise the first step already yields modulus 1,
    /// so the product is untouched in that case.
    pub fn project_motion_unit_modulus(&mut self) {
        let (k, m) = self.t_hat.shape();
        for col in 0..m {
            let mean = self.t_hat.column(col).iter().map(|z| z.norm()).sum::<f64>() / k as f64;
            if mean == 0.0 || !mean.is_finite() {
                continue;
            }
            for t in self.t_hat.column_mut(col) {
                let scaled = *t / mean;
                let n = scaled.norm();
                *t = if n > 0.0 {
                    scaled / n
                } else {
                    Complex64::new(1.0, 0.0)
                };
            }
            for q in 0..self.g_hat.cols() {
                self.g_hat[(col, q)] *= mean;
            }
        }
    }
}

/// Principal complex cube root.
fn principal_cbrt(z: Complex64) -> Complex64 {
    Complex64::from_polar(z.norm().cbrt(), z.arg() / 3.0)
}

/// Three-factor KRF of a `K Q M_r x M` motion-augmented estimate via
/// rank-1 truncated HOSVD of each tensorized column.
///
/// With `(u1, u2, u3, core)` from the HOSVD of column `m` and `c` the
/// principal cube root of `core`: `Ĥ[:,m] = c u1`, `Ĝ[m,:] = c u2`,
/// `T̂[:,m] = c u3`.
pub fn krf3(z: &ComplexMatrix, mr: usize, q: usize, k: usize) -> Result<Krf3> {
    if z.rows() != mr * q * k {
        return Err(Error::DimensionMismatch {
            op: "krf3",
            left: vec![z.rows(), z.cols()],
            right: vec![mr, q, k],
        });
    }
    check_columns(z)?;
    let m = z.cols();
    let mut t_hat = ComplexMatrix::zeros(k, m);
    let mut g_hat = ComplexMatrix::zeros(m, q);
    let mut h_hat = ComplexMatrix::zeros(mr, m);
    for col in 0..m {
        let tensor = fold3(z.column(col), mr, q, k)?;
        let r = hosvd_rank1(&tensor).map_err(|e| relabel(e, col))?;
        let c = principal_cbrt(r.core);
        for (dst, u) in h_hat.column_mut(col).iter_mut().zip(&r.u1) {
            *dst = u * c;
        }
        for (qq, u) in r.u2.iter().enumerate() {
            g_hat[(col, qq)] = u * c;
        }
        for (dst, u) in t_hat.column_mut(col).iter_mut().zip(&r.u3) {
            *dst = u * c;
        }
    }
    Ok(Krf3 {
        t_hat,
        g_hat,
        h_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{complex_gaussian, generate_channels, FrisProtocol, SystemConfig};
    use crate::tensor::kron_vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rel(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        a.sub(b).unwrap().frobenius_norm() / b.frobenius_norm()
    }

    /// Scalar `a` with `a · x ≈ y` in the LS sense.
    fn fit(x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let num: Complex64 = x.iter().zip(y).map(|(a, b)| a.conj() * b).sum();
        let den: f64 = x.iter().map(|a| a.norm_sqr()).sum();
        num / den
    }

    fn residual(x: &[Complex64], y: &[Complex64], a: Complex64) -> f64 {
        x.iter()
            .zip(y)
            .map(|(p, q)| (p * a - q).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / y.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn krf2_exact_columns() {
        let cfg = SystemConfig::default();
        let ch = generate_channels(&cfg, &mut ChaCha8Rng::seed_from_u64(1));
        let theta = khatri_rao(&ch.g.transpose(), &ch.h).unwrap();
        let f = krf2(&theta, 10, 4).unwrap();
        assert!(rel(&f.theta(), &theta) < 1e-12);
        for m in 0..12 {
            let a = fit(f.h_hat.column(m), ch.h.column(m));
            assert!(residual(f.h_hat.column(m), ch.h.column(m), a) < 1e-12);
            let (gh, g) = (f.g_hat.row(m), ch.g.row(m));
            let b = fit(&gh, &g);
            assert!(residual(&gh, &g, b) < 1e-12);
            assert!((a * b - 1.0).norm() < 1e-11);
        }
    }

    #[test]
    fn krf2_canonical_rank_one() {
        let r = |x: f64| Complex64::new(x, 0.0);
        let theta = ComplexMatrix::from_column(&[r(1.0), r(0.0), r(0.0), r(0.0)]);
        let f = krf2(&theta, 2, 2).unwrap();
        assert!(f.h_hat[(1, 0)].norm() < 1e-15 && f.h_hat[(0, 0)].norm() > 0.99);
        assert!(f.g_hat[(0, 1)].norm() < 1e-15 && f.g_hat[(0, 0)].norm() > 0.99);
    }

    #[test]
    fn krf2_is_idempotent() {
        let cfg = SystemConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ch = generate_channels(&cfg, &mut rng);
        let mut theta = khatri_rao(&ch.g.transpose(), &ch.h).unwrap();
        for col in [0, 5] {
            for z in theta.column_mut(col) {
                *z += complex_gaussian(&mut rng, 0.1);
            }
        }
        let first = krf2(&theta, 10, 4).unwrap();
        let second = krf2(&first.theta(), 10, 4).unwrap();
        assert!(rel(&second.h_hat, &first.h_hat) < 1e-10);
        assert!(rel(&second.g_hat, &first.g_hat) < 1e-10);
    }

    #[test]
    fn krf2_reconstructs_rank_one_truncation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let theta = ComplexMatrix::from_fn(12, 3, |_, _| complex_gaussian(&mut rng, 1.0));
        let f = krf2(&theta, 4, 3).unwrap();
        let refined = f.theta();
        for m in 0..3 {
            let x = ComplexMatrix::from_col_major(4, 3, theta.column(m).to_vec()).unwrap();
            let best = rank1_svd(&x).unwrap().outer();
            let got = ComplexMatrix::from_col_major(4, 3, refined.column(m).to_vec()).unwrap();
            assert!(rel(&got, &best) < 1e-10);
        }
    }

    #[test]
    fn krf2_denoises() {
        // At 10 dB with perfect motion the refined estimate beats the raw one.
        let cfg = SystemConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let var = cfg.noise_variance(10.0) / (4.0 * 48.0);
        let mut wins = 0;
        for _ in 0..100 {
            let ch = generate_channels(&cfg, &mut rng);
            let truth = khatri_rao(&ch.g.transpose(), &ch.h).unwrap();
            let noisy = ComplexMatrix::from_fn(40, 12, |r, c| {
                truth[(r, c)] + complex_gaussian(&mut rng, var)
            });
            let refined = krf2(&noisy, 10, 4).unwrap().theta();
            if rel(&refined, &truth) < rel(&noisy, &truth) {
                wins += 1;
            }
        }
        assert!(wins >= 95, "{wins}");
    }

    #[test]
    fn krf3_exact_recovery() {
        let cfg = SystemConfig {
            sigma_pos: 0.1,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ch = generate_channels(&cfg, &mut rng);
        let proto = FrisProtocol::generate(&cfg, &mut rng).unwrap();
        let t = proto.t_real();
        let z = khatri_rao(t, &khatri_rao(&ch.g.transpose(), &ch.h).unwrap()).unwrap();
        let f = krf3(&z, 10, 4, 4).unwrap();
        let zr = f.z();
        for m in 0..12 {
            let d: f64 = zr
                .column(m)
                .iter()
                .zip(z.column(m))
                .map(|(a, b)| (a - b).norm_sqr())
                .sum();
            let n: f64 = z.column(m).iter().map(|a| a.norm_sqr()).sum();
            assert!(d.sqrt() <= 1e-11 * n.sqrt());

            let a = fit(f.h_hat.column(m), ch.h.column(m));
            let (gh, g) = (f.g_hat.row(m), ch.g.row(m));
            let b = fit(&gh, &g);
            let c = fit(f.t_hat.column(m), t.column(m));
            assert!(residual(f.h_hat.column(m), ch.h.column(m), a) < 1e-11);
            assert!(residual(&gh, &g, b) < 1e-11);
            assert!(residual(f.t_hat.column(m), t.column(m), c) < 1e-11);
            assert!((a * b * c - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn krf3_column_is_core_times_kron() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let z = ComplexMatrix::from_fn(24, 2, |_, _| complex_gaussian(&mut rng, 1.0));
        let f = krf3(&z, 3, 4, 2).unwrap();
        let zr = f.z();
        for m in 0..2 {
            let r = hosvd_rank1(&fold3(z.column(m), 3, 4, 2).unwrap()).unwrap();
            let expect: Vec<Complex64> = kron_vec(&r.u3, &kron_vec(&r.u2, &r.u1))
                .into_iter()
                .map(|x| x * r.core)
                .collect();
            for (a, b) in zr.column(m).iter().zip(&expect) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn motion_projection() {
        let cfg = SystemConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ch = generate_channels(&cfg, &mut rng);
        let proto = FrisProtocol::generate(&cfg, &mut rng).unwrap();
        let z = khatri_rao(
            proto.t_real(),
            &khatri_rao(&ch.g.transpose(), &ch.h).unwrap(),
        )
        .unwrap();
        let mut f = krf3(&z, 10, 4, 4).unwrap();
        // Plain extraction leaves |T̂| = |c|/√K, not 1.
        assert!(f.t_hat.data().iter().any(|t| (t.norm() - 1.0).abs() > 1e-3));
        let before = f.z();
        f.project_motion_unit_modulus();
        assert!(f
            .t_hat
            .data()
            .iter()
            .all(|t| (t.norm() - 1.0).abs() < 1e-10));
        assert!(rel(&f.z(), &before) < 1e-10);
    }

    #[test]
    fn cube_root_branch() {
        let z = Complex64::from_polar(8.0, 2.5);
        let c = principal_cbrt(z);
        assert!((c * c * c - z).norm() < 1e-12);
        assert!((c.norm() - 2.0).abs() < 1e-14);
        assert!((c.arg() - 2.5 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_columns_are_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut theta = ComplexMatrix::from_fn(8, 3, |_, _| complex_gaussian(&mut rng, 1.0));
        theta
            .column_mut(2)
            .iter_mut()
            .for_each(|z| *z = Complex64::new(0.0, 0.0));
        assert!(matches!(
            krf2(&theta, 4, 2),
            Err(Error::DegenerateColumn { column: 2 })
        ));
        assert!(matches!(
            krf3(&theta, 2, 2, 2),
            Err(Error::DegenerateColumn { column: 2 })
        ));
        assert!(krf2(&theta, 3, 2).is_err());
    }
}
