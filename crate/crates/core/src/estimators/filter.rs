//! Linear filters: pilot matched filtering and the closed-form LS estimates
//! of the combined channel `Θ` and the motion-augmented channel `Z`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ReceivedSignal;
use crate::tensor::{khatri_rao, unfold_y1, unfold_y2, ComplexMatrix, ComplexTensor4};

const ORTHOGONALITY_TOL: f64 = 1e-12;

/// `Y_{j,k} = (1/T_s) Ỹ_{j,k} X_p^H`, giving an `M_r x Q x K x J` tensor.
///
/// Fails if `X_p X_p^H` is not `T_s I_Q` to within 1e-12 relative, since the
/// filter would then leak users into each other.
pub fn matched_filter(sig: &ReceivedSignal, xp: &ComplexMatrix) -> Result<ComplexTensor4> {
    let [mr, ts, kk, jj] = sig.y_raw.dims();
    let (q, ts_p) = xp.shape();
    if ts_p != ts {
        return Err(Error::DimensionMismatch {
            op: "matched_filter",
            left: sig.y_raw.dims().to_vec(),
            right: vec![q, ts_p],
        });
    }
    let scale = Complex64::new(ts as f64, 0.0);
    let target = ComplexMatrix::identity(q).scale(scale);
    let deviation =
        xp.matmul(&xp.adjoint())?.sub(&target)?.frobenius_norm() / target.frobenius_norm();
    if deviation > ORTHOGONALITY_TOL {
        return Err(Error::NonOrthogonalPilots { deviation });
    }

    let filter = xp.adjoint().scale(Complex64::new(1.0 / ts as f64, 0.0));
    let mut y = ComplexTensor4::zeros([mr, q, kk, jj]);
    for j in 0..jj {
        for k in 0..kk {
            y.set_slice(k, j, &sig.y_raw.slice(k, j).matmul(&filter)?)?;
        }
    }
    Ok(y)
}

fn check_filter_dims(
    y: &ComplexTensor4,
    phi: &ComplexMatrix,
    t: Option<&ComplexMatrix>,
) -> Result<()> {
    let [_, _, k, j] = y.dims();
    let t_ok = t.is_none_or(|t| t.rows() == k && t.cols() == phi.cols());
    if phi.rows() != j || !t_ok {
        let mut right = vec![phi.rows(), phi.cols()];
        if let Some(t) = t {
            right.extend([t.rows(), t.cols()]);
        }
        return Err(Error::DimensionMismatch {
            op: "ls filter",
            left: y.dims().to_vec(),
            right,
        });
    }
    Ok(())
}

/// `Θ̂ = (1/JK) Y1 (Φ ⋄ T)^*`, exact for semi-unitary `Φ` and unit-modulus
/// `T` when `T` is the motion the channel actually saw.
pub fn estimate_theta_ls(
    y: &ComplexTensor4,
    phi: &ComplexMatrix,
    t_assumed: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    check_filter_dims(y, phi, Some(t_assumed))?;
    let [_, _, k, j] = y.dims();
    let filter = khatri_rao(phi, t_assumed)?.conj();
    Ok(unfold_y1(y)
        .matmul(&filter)?
        .scale(Complex64::new(1.0 / (j * k) as f64, 0.0)))
}

/// `Ẑ = (1/J) Y2 Φ^*`. Needs no knowledge of the motion matrix.
pub fn estimate_z_ls(y: &ComplexTensor4, phi: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_filter_dims(y, phi, None)?;
    let j = y.dims()[3];
    Ok(unfold_y2(y)
        .matmul(&phi.conj())?
        .scale(Complex64::new(1.0 / j as f64, 0.0)))
}
