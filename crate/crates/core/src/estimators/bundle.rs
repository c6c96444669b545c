use num_complex::Complex64;

use super::{Krf2, Krf3};
use crate::error::{Error, Result};
use crate::model::ChannelSet;
use crate::tensor::{khatri_rao, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Unrefined `Θ̂` from the LS filter.
    LsTheta,
    /// `Θ̂` refined by two-factor KRF.
    Krf2,
    /// Unrefined `Ẑ` from the LS filter.
    LsZ,
    /// Joint motion/channel estimate by three-factor KRF of `Ẑ`.
    Krf3Joint,
}

/// Outputs of one estimation pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateBundle {
    pub method: Method,
    /// LS filter output `Θ̂` (`Q M_r x M`), when the pipeline computes it.
    pub theta_hat: Option<ComplexMatrix>,
    /// LS filter output `Ẑ` (`K Q M_r x M`), when the pipeline computes it.
    pub z_hat: Option<ComplexMatrix>,
    pub g_hat: Option<ComplexMatrix>,
    pub h_hat: Option<ComplexMatrix>,
    pub t_hat: Option<ComplexMatrix>,
}

impl EstimateBundle {
    pub fn ls_theta(theta_hat: ComplexMatrix) -> Self {
        Self {
            method: Method::LsTheta,
            theta_hat: Some(theta_hat),
            z_hat: None,
            g_hat: None,
            h_hat: None,
            t_hat: None,
        }
    }

    pub fn krf2(theta_hat: ComplexMatrix, f: Krf2) -> Self {
        Self {
            method: Method::Krf2,
            theta_hat: Some(theta_hat),
            z_hat: None,
            g_hat: Some(f.g_hat),
            h_hat: Some(f.h_hat),
            t_hat: None,
        }
    }

    pub fn ls_z(z_hat: ComplexMatrix) -> Self {
        Self {
            method: Method::LsZ,
            theta_hat: None,
            z_hat: Some(z_hat),
            g_hat: None,
            h_hat: None,
            t_hat: None,
        }
    }

    pub fn krf3(z_hat: ComplexMatrix, f: Krf3) -> Self {
        Self {
            method: Method::Krf3Joint,
            theta_hat: None,
            z_hat: Some(z_hat),
            g_hat: Some(f.g_hat),
            h_hat: Some(f.h_hat),
            t_hat: Some(f.t_hat),
        }
    }

    /// The pipeline's estimate of `Θ`: the filter output for LS-Θ, `Ĝ^T ⋄ Ĥ`
    /// for the factorizations, nothing for LS-Z.
    pub fn theta_estimate(&self) -> Option<ComplexMatrix> {
        match self.method {
            Method::LsTheta => self.theta_hat.clone(),
            Method::Krf2 | Method::Krf3Joint => {
                let (g, h) = (self.g_hat.as_ref()?, self.h_hat.as_ref()?);
                khatri_rao(&g.transpose(), h).ok()
            }
            Method::LsZ => None,
        }
    }

    /// The pipeline's estimate of `Z`: the filter output for LS-Z,
    /// `T̂ ⋄ Ĝ^T ⋄ Ĥ` for the joint method.
    pub fn z_estimate(&self) -> Option<ComplexMatrix> {
        match self.method {
            Method::LsZ => self.z_hat.clone(),
            Method::Krf3Joint => {
                let t = self.t_hat.as_ref()?;
                khatri_rao(t, &self.theta_estimate()?).ok()
            }
            Method::LsTheta | Method::Krf2 => None,
        }
    }
}

/// Simulation ground truth used for scoring.
#[derive(Debug, Clone, Copy)]
pub struct GroundTruth<'a> {
    pub channels: &'a ChannelSet,
    /// Motion matrix the channel actually experienced.
    pub t_real: &'a ComplexMatrix,
}

impl GroundTruth<'_> {
    pub fn theta(&self) -> ComplexMatrix {
        khatri_rao(&self.channels.g.transpose(), &self.channels.h).expect("channel shapes agree")
    }

    pub fn z(&self) -> ComplexMatrix {
        khatri_rao(self.t_real, &self.theta()).expect("channel shapes agree")
    }
}

/// Per-column scalars applied by [`resolve_scaling`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScalingReport {
    /// Factor applied to column `m` of `Ĥ`.
    pub alpha: Vec<Complex64>,
    /// Factor applied to row `m` of `Ĝ`.
    pub beta: Vec<Complex64>,
    /// Columns left untouched because a truth or estimate vector was zero.
    pub skipped: Vec<usize>,
}

/// `argmin_a ‖a x − y‖`, or `None` when either vector is zero.
fn ls_scalar(x: &[Complex64], y: &[Complex64]) -> Option<Complex64> {
    let den: f64 = x.iter().map(|a| a.norm_sqr()).sum();
    let truth: f64 = y.iter().map(|a| a.norm_sqr()).sum();
    if den == 0.0 || truth == 0.0 {
        return None;
    }
    let num: Complex64 = x.iter().zip(y).map(|(a, b)| a.conj() * b).sum();
    (num != Complex64::new(0.0, 0.0)).then(|| num / den)
}

/// Removes the per-column scaling ambiguity of the factor estimates by LS
/// fitting against the ground truth.
///
/// `Ĥ[:,m]` is scaled by `α_m`. For KRF-2 row `m` of `Ĝ` is scaled by
/// `1/α_m`; for the joint method it is fitted with its own `β_m` and
/// `T̂[:,m]` absorbs `1/(α_m β_m)`. Khatri-Rao products of the factors are
/// therefore preserved. Bundles without factors are returned unchanged.
pub fn resolve_scaling(
    bundle: &EstimateBundle,
    truth: &GroundTruth<'_>,
) -> (EstimateBundle, ScalingReport) {
    let mut out = bundle.clone();
    let mut report = ScalingReport::default();
    let (Some(g_hat), Some(h_hat)) = (out.g_hat.as_mut(), out.h_hat.as_mut()) else {
        return (out, report);
    };
    let joint = bundle.method == Method::Krf3Joint;
    let one = Complex64::new(1.0, 0.0);

    for m in 0..h_hat.cols() {
        let Some(alpha) = ls_scalar(h_hat.column(m), truth.channels.h.column(m)) else {
            report.skipped.push(m);
            report.alpha.push(one);
            report.beta.push(one);
            continue;
        };
        let g_row: Vec<Complex64> = g_hat.row(m).iter().map(|g| g / alpha).collect();
        let beta = if joint {
            match ls_scalar(&g_row, &truth.channels.g.row(m)) {
                Some(b) => b,
                None => {
                    report.skipped.push(m);
                    report.alpha.push(one);
                    report.beta.push(one);
                    continue;
                }
            }
        } else {
            one
        };
        h_hat.column_mut(m).iter_mut().for_each(|h| *h *= alpha);
        for (q, g) in g_row.into_iter().enumerate() {
            g_hat[(m, q)] = g * beta;
        }
        if joint {
            if let Some(t_hat) = out.t_hat.as_mut() {
                t_hat.column_mut(m).iter_mut().for_each(|t| *t /= beta);
            }
        }
        report.alpha.push(alpha);
        report.beta.push(beta / alpha);
    }
    (out, report)
}

/// `‖estimate − truth‖²_F / ‖truth‖²_F`.
pub fn nmse(estimate: &ComplexMatrix, truth: &ComplexMatrix) -> Result<f64> {
    let den = truth.frobenius_norm_sqr();
    if den == 0.0 {
        return Err(Error::ZeroTruth);
    }
    Ok(estimate.sub(truth)?.frobenius_norm_sqr() / den)
}

/// Linear-scale NMSEs of one pipeline; `None` where not applicable.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NmseReport {
    pub theta: Option<f64>,
    pub z: Option<f64>,
    pub g: Option<f64>,
    pub h: Option<f64>,
    pub t: Option<f64>,
}

/// Scores a bundle. Factor NMSEs (and `Θ` for the joint method, which is a
/// product of two of its three factors) are computed after
/// [`resolve_scaling`]; the `Θ`/`Z` products of the other pipelines are
/// unique and scored directly.
pub fn evaluate(bundle: &EstimateBundle, truth: &GroundTruth<'_>) -> Result<NmseReport> {
    let (resolved, _) = resolve_scaling(bundle, truth);
    let theta_truth = truth.theta();
    let score = |est: Option<ComplexMatrix>, reference: &ComplexMatrix| -> Result<Option<f64>> {
        est.map(|e| nmse(&e, reference)).transpose()
    };
    Ok(NmseReport {
        theta: score(resolved.theta_estimate(), &theta_truth)?,
        z: score(resolved.z_estimate(), &truth.z())?,
        g: score(resolved.g_hat.clone(), &truth.channels.g)?,
        h: score(resolved.h_hat.clone(), &truth.channels.h)?,
        t: score(resolved.t_hat.clone(), truth.t_real)?,
    })
}
