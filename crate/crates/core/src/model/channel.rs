use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{FrisProtocol, SystemConfig};
use crate::error::Result;
use crate::tensor::{cascade, hadamard, ComplexMatrix, ComplexTensor4};

/// Circularly symmetric complex Gaussian sample with the given variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Ground-truth channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// `M x Q`, users to surface.
    pub g: ComplexMatrix,
    /// `M_r x M`, surface to base station.
    pub h: ComplexMatrix,
}

/// i.i.d. Rayleigh `CN(0, 1)` draws for `G` and then `H`, column-major.
pub fn generate_channels<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> ChannelSet {
    let g = ComplexMatrix::from_fn(cfg.elements, cfg.users, |_, _| complex_gaussian(rng, 1.0));
    let h = ComplexMatrix::from_fn(cfg.bs_antennas, cfg.elements, |_, _| {
        complex_gaussian(rng, 1.0)
    });
    ChannelSet { g, h }
}

/// Pre-filter received blocks `Ỹ_{j,k}`, stored as an `M_r x T_s x K x J` tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedSignal {
    pub y_raw: ComplexTensor4,
    pub noise_var: f64,
}

/// `Ỹ_{j,k} = H diag(φ_j ⊙ t_k) G X_p + Ṽ_{j,k}` with the realized motion
/// matrix and `Ṽ` entries `CN(0, σ_v²)`; `snr_db = +inf` disables noise.
pub fn synthesize_received<R: Rng + ?Sized>(
    ch: &ChannelSet,
    proto: &FrisProtocol,
    snr_db: f64,
    rng: &mut R,
) -> Result<ReceivedSignal> {
    synthesize_blocks(ch, &proto.phi, proto.t_real(), &proto.xp, snr_db, rng)
}

/// Block synthesis for arbitrary `J x M` phases and `K x M` motion.
///
/// The noise variance is `σ_v² = M Q 10^(-snr_db/10)`, i.e. the SNR is the
/// average noiseless per-entry power of unit-variance channels over `σ_v²`.
/// Noise is drawn block by block, `j` outer and `k` inner.
pub fn synthesize_blocks<R: Rng + ?Sized>(
    ch: &ChannelSet,
    phi: &ComplexMatrix,
    t: &ComplexMatrix,
    xp: &ComplexMatrix,
    snr_db: f64,
    rng: &mut R,
) -> Result<ReceivedSignal> {
    let (mr, m) = ch.h.shape();
    let q = ch.g.cols();
    let noise_var = if snr_db == f64::INFINITY {
        0.0
    } else {
        (m * q) as f64 * 10f64.powf(-snr_db / 10.0)
    };
    let (kk, jj, ts) = (t.rows(), phi.rows(), xp.cols());

    let mut y_raw = ComplexTensor4::zeros([mr, ts, kk, jj]);
    for j in 0..jj {
        let phi_j = phi.row(j);
        for k in 0..kk {
            let d = hadamard(&phi_j, &t.row(k))?;
            let mut block = cascade(&ch.h, &d, &ch.g)?.matmul(xp)?;
            if noise_var > 0.0 {
                for c in 0..ts {
                    block
                        .column_mut(c)
                        .iter_mut()
                        .for_each(|x| *x += complex_gaussian(rng, noise_var));
                }
            }
            y_raw.set_slice(k, j, &block)?;
        }
    }
    Ok(ReceivedSignal { y_raw, noise_var })
}
