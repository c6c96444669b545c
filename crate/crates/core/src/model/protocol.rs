//! Training-phase configuration of the surface: electronic phase shifts,
//! pilots, preset positions and the two-time-scale motion schedule.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;

use super::config::lattice_side;
use super::SystemConfig;
use crate::error::{Error, Result};
use crate::tensor::ComplexMatrix;

/// First `cols` columns of the `n`-point DFT matrix, `e^{-i 2π r c / n}`.
fn dft_block(rows: usize, cols: usize, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |r, c| {
        // Reduce the exponent mod n so large products stay exact.
        let e = (r * c) % n;
        Complex64::from_polar(1.0, -2.0 * PI * e as f64 / n as f64)
    })
}

/// `J x M` phase-shift matrix: the first `M` columns of the `J`-point DFT,
/// so that `Φ^H Φ = J I_M`.
pub fn build_phase_matrix(j: usize, m: usize) -> Result<ComplexMatrix> {
    if j < m {
        return Err(Error::config(format!(
            "phase matrix needs J >= M, got J = {j}, M = {m}"
        )));
    }
    Ok(dft_block(j, m, j))
}

/// `Q x T_s` pilot matrix: the first `Q` rows of the `T_s`-point DFT, so that
/// `X_p X_p^H = T_s I_Q`.
pub fn build_pilot_matrix(q: usize, t_s: usize) -> Result<ComplexMatrix> {
    if t_s < q {
        return Err(Error::config(format!(
            "pilot matrix needs T_s >= Q, got T_s = {t_s}, Q = {q}"
        )));
    }
    Ok(dft_block(q, t_s, t_s))
}

/// Selectable radiating positions of every element.
///
/// Tiles of side `area_side / sqrt(M)` are laid out row by row on a grid with
/// `ceil(sqrt(M))` columns, starting at the surface corner, which is also the
/// reference point for `‖p‖`. Each tile holds a cell-centred
/// `sqrt(N) x sqrt(N)` lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetGrid {
    pub tile_side: f64,
    /// Lower-left corner of each tile.
    pub tile_origin: Vec<[f64; 2]>,
    /// `points[m]` holds the `N` positions of element `m`.
    pub points: Vec<Vec<[f64; 2]>>,
}

pub fn build_preset_grid(cfg: &SystemConfig) -> Result<PresetGrid> {
    let m = cfg.elements;
    let n = cfg.preset_positions;
    let side = lattice_side(n)
        .filter(|&s| s > 0)
        .ok_or_else(|| Error::config(format!("N = {n} is not a positive perfect square")))?;
    let tile_side = cfg.area_side / (m as f64).sqrt();
    let tiles_per_row = (m as f64).sqrt().ceil() as usize;
    let spacing = tile_side / side as f64;

    let tile_origin: Vec<[f64; 2]> = (0..m)
        .map(|e| {
            [
                (e % tiles_per_row) as f64 * tile_side,
                (e / tiles_per_row) as f64 * tile_side,
            ]
        })
        .collect();
    let points = tile_origin
        .iter()
        .map(|&[x0, y0]| {
            (0..n)
                .map(|i| {
                    let (a, b) = (i % side, i / side);
                    [
                        x0 + (a as f64 + 0.5) * spacing,
                        y0 + (b as f64 + 0.5) * spacing,
                    ]
                })
                .collect()
        })
        .collect();
    Ok(PresetGrid {
        tile_side,
        tile_origin,
        points,
    })
}

/// Motion-induced phase `e^{-i 2π d / λ}` for radial distance `d`.
pub fn motion_phase(distance: f64, wavelength: f64) -> Complex64 {
    Complex64::from_polar(1.0, -2.0 * PI * distance / wavelength)
}

/// Commanded positions for the `K` blocks of a sub-frame; the same schedule
/// repeats in every sub-frame.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionSchedule {
    /// Commanded position of element `m` in block `k`, at index `k + K*m`.
    pub positions: Vec<[f64; 2]>,
    /// `K x M` commanded motion matrix.
    pub t_cmd: ComplexMatrix,
}

impl MotionSchedule {
    pub fn position(&self, k: usize, m: usize) -> [f64; 2] {
        self.positions[k + self.t_cmd.rows() * m]
    }

    pub fn distance(&self, k: usize, m: usize) -> f64 {
        let [x, y] = self.position(k, m);
        x.hypot(y)
    }
}

/// Draws `K` distinct preset points per element, uniformly without replacement.
pub fn draw_motion_schedule<R: Rng + ?Sized>(
    grid: &PresetGrid,
    cfg: &SystemConfig,
    rng: &mut R,
) -> Result<MotionSchedule> {
    let k = cfg.blocks;
    let n = cfg.preset_positions;
    if n < k {
        return Err(Error::config(format!(
            "motion schedule needs N >= K, got N = {n}, K = {k}"
        )));
    }
    let mut positions = Vec::with_capacity(k * grid.points.len());
    for tile in &grid.points {
        for idx in index::sample(rng, tile.len(), k).into_iter() {
            positions.push(tile[idx]);
        }
    }
    let t_cmd = ComplexMatrix::from_fn(k, grid.points.len(), |kk, m| {
        let [x, y] = positions[kk + k * m];
        motion_phase(x.hypot(y), cfg.wavelength)
    });
    Ok(MotionSchedule { positions, t_cmd })
}

/// Realized motion: the radial distance of every commanded position is
/// offset by `δ ~ N(0, (sigma_pos λ)²)`, i.i.d. over blocks and elements.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizedMotion {
    /// `K x M` realized radial distances (column-major, like `t_real`).
    pub distances: Vec<f64>,
    pub t_real: ComplexMatrix,
}

/// One normal draw is consumed per entry even when `sigma_pos = 0`, so the
/// random stream layout does not depend on the error level.
pub fn perturb_positions<R: Rng + ?Sized>(
    schedule: &MotionSchedule,
    sigma_pos: f64,
    wavelength: f64,
    rng: &mut R,
) -> RealizedMotion {
    let (k, m) = schedule.t_cmd.shape();
    let std = sigma_pos * wavelength;
    let mut distances = Vec::with_capacity(k * m);
    for mm in 0..m {
        for kk in 0..k {
            let z: f64 = rng.sample(StandardNormal);
            distances.push(schedule.distance(kk, mm) + std * z);
        }
    }
    let t_real = ComplexMatrix::from_fn(k, m, |kk, mm| {
        motion_phase(distances[kk + k * mm], wavelength)
    });
    RealizedMotion { distances, t_real }
}

/// Everything the surface controller configures during training.
#[derive(Debug, Clone, PartialEq)]
pub struct FrisProtocol {
    /// `J x M` phase-shift matrix.
    pub phi: ComplexMatrix,
    /// `Q x T_s` pilot matrix.
    pub xp: ComplexMatrix,
    pub grid: PresetGrid,
    pub schedule: MotionSchedule,
    pub realized: RealizedMotion,
}

impl FrisProtocol {
    /// Draws a fresh motion schedule and its realization for `cfg`.
    pub fn generate<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> Result<Self> {
        let phi = build_phase_matrix(cfg.subframes, cfg.elements)?;
        let xp = build_pilot_matrix(cfg.users, cfg.symbols_per_block)?;
        let grid = build_preset_grid(cfg)?;
        let schedule = draw_motion_schedule(&grid, cfg, rng)?;
        let realized = perturb_positions(&schedule, cfg.sigma_pos, cfg.wavelength, rng);
        Ok(Self {
            phi,
            xp,
            grid,
            schedule,
            realized,
        })
    }

    pub fn t_cmd(&self) -> &ComplexMatrix {
        &self.schedule.t_cmd
    }

    pub fn t_real(&self) -> &ComplexMatrix {
        &self.realized.t_real
    }
}
