use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EstimatorKind, ExperimentConfig, SweepAxis};
use crate::error::{Error, Result};
use crate::estimators::{
    estimate_theta_ls, estimate_z_ls, evaluate, krf2, krf3, matched_filter, EstimateBundle,
    GroundTruth, NmseReport,
};
use crate::model::{
    build_phase_matrix, build_pilot_matrix, generate_channels, synthesize_blocks,
    synthesize_received, ChannelSet, FrisProtocol, SystemConfig,
};
use crate::tensor::ComplexMatrix;
use crate::Complex64;

/// Attempts per trial before a degenerate draw becomes a hard error.
pub const MAX_ATTEMPTS: u32 = 16;

/// One CSV line: the NMSEs of one estimator on one trial. Fields that do not
/// apply to the estimator are `None` and serialize as empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub estimator: EstimatorKind,
    pub sweep_axis: SweepAxis,
    pub sweep_value: f64,
    pub trial: usize,
    pub nmse_theta: Option<f64>,
    pub nmse_z: Option<f64>,
    #[serde(rename = "nmse_G")]
    pub nmse_g: Option<f64>,
    #[serde(rename = "nmse_H")]
    pub nmse_h: Option<f64>,
    #[serde(rename = "nmse_T")]
    pub nmse_t: Option<f64>,
    /// Seed of the random stream that produced the trial.
    pub seed: u64,
}

impl ResultRow {
    /// The figure of merit plotted for this estimator: `Z` for the joint
    /// method, `Θ` otherwise.
    pub fn primary_nmse(&self) -> Option<f64> {
        match self.estimator {
            EstimatorKind::JointTgh => self.nmse_z,
            _ => self.nmse_theta,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    /// Sorted by estimator, sweep point, trial.
    pub rows: Vec<ResultRow>,
    /// Number of trials redrawn after a degenerate column.
    pub resamples: usize,
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the random stream for one trial attempt.
pub fn trial_seed(seed: u64, sweep_index: usize, trial: usize, attempt: u32) -> u64 {
    [sweep_index as u64, trial as u64, attempt as u64]
        .into_iter()
        .fold(splitmix64(seed), |h, x| splitmix64(h ^ x))
}

/// Fixed-element surface with the same training budget: `J K` DFT phase
/// configurations, no motion (`T` is a single row of ones), estimated by the
/// LS filter followed by two-factor KRF.
pub fn static_ris_baseline<R: Rng + ?Sized>(
    sys: &SystemConfig,
    channels: &ChannelSet,
    rng: &mut R,
) -> Result<NmseReport> {
    let configs = sys.subframes * sys.blocks;
    let phi = build_phase_matrix(configs, sys.elements)?;
    let t = ComplexMatrix::from_fn(1, sys.elements, |_, _| Complex64::new(1.0, 0.0));
    let xp = build_pilot_matrix(sys.users, sys.symbols_per_block)?;
    let sig = synthesize_blocks(channels, &phi, &t, &xp, sys.snr_db, rng)?;
    let y = matched_filter(&sig, &xp)?;
    let theta_hat = estimate_theta_ls(&y, &phi, &t)?;
    let f = krf2(&theta_hat, sys.bs_antennas, sys.users)?;
    let truth = GroundTruth {
        channels,
        t_real: &t,
    };
    evaluate(&EstimateBundle::krf2(theta_hat, f), &truth)
}

/// Runs the selected estimators on one freshly drawn scenario.
///
/// All estimators share the channels, protocol and noisy signal drawn from
/// `seed`. The static-RIS baseline reuses the channels but draws its own
/// noise afterwards, so adding it never perturbs the other pipelines.
pub fn simulate_trial(
    sys: &SystemConfig,
    estimators: &[EstimatorKind],
    seed: u64,
) -> Result<Vec<(EstimatorKind, NmseReport)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ch = generate_channels(sys, &mut rng);
    let proto = FrisProtocol::generate(sys, &mut rng)?;
    let sig = synthesize_received(&ch, &proto, sys.snr_db, &mut rng)?;
    let y = matched_filter(&sig, &proto.xp)?;
    let truth = GroundTruth {
        channels: &ch,
        t_real: proto.t_real(),
    };
    let (mr, q) = (sys.bs_antennas, sys.users);

    let mut selected = estimators.to_vec();
    selected.sort();
    let mut out = Vec::with_capacity(selected.len());
    for kind in selected {
        let bundle = match kind {
            EstimatorKind::LsIdealT | EstimatorKind::LsMismatchedT => {
                let t = if kind == EstimatorKind::LsIdealT {
                    proto.t_real()
                } else {
                    proto.t_cmd()
                };
                EstimateBundle::ls_theta(estimate_theta_ls(&y, &proto.phi, t)?)
            }
            EstimatorKind::KrfIdealT | EstimatorKind::KrfMismatchedT => {
                let t = if kind == EstimatorKind::KrfIdealT {
                    proto.t_real()
                } else {
                    proto.t_cmd()
                };
                let theta_hat = estimate_theta_ls(&y, &proto.phi, t)?;
                let f = krf2(&theta_hat, mr, q)?;
                EstimateBundle::krf2(theta_hat, f)
            }
            EstimatorKind::JointTgh => {
                let z_hat = estimate_z_ls(&y, &proto.phi)?;
                let f = krf3(&z_hat, mr, q, sys.blocks)?;
                EstimateBundle::krf3(z_hat, f)
            }
            EstimatorKind::StaticRisBaseline => {
                out.push((kind, static_ris_baseline(sys, &ch, &mut rng)?));
                continue;
            }
        };
        out.push((kind, evaluate(&bundle, &truth)?));
    }
    Ok(out)
}

fn run_trial(
    cfg: &ExperimentConfig,
    sweep_index: usize,
    trial: usize,
) -> Result<(Vec<ResultRow>, u32)> {
    let value = cfg.sweep_values[sweep_index];
    let sys = cfg.sweep_axis.apply(&cfg.system, value);
    for attempt in 0..MAX_ATTEMPTS {
        let seed = trial_seed(cfg.system.seed, sweep_index, trial, attempt);
        match simulate_trial(&sys, &cfg.estimators, seed) {
            Ok(reports) => {
                let rows = reports
                    .into_iter()
                    .map(|(estimator, r)| ResultRow {
                        estimator,
                        sweep_axis: cfg.sweep_axis,
                        sweep_value: value,
                        trial,
                        nmse_theta: r.theta,
                        nmse_z: r.z,
                        nmse_g: r.g,
                        nmse_h: r.h,
                        nmse_t: r.t,
                        seed,
                    })
                    .collect();
                return Ok((rows, attempt));
            }
            Err(Error::DegenerateColumn { column }) => {
                log::warn!(
                    "{}={value} trial {trial}: degenerate column {column}, resampling (attempt {})",
                    cfg.sweep_axis,
                    attempt + 1
                );
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::ResampleLimit {
        sweep_index,
        trial,
        attempts: MAX_ATTEMPTS,
    })
}

/// Runs every (sweep point, trial) pair on a pool of `threads` workers
/// (`None` or 0 picks the rayon default). The output depends only on `cfg`.
pub fn run_experiment(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let trials = cfg.system.trials;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()?;
    log::info!(
        "{} sweep over {} points x {} trials, {} estimators, {} threads",
        cfg.sweep_axis,
        cfg.sweep_values.len(),
        trials,
        cfg.estimators.len(),
        pool.current_num_threads()
    );

    let work: Vec<(usize, usize)> = (0..cfg.sweep_values.len())
        .flat_map(|s| (0..trials).map(move |t| (s, t)))
        .collect();
    let results: Vec<(usize, Vec<ResultRow>, u32)> = pool.install(|| {
        work.par_iter()
            .map(|&(s, t)| run_trial(cfg, s, t).map(|(rows, resampled)| (s, rows, resampled)))
            .collect::<Result<_>>()
    })?;

    let resamples = results.iter().map(|(_, _, r)| *r as usize).sum();
    let mut keyed: Vec<(usize, ResultRow)> = results
        .into_iter()
        .flat_map(|(s, rows, _)| rows.into_iter().map(move |r| (s, r)))
        .collect();
    keyed.sort_by_key(|(s, r)| (r.estimator, *s, r.trial));
    if resamples > 0 {
        log::warn!("{resamples} trial(s) resampled after degenerate columns");
    }
    log::info!("{} rows", keyed.len());
    Ok(ExperimentOutcome {
        rows: keyed.into_iter().map(|(_, r)| r).collect(),
        resamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SystemConfig {
        SystemConfig {
            elements: 4,
            users: 2,
            bs_antennas: 3,
            symbols_per_block: 2,
            blocks: 2,
            subframes: 4,
            preset_positions: 4,
            trials: 3,
            ..Default::default()
        }
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for s in 0..10 {
            for t in 0..100 {
                for a in 0..3 {
                    assert!(seen.insert(trial_seed(1, s, t, a)));
                }
            }
        }
        assert_ne!(trial_seed(1, 0, 0, 0), trial_seed(2, 0, 0, 0));
    }

    #[test]
    fn cardinality_and_order() {
        let mut cfg = ExperimentConfig::new(small(), SweepAxis::SnrDb);
        cfg.sweep_values = vec![10.0, 20.0];
        cfg.estimators = vec![EstimatorKind::JointTgh, EstimatorKind::LsIdealT];
        let out = run_experiment(&cfg, Some(2)).unwrap();
        assert_eq!(out.rows.len(), 2 * 2 * 3);
        assert_eq!(out.rows[0].estimator, EstimatorKind::LsIdealT);
        assert_eq!(out.rows[11].estimator, EstimatorKind::JointTgh);
        let keys: Vec<_> = out
            .rows
            .iter()
            .map(|r| (r.estimator, r.sweep_value as i64, r.trial))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn fields_match_estimator() {
        let cfg = ExperimentConfig {
            sweep_values: vec![20.0],
            ..ExperimentConfig::new(small(), SweepAxis::SnrDb)
        };
        let out = run_experiment(&cfg, Some(1)).unwrap();
        for r in out.rows.iter().filter(|r| r.trial == 0) {
            let present =
                [r.nmse_theta, r.nmse_z, r.nmse_g, r.nmse_h, r.nmse_t].map(|v| v.is_some());
            let expect = match r.estimator {
                EstimatorKind::LsIdealT | EstimatorKind::LsMismatchedT => {
                    [true, false, false, false, false]
                }
                EstimatorKind::KrfIdealT
                | EstimatorKind::KrfMismatchedT
                | EstimatorKind::StaticRisBaseline => [true, false, true, true, false],
                EstimatorKind::JointTgh => [true; 5],
            };
            assert_eq!(present, expect, "{}", r.estimator);
            assert!(r.primary_nmse().unwrap() > 0.0);
        }
    }

    #[test]
    fn estimator_subset_does_not_change_shared_results() {
        let sys = small();
        let all = simulate_trial(&sys, &EstimatorKind::ALL, 5).unwrap();
        let some = simulate_trial(
            &sys,
            &[
                EstimatorKind::StaticRisBaseline,
                EstimatorKind::KrfMismatchedT,
            ],
            5,
        )
        .unwrap();
        for (kind, report) in some {
            assert_eq!(all.iter().find(|(k, _)| *k == kind).unwrap().1, report);
        }
    }

    #[test]
    fn baseline_is_exact_without_noise() {
        let sys = SystemConfig {
            snr_db: f64::INFINITY,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ch = generate_channels(&sys, &mut rng);
        let r = static_ris_baseline(&sys, &ch, &mut rng).unwrap();
        assert!(r.theta.unwrap() <= 1e-20);
        assert!(r.g.unwrap() <= 1e-18 && r.h.unwrap() <= 1e-18);
    }

    #[test]
    fn invalid_config_fails_before_work() {
        let mut cfg = ExperimentConfig::new(small(), SweepAxis::SnrDb);
        cfg.sweep_values.clear();
        assert!(run_experiment(&cfg, None).unwrap_err().is_config());
    }
}
