use fris_ce::estimators::{estimate_theta_ls, estimate_z_ls, matched_filter, nmse};
use fris_ce::harness::{
    emit_csv, emit_plot_script, median, read_csv, run_experiment, EstimatorKind, ExperimentConfig,
    ResultRow, SweepAxis,
};
use fris_ce::model::{generate_channels, synthesize_received, FrisProtocol, SystemConfig};
use fris_ce::tensor::{khatri_rao, ComplexMatrix};
use fris_ce::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn experiment(
    axis: SweepAxis,
    values: &[f64],
    estimators: &[EstimatorKind],
    system: SystemConfig,
) -> Vec<ResultRow> {
    let cfg = ExperimentConfig {
        system,
        sweep_axis: axis,
        sweep_values: values.to_vec(),
        estimators: estimators.to_vec(),
        output_path: "unused.csv".into(),
    };
    run_experiment(&cfg, None).unwrap().rows
}

fn median_db(rows: &[ResultRow], e: EstimatorKind, value: f64) -> f64 {
    let v: Vec<f64> = rows
        .iter()
        .filter(|r| r.estimator == e && r.sweep_value == value)
        .filter_map(ResultRow::primary_nmse)
        .collect();
    db(median(&v).unwrap())
}

#[test]
fn ls_filters_are_unbiased() {
    // Fixed channels and motion; the average over noise draws must converge
    // to the truth. The per-entry noise variance of the average is about
    // σ²/(T_s J K)/n, i.e. ~2.5e-6 relative at 10 dB with n = 10⁴.
    let cfg = SystemConfig {
        snr_db: 10.0,
        ..Default::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let ch = generate_channels(&cfg, &mut rng);
    let proto = FrisProtocol::generate(&cfg, &mut rng).unwrap();
    let theta = khatri_rao(&ch.g.transpose(), &ch.h).unwrap();
    let z = khatri_rao(proto.t_real(), &theta).unwrap();

    let n = 10_000;
    let mut sum_theta = ComplexMatrix::zeros(theta.rows(), theta.cols());
    let mut sum_z = ComplexMatrix::zeros(z.rows(), z.cols());
    for _ in 0..n {
        let sig = synthesize_received(&ch, &proto, cfg.snr_db, &mut rng).unwrap();
        let y = matched_filter(&sig, &proto.xp).unwrap();
        sum_theta = sum_theta
            .add(&estimate_theta_ls(&y, &proto.phi, proto.t_real()).unwrap())
            .unwrap();
        sum_z = sum_z.add(&estimate_z_ls(&y, &proto.phi).unwrap()).unwrap();
    }
    let inv = Complex64::new(1.0 / n as f64, 0.0);
    let bias_theta = nmse(&sum_theta.scale(inv), &theta).unwrap();
    let bias_z = nmse(&sum_z.scale(inv), &z).unwrap();
    assert!(bias_theta < 2e-5, "theta {bias_theta:e}");
    assert!(bias_z < 2e-4, "z {bias_z:e}");
}

#[test]
fn baseline_matches_krf_ideal_and_is_accurate() {
    let rows = experiment(
        SweepAxis::SnrDb,
        &[10.0, 30.0],
        &[EstimatorKind::KrfIdealT, EstimatorKind::StaticRisBaseline],
        SystemConfig {
            trials: 300,
            ..Default::default()
        },
    );
    for snr in [10.0, 30.0] {
        let krf = median_db(&rows, EstimatorKind::KrfIdealT, snr);
        let base = median_db(&rows, EstimatorKind::StaticRisBaseline, snr);
        assert!(
            (krf - base).abs() <= 1.0,
            "{snr} dB: krf {krf:.2} baseline {base:.2}"
        );
    }
    assert!(median_db(&rows, EstimatorKind::StaticRisBaseline, 30.0) < -20.0);
}

#[test]
fn medians_decrease_with_snr() {
    let snrs: Vec<f64> = (0..=8).map(|i| 5.0 * i as f64).collect();
    let estimators = [
        EstimatorKind::LsIdealT,
        EstimatorKind::KrfIdealT,
        EstimatorKind::JointTgh,
    ];
    let rows = experiment(
        SweepAxis::SnrDb,
        &snrs,
        &estimators,
        SystemConfig {
            trials: 500,
            ..Default::default()
        },
    );
    for e in estimators {
        let curve: Vec<f64> = snrs.iter().map(|&s| median_db(&rows, e, s)).collect();
        assert!(curve.windows(2).all(|w| w[1] <= w[0]), "{e}: {curve:?}");
    }
}

#[test]
fn curve_ordering_at_operating_point() {
    let rows = experiment(
        SweepAxis::SigmaPos,
        &[0.05],
        &[
            EstimatorKind::LsMismatchedT,
            EstimatorKind::KrfMismatchedT,
            EstimatorKind::JointTgh,
        ],
        SystemConfig {
            snr_db: 30.0,
            trials: 300,
            ..Default::default()
        },
    );
    let joint = median_db(&rows, EstimatorKind::JointTgh, 0.05);
    let krf = median_db(&rows, EstimatorKind::KrfMismatchedT, 0.05);
    let ls = median_db(&rows, EstimatorKind::LsMismatchedT, 0.05);
    assert!(
        joint < krf && joint < ls,
        "joint {joint:.2} krf {krf:.2} ls {ls:.2}"
    );
}

#[test]
fn single_trial_runs_are_byte_identical_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::new(
        SystemConfig {
            trials: 1,
            ..Default::default()
        },
        SweepAxis::SnrDb,
    );
    let mut files = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("{i}.csv"));
        emit_csv(&run_experiment(&cfg, Some(2)).unwrap().rows, &path).unwrap();
        files.push(path);
    }
    assert_eq!(
        std::fs::read(&files[0]).unwrap(),
        std::fs::read(&files[1]).unwrap()
    );

    let rows = run_experiment(&cfg, Some(2)).unwrap().rows;
    assert_eq!(rows.len(), 6 * 9);
    let back = read_csv(&files[0]).unwrap();
    assert_eq!(back, rows);
    for (a, b) in rows.iter().zip(&back) {
        for (x, y) in [
            (a.nmse_theta, b.nmse_theta),
            (a.nmse_z, b.nmse_z),
            (a.nmse_t, b.nmse_t),
        ] {
            assert_eq!(x.map(f64::to_bits), y.map(f64::to_bits));
        }
    }
}

#[test]
fn plot_script_runs_under_gnuplot() {
    let have_gnuplot = std::process::Command::new("gnuplot")
        .arg("--version")
        .output()
        .is_ok();
    if !have_gnuplot {
        eprintln!("gnuplot not installed; skipping execution smoke test");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    for (axis, values) in [
        (SweepAxis::SnrDb, vec![0.0, 20.0]),
        (SweepAxis::SigmaPos, vec![0.01, 0.1]),
    ] {
        let rows = experiment(
            axis,
            &values,
            &EstimatorKind::ALL,
            SystemConfig {
                trials: 3,
                ..Default::default()
            },
        );
        let csv = dir.path().join("r.csv");
        let script = dir.path().join("r.gp");
        emit_csv(&rows, &csv).unwrap();
        emit_plot_script(&rows, &csv, &script).unwrap();
        let out = std::process::Command::new("gnuplot")
            .arg(&script)
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(dir.path().join("r.svg").exists());
    }
}
