use std::fmt::Write as _;
use std::path::Path;

use super::output::{median, write_text};
use super::{EstimatorKind, ResultRow, SweepAxis};
use crate::error::{Error, Result};

/// `λ/n` when `value` (in wavelengths) is the reciprocal of an integer,
/// otherwise `<value>λ`.
pub fn lambda_label(value: f64) -> String {
    if value == 0.0 {
        return "0".into();
    }
    let n = 1.0 / value;
    if (n - n.round()).abs() < 1e-9 * n.abs() {
        format!("λ/{}", n.round() as i64)
    } else {
        format!("{value}λ")
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Median primary NMSE in dB per (estimator, sweep value), in row order.
/// Points with a zero median cannot be drawn on a dB axis and are dropped.
pub fn median_curves(rows: &[ResultRow]) -> Vec<(EstimatorKind, Vec<(f64, f64)>)> {
    let mut curves: Vec<(EstimatorKind, Vec<(f64, f64)>)> = Vec::new();
    for group in rows.chunk_by(|a, b| a.estimator == b.estimator && a.sweep_value == b.sweep_value)
    {
        let first = &group[0];
        let values: Vec<f64> = group.iter().filter_map(ResultRow::primary_nmse).collect();
        let point = median(&values)
            .filter(|m| *m > 0.0)
            .map(|m| (first.sweep_value, 10.0 * m.log10()));
        match curves.last_mut() {
            Some((e, pts)) if *e == first.estimator => pts.extend(point),
            _ => curves.push((first.estimator, point.into_iter().collect())),
        }
    }
    curves
}

/// Writes a gnuplot script that draws median NMSE in dB against the sweep
/// axis, one series per estimator, into an SVG next to the script. The
/// medians are embedded as datablocks computed from the rows of `csv_path`.
pub fn emit_plot_script(rows: &[ResultRow], csv_path: &Path, path: &Path) -> Result<()> {
    let Some(first) = rows.first() else {
        return Err(Error::config("no result rows to plot"));
    };
    let axis = first.sweep_axis;
    let curves = median_curves(rows);
    let svg = path.with_extension("svg");

    let mut s = String::new();
    let _ = writeln!(s, "# NMSE medians from {}", csv_path.display());
    let _ = writeln!(s, "set encoding utf8");
    let _ = writeln!(s, "set terminal svg size 900,600 dynamic enhanced");
    let _ = writeln!(s, "set output {}", quote(&svg.display().to_string()));
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set key outside right");
    let _ = writeln!(s, "set ylabel \"NMSE (dB)\"");
    match axis {
        SweepAxis::SnrDb => {
            let _ = writeln!(s, "set xlabel \"SNR (dB)\"");
        }
        SweepAxis::SigmaPos => {
            let mut values: Vec<f64> = rows.iter().map(|r| r.sweep_value).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            let _ = writeln!(s, "set xlabel \"position error std\"");
            if values.iter().all(|v| *v > 0.0) {
                let _ = writeln!(s, "set logscale x");
            }
            let tics: Vec<String> = values
                .iter()
                .map(|v| format!("{} {v}", quote(&lambda_label(*v))))
                .collect();
            let _ = writeln!(s, "set xtics ({})", tics.join(", "));
        }
    }

    for (i, (_, pts)) in curves.iter().enumerate() {
        let _ = writeln!(s, "$d{i} << EOD");
        for (x, y) in pts {
            let _ = writeln!(s, "{x} {y}");
        }
        let _ = writeln!(s, "EOD");
    }
    let series: Vec<String> = curves
        .iter()
        .enumerate()
        .filter(|(_, (_, pts))| !pts.is_empty())
        .map(|(i, (e, _))| format!("$d{i} using 1:2 with linespoints title {}", quote(e.tag())))
        .collect();
    if series.is_empty() {
        let _ = writeln!(s, "print \"no positive medians to plot\"");
    } else {
        let _ = writeln!(s, "plot {}", series.join(", \\\n     "));
    }
    write_text(path, &s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(
        estimator: EstimatorKind,
        axis: SweepAxis,
        value: f64,
        trial: usize,
        nmse: f64,
    ) -> ResultRow {
        ResultRow {
            estimator,
            sweep_axis: axis,
            sweep_value: value,
            trial,
            nmse_theta: Some(nmse),
            nmse_z: Some(nmse / 10.0),
            nmse_g: None,
            nmse_h: None,
            nmse_t: None,
            seed: 0,
        }
    }

    #[test]
    fn lambda_labels() {
        assert_eq!(lambda_label(0.01), "λ/100");
        assert_eq!(lambda_label(0.05), "λ/20");
        assert_eq!(lambda_label(0.1), "λ/10");
        assert_eq!(lambda_label(0.3), "0.3λ");
        assert_eq!(lambda_label(1.0), "λ/1");
        assert_eq!(lambda_label(0.0), "0");
    }

    #[test]
    fn one_series_per_estimator() {
        let mut rows = Vec::new();
        for e in [EstimatorKind::KrfIdealT, EstimatorKind::JointTgh] {
            for v in [0.0, 10.0] {
                for t in 0..3 {
                    rows.push(row(e, SweepAxis::SnrDb, v, t, [0.1, 1.0, 0.01][t]));
                }
            }
        }
        let curves = median_curves(&rows);
        assert_eq!(curves.len(), 2);
        assert_eq!(curves[0].1, vec![(0.0, -10.0), (10.0, -10.0)]);
        // Joint curve uses NMSE(Z).
        assert_eq!(curves[1].1, vec![(0.0, -20.0), (10.0, -20.0)]);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.gp");
        emit_plot_script(&rows, Path::new("r.csv"), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.matches("with linespoints").count(), 2);
        assert!(text.contains("title \"joint-TGH\""));
        assert!(text.contains("SNR (dB)"));
    }

    #[test]
    fn sigma_axis_uses_lambda_fractions() {
        let rows: Vec<_> = [0.01, 0.05, 0.1]
            .iter()
            .map(|&v| {
                row(
                    EstimatorKind::KrfMismatchedT,
                    SweepAxis::SigmaPos,
                    v,
                    0,
                    0.01,
                )
            })
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.gp");
        emit_plot_script(&rows, Path::new("r.csv"), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("set xtics (\"λ/100\" 0.01, \"λ/20\" 0.05, \"λ/10\" 0.1)"));
    }

    #[test]
    fn empty_rows_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(emit_plot_script(&[], Path::new("r.csv"), &dir.path().join("p.gp")).is_err());
    }
}
