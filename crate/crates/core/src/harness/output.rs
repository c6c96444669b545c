use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{EstimatorKind, ResultRow, SweepAxis};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 10] = [
    "estimator",
    "sweep_axis",
    "sweep_value",
    "trial",
    "nmse_theta",
    "nmse_z",
    "nmse_G",
    "nmse_H",
    "nmse_T",
    "seed",
];

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_owned(),
        source,
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], records: &[T]) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    w.write_record(header).map_err(csv_err(path))?;
    for r in records {
        w.serialize(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes rows with a fixed header. Floats use the shortest decimal that
/// parses back to the same bits; inapplicable NMSEs are empty fields.
pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    write_csv(path, &CSV_HEADER, rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    r.deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_err(path))
}

/// Per-(estimator, sweep point, metric) aggregate over trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub estimator: EstimatorKind,
    pub sweep_axis: SweepAxis,
    pub sweep_value: f64,
    pub metric: String,
    pub trials: usize,
    pub median: f64,
    pub mean: f64,
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

fn metrics(r: &ResultRow) -> [(&'static str, Option<f64>); 5] {
    [
        ("theta", r.nmse_theta),
        ("z", r.nmse_z),
        ("G", r.nmse_g),
        ("H", r.nmse_h),
        ("T", r.nmse_t),
    ]
}

/// Groups consecutive rows sharing estimator and sweep value, which is how
/// the harness orders them.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut out = Vec::new();
    for group in rows.chunk_by(|a, b| a.estimator == b.estimator && a.sweep_value == b.sweep_value)
    {
        let first = &group[0];
        for (i, (name, _)) in metrics(first).iter().enumerate() {
            let values: Vec<f64> = group.iter().filter_map(|r| metrics(r)[i].1).collect();
            let Some(med) = median(&values) else { continue };
            out.push(SummaryRow {
                estimator: first.estimator,
                sweep_axis: first.sweep_axis,
                sweep_value: first.sweep_value,
                metric: name.to_string(),
                trials: values.len(),
                median: med,
                mean: values.iter().sum::<f64>() / values.len() as f64,
            });
        }
    }
    out
}

pub fn emit_summary_csv(rows: &[SummaryRow], path: &Path) -> Result<()> {
    let header = [
        "estimator",
        "sweep_axis",
        "sweep_value",
        "metric",
        "trials",
        "median",
        "mean",
    ];
    write_csv(path, &header, rows)
}

/// Writes `text` to `path`, reporting failures with the path.
pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = File::create(path).map_err(io_err(path))?;
    f.write_all(text.as_bytes()).map_err(io_err(path))
}
