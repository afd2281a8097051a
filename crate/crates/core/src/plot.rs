//! Plot-ready comma-separated files for a comparison run.
//!
//! Every file starts with a header line naming its columns, uses LF line
//! endings, and prints floats in shortest round-trip form. Per cluster
//! count `c`:
//!
//! * `kmeans_labels_c{c}.csv`: `point,<features...>,label` (best replicate)
//! * `fcm_membership_c{c}.csv`: `point,<features...>,u0..u{c-1}`
//! * `fcm_objective_c{c}.csv`: `iteration,objective`
//!
//! Shared across the run:
//!
//! * `elapsed_time.csv`: `algorithm,clusters,elapsed_seconds`
//! * `complexity.csv`: `table,clusters,iterations,kmeans_ops,fcm_ops`,
//!   with `table` either `observed` or `reference`

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::bench::{BenchReport, ClusterRun};
use crate::error::{ClusterError, Result};
use crate::model::DataMatrix;

fn feature_columns(report: &BenchReport, d: usize) -> Vec<String> {
    match &report.dataset.features {
        Some(names) if names.len() == d => names.clone(),
        _ => (0..d).map(|t| format!("f{t}")).collect(),
    }
}

fn write_file(dir: &Path, name: &str, content: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| ClusterError::io(&path, e))?;
    written.push(path);
    Ok(())
}

fn push_row(out: &mut String, point: usize, x: &[f64], tail: impl IntoIterator<Item = String>) {
    let _ = write!(out, "{point}");
    for v in x {
        let _ = write!(out, ",{v}");
    }
    for t in tail {
        let _ = write!(out, ",{t}");
    }
    out.push('\n');
}

/// Writes the plot files into `destination` (created if missing) and
/// returns their paths in write order.
pub fn emit_plot_data(
    report: &BenchReport,
    runs: &[ClusterRun],
    data: &DataMatrix,
    destination: &Path,
) -> Result<Vec<PathBuf>> {
    if runs.is_empty() {
        return Err(ClusterError::NothingToEmit);
    }
    fs::create_dir_all(destination).map_err(|e| ClusterError::io(destination, e))?;
    let features = feature_columns(report, data.cols());
    let mut written = Vec::new();

    for run in runs {
        let c = run.clusters;
        let labels = run.kmeans.best.assignment.labels();
        let mut out = format!("point,{},label\n", features.join(","));
        for (i, x) in data.iter_rows().enumerate() {
            push_row(&mut out, i, x, [labels[i].to_string()]);
        }
        write_file(destination, &format!("kmeans_labels_c{c}.csv"), &out, &mut written)?;

        if let Some(fcm) = &run.fcm {
            let u_cols: Vec<String> = (0..c).map(|j| format!("u{j}")).collect();
            let mut out = format!("point,{},{}\n", features.join(","), u_cols.join(","));
            for (i, x) in data.iter_rows().enumerate() {
                push_row(&mut out, i, x, fcm.membership.row(i).iter().map(|u| u.to_string()));
            }
            write_file(destination, &format!("fcm_membership_c{c}.csv"), &out, &mut written)?;

            let mut out = String::from("iteration,objective\n");
            for (k, j) in fcm.objective_history.iter().enumerate() {
                let _ = writeln!(out, "{},{j}", k + 1);
            }
            write_file(destination, &format!("fcm_objective_c{c}.csv"), &out, &mut written)?;
        }
    }

    let mut out = String::from("algorithm,clusters,elapsed_seconds\n");
    for e in &report.entries {
        if let Some(t) = e.elapsed_seconds {
            let _ = writeln!(out, "{},{},{t}", e.algorithm.as_str(), e.clusters);
        }
    }
    write_file(destination, "elapsed_time.csv", &out, &mut written)?;

    let mut out = String::from("table,clusters,iterations,kmeans_ops,fcm_ops\n");
    for r in &report.complexity_observed {
        let _ = writeln!(
            out,
            "observed,{},{},{},{}",
            r.clusters, r.iterations, r.kmeans_ops, r.fcm_ops
        );
    }
    let shape = report.complexity_reference.shape;
    for r in &report.complexity_reference.rows {
        let _ = writeln!(
            out,
            "reference,{},{},{},{}",
            r.clusters, shape.i, r.kmeans_ops, r.fcm_ops
        );
    }
    write_file(destination, "complexity.csv", &out, &mut written)?;

    Ok(written)
}

/// Writes the report as pretty-printed JSON.
pub fn write_report(report: &BenchReport, path: &Path) -> Result<()> {
    let mut json = report.to_json();
    json.push('\n');
    fs::write(path, json).map_err(|e| ClusterError::io(path, e))
}
