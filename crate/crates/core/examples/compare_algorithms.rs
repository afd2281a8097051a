//! Times K-means against FCM on Iris and writes the plot-ready CSV files.
//!
//! `cargo run --example compare_algorithms -- [output-dir]`

use std::path::PathBuf;

use clusterbench::bench::{run_comparison, Algorithm, BenchConfig, DataSource};
use clusterbench::ingest::{self, IRIS_SHA256};
use clusterbench::plot::{emit_plot_data, write_report};

fn main() -> clusterbench::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("clusterbench-plots"));

    let iris = ingest::iris()?;
    let source = DataSource {
        name: "iris.data (bundled)".into(),
        sha256: IRIS_SHA256.into(),
    };
    let config = BenchConfig {
        cluster_counts: vec![2, 3, 4, 5],
        ..BenchConfig::default()
    };
    let cmp = run_comparison(&iris, &source, &config)?;

    println!("clusters  k-means s  fcm s     ratio");
    for &c in &config.cluster_counts {
        let km = cmp.report.entry(Algorithm::Kmeans, c).and_then(|e| e.elapsed_seconds);
        let fcm = cmp.report.entry(Algorithm::Fcm, c).and_then(|e| e.elapsed_seconds);
        if let (Some(km), Some(fcm)) = (km, fcm) {
            println!("{c:8}  {km:9.6}  {fcm:8.6}  {:5.2}", fcm / km);
        }
    }

    let files = emit_plot_data(&cmp.report, &cmp.runs, &iris.data, &out)?;
    write_report(&cmp.report, &out.join("report.json"))?;
    println!("\nwrote {} plot files and report.json to {}", files.len(), out.display());
    Ok(())
}
