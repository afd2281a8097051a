//! Timed, seeded comparison of K-means and FCM on one dataset.
//!
//! For cluster count `c`, the replicated K-means run draws from
//! `derive(seed, 2c)` and the FCM run from `derive(seed, 2c + 1)`, so every
//! entry is reproducible on its own. Each entry is timed `timing_repeats`
//! times on the current thread and the median is reported. Timings cover
//! initialization and iterations only; the data is already in memory.

use std::time::Instant;

use serde::Serialize;

use crate::complexity::{complexity_table, fcm_op_count, kmeans_op_count, ComplexityInputs, ComplexityRow};
use crate::error::{ClusterError, Result};
use crate::fcm::{run_fcm, FcmConfig, FcmResult, StopCriterion};
use crate::ingest::LabeledDataset;
use crate::kmeans::{run_kmeans_replicated, KMeansConfig, ReplicatedKMeans, DEFAULT_MAX_ITERATIONS};
use crate::rng::RandomStream;

pub const REPORT_SCHEMA: &str = "clusterbench-report/1";

/// Default seed used whenever none is given.
pub const DEFAULT_SEED: u64 = 42;

/// A value together with how long it took to compute.
#[derive(Debug, Clone, PartialEq)]
pub struct Timed<T> {
    pub value: T,
    pub elapsed_seconds: f64,
}

/// Runs `task` once on a monotonic clock. Errors propagate untimed.
pub fn time_run<T>(task: impl FnOnce() -> Result<T>) -> Result<Timed<T>> {
    let start = Instant::now();
    let value = task()?;
    Ok(Timed {
        value,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Repeated<T> {
    pub value: T,
    pub median_seconds: f64,
    pub samples: Vec<f64>,
}

/// Runs the same deterministic task `repeats` times sequentially.
pub fn time_repeated<T>(repeats: usize, mut task: impl FnMut() -> Result<T>) -> Result<Repeated<T>> {
    if repeats == 0 {
        return Err(ClusterError::NonPositive {
            name: "timing_repeats",
        });
    }
    let mut samples = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats {
        let timed = time_run(&mut task)?;
        samples.push(timed.elapsed_seconds);
        last = Some(timed.value);
    }
    Ok(Repeated {
        value: last.expect("repeats >= 1"),
        median_seconds: median(&samples),
        samples,
    })
}

pub fn median(samples: &[f64]) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FcmSettings {
    pub m: f64,
    pub epsilon: f64,
    pub max_iterations: usize,
    pub criterion: StopCriterion,
}

impl Default for FcmSettings {
    fn default() -> Self {
        let d = FcmConfig::new(2);
        FcmSettings {
            m: d.m,
            epsilon: d.epsilon,
            max_iterations: d.max_iterations,
            criterion: d.criterion,
        }
    }
}

impl FcmSettings {
    pub fn config(&self, c: usize) -> FcmConfig {
        FcmConfig {
            c,
            m: self.m,
            epsilon: self.epsilon,
            max_iterations: self.max_iterations,
            criterion: self.criterion,
        }
    }
}

/// Fixed `(n, d, i)` used for the reference complexity table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReferenceShape {
    pub n: u64,
    pub d: u64,
    pub i: u64,
}

impl Default for ReferenceShape {
    fn default() -> Self {
        ReferenceShape { n: 200, d: 4, i: 28 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchConfig {
    pub cluster_counts: Vec<usize>,
    pub replicates: usize,
    pub kmeans_max_iterations: usize,
    pub seed: u64,
    pub fcm: FcmSettings,
    pub timing_repeats: usize,
    pub reference: ReferenceShape,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            cluster_counts: vec![4],
            replicates: 5,
            kmeans_max_iterations: DEFAULT_MAX_ITERATIONS,
            seed: DEFAULT_SEED,
            fcm: FcmSettings::default(),
            timing_repeats: 3,
            reference: ReferenceShape::default(),
        }
    }
}

impl BenchConfig {
    fn validate(&self) -> Result<()> {
        if self.cluster_counts.is_empty() {
            return Err(ClusterError::NonPositive {
                name: "cluster count list length",
            });
        }
        if self.timing_repeats == 0 {
            return Err(ClusterError::NonPositive {
                name: "timing_repeats",
            });
        }
        Ok(())
    }
}

/// Where the data came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataSource {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub n: usize,
    pub d: usize,
    pub source: String,
    pub checksum: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub features: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Kmeans,
    Fcm,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Kmeans => "kmeans",
            Algorithm::Fcm => "fcm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateSummary {
    pub replicate: usize,
    pub iterations: usize,
    pub total_sumd: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchEntry {
    pub algorithm: Algorithm,
    pub clusters: usize,
    /// Median over the timing repeats.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub timing_samples: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    /// Best `total_sumd` for K-means, final `J_m` for FCM.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<Vec<ReplicateSummary>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl BenchEntry {
    pub fn is_skipped(&self) -> bool {
        self.skipped.is_some()
    }
}

/// Complexity row evaluated at an iteration count observed in this run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObservedComplexity {
    pub clusters: usize,
    pub iterations: usize,
    /// Which run supplied `iterations`: `fcm`, or `kmeans` when FCM was skipped.
    pub iteration_source: Algorithm,
    pub kmeans_ops: u64,
    pub fcm_ops: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceComplexity {
    pub shape: ReferenceShape,
    pub rows: Vec<ComplexityRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub schema: String,
    pub dataset: DatasetSummary,
    pub config: BenchConfig,
    pub entries: Vec<BenchEntry>,
    pub complexity_observed: Vec<ObservedComplexity>,
    pub complexity_reference: ReferenceComplexity,
}

impl BenchReport {
    pub fn entry(&self, algorithm: Algorithm, clusters: usize) -> Option<&BenchEntry> {
        self.entries
            .iter()
            .find(|e| e.algorithm == algorithm && e.clusters == clusters)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are always serializable")
    }
}

/// Clustering outputs behind one cluster count of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterRun {
    pub clusters: usize,
    pub kmeans: ReplicatedKMeans,
    pub fcm: Option<FcmResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub report: BenchReport,
    pub runs: Vec<ClusterRun>,
}

pub fn kmeans_stream_label(clusters: usize) -> u64 {
    2 * clusters as u64
}

pub fn fcm_stream_label(clusters: usize) -> u64 {
    2 * clusters as u64 + 1
}

/// Runs replicated K-means and FCM for each configured cluster count.
/// FCM entries with fewer than two clusters are recorded as skipped.
pub fn run_comparison(ds: &LabeledDataset, source: &DataSource, config: &BenchConfig) -> Result<Comparison> {
    config.validate()?;
    let data = &ds.data;
    data.validate()?;
    let base = RandomStream::new(config.seed);

    let mut entries = Vec::new();
    let mut runs = Vec::new();
    let mut observed = Vec::new();

    for &c in &config.cluster_counts {
        let km_config = KMeansConfig::new(c)
            .with_replicates(config.replicates)
            .with_max_iterations(config.kmeans_max_iterations);
        km_config.validate(data)?;
        let km_stream = base.derive(kmeans_stream_label(c));
        let km = time_repeated(config.timing_repeats, || {
            run_kmeans_replicated(data, &km_config, &km_stream)
        })?;
        let best = &km.value.best;
        entries.push(BenchEntry {
            algorithm: Algorithm::Kmeans,
            clusters: c,
            elapsed_seconds: Some(km.median_seconds),
            timing_samples: km.samples.clone(),
            iterations: Some(best.iterations),
            objective: Some(best.total_sumd),
            converged: Some(best.converged),
            replicates: Some(
                km.value
                    .all
                    .iter()
                    .map(|r| ReplicateSummary {
                        replicate: r.replicate_index,
                        iterations: r.iterations,
                        total_sumd: r.total_sumd,
                        converged: r.converged,
                    })
                    .collect(),
            ),
            skipped: None,
        });

        let fcm = if c < 2 {
            entries.push(BenchEntry {
                algorithm: Algorithm::Fcm,
                clusters: c,
                elapsed_seconds: None,
                timing_samples: Vec::new(),
                iterations: None,
                objective: None,
                converged: None,
                replicates: None,
                skipped: Some(ClusterError::FcmNeedsTwoClusters.to_string()),
            });
            None
        } else {
            let fcm_config = config.fcm.config(c);
            fcm_config.validate(data)?;
            let fcm_stream = base.derive(fcm_stream_label(c));
            let timed = time_repeated(config.timing_repeats, || {
                run_fcm(data, &fcm_config, &mut fcm_stream.clone())
            })?;
            entries.push(BenchEntry {
                algorithm: Algorithm::Fcm,
                clusters: c,
                elapsed_seconds: Some(timed.median_seconds),
                timing_samples: timed.samples,
                iterations: Some(timed.value.iterations),
                objective: Some(timed.value.objective),
                converged: Some(timed.value.converged),
                replicates: None,
                skipped: None,
            });
            Some(timed.value)
        };

        let (iterations, iteration_source) = match &fcm {
            Some(f) => (f.iterations, Algorithm::Fcm),
            None => (km.value.best.iterations, Algorithm::Kmeans),
        };
        let inputs = ComplexityInputs::new(data.rows() as u64, c as u64, data.cols() as u64, iterations as u64)?;
        observed.push(ObservedComplexity {
            clusters: c,
            iterations,
            iteration_source,
            kmeans_ops: kmeans_op_count(&inputs)?,
            fcm_ops: fcm_op_count(&inputs)?,
        });

        runs.push(ClusterRun {
            clusters: c,
            kmeans: km.value,
            fcm,
        });
    }

    let counts: Vec<u64> = config.cluster_counts.iter().map(|&c| c as u64).collect();
    let shape = config.reference;
    let report = BenchReport {
        schema: REPORT_SCHEMA.to_string(),
        dataset: DatasetSummary {
            n: data.rows(),
            d: data.cols(),
            source: source.name.clone(),
            checksum: source.sha256.clone(),
            features: ds.feature_names.clone(),
        },
        config: config.clone(),
        entries,
        complexity_observed: observed,
        complexity_reference: ReferenceComplexity {
            shape,
            rows: complexity_table(shape.n, shape.d, shape.i, &counts)?,
        },
    };
    Ok(Comparison { report, runs })
}
