//! Hard K-means (Lloyd iterations) with replicated restarts.
//!
//! A run samples `k` distinct rows as initial centroids, then alternates
//! nearest-centroid assignment and centroid recomputation until an
//! assignment pass leaves every label unchanged. One iteration is one
//! assignment pass, so a run that converges immediately after its first
//! recomputation reports two iterations.
//!
//! Empty clusters are repaired in place: the point farthest from its own
//! cluster mean (among clusters with more than one member, lowest index on
//! ties) is moved into the empty slot as a singleton.

use serde::Serialize;

use crate::error::{ClusterError, Result};
use crate::model::{sq_dist, CentroidSet, DataMatrix, HardAssignment};
use crate::rng::RandomStream;

pub const DEFAULT_MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KMeansConfig {
    pub k: usize,
    pub max_iterations: usize,
    pub replicates: usize,
}

impl KMeansConfig {
    pub fn new(k: usize) -> Self {
        KMeansConfig {
            k,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            replicates: 1,
        }
    }

    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn validate(&self, data: &DataMatrix) -> Result<()> {
        data.validate()?;
        check_k(self.k, data.rows())?;
        if self.max_iterations == 0 {
            return Err(ClusterError::NonPositive {
                name: "max_iterations",
            });
        }
        if self.replicates == 0 {
            return Err(ClusterError::NonPositive { name: "replicates" });
        }
        Ok(())
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 {
        return Err(ClusterError::ZeroClusters);
    }
    if k > n {
        return Err(ClusterError::TooManyClusters { k, n });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMeansResult {
    pub assignment: HardAssignment,
    pub centroids: CentroidSet,
    /// Within-cluster sums of squared point-to-centroid distances.
    pub per_cluster_sumd: Vec<f64>,
    pub total_sumd: f64,
    pub iterations: usize,
    pub converged: bool,
    pub replicate_index: usize,
    /// Objective after each assignment pass.
    pub objective_history: Vec<f64>,
    /// Number of empty-cluster repairs performed over the run.
    pub repairs: usize,
}

/// Samples `k` distinct rows uniformly, in sampled order.
pub fn init_centroids(data: &DataMatrix, k: usize, rng: &mut RandomStream) -> Result<CentroidSet> {
    check_k(k, data.rows())?;
    let picks = rng.sample_indices(data.rows(), k);
    let mut values = Vec::with_capacity(k * data.cols());
    for i in picks {
        values.extend_from_slice(data.row(i));
    }
    CentroidSet::new(k, data.cols(), values)
}

/// Nearest-centroid labels (lowest index on ties) and the minimized distances.
pub fn assign_points(
    data: &DataMatrix,
    centroids: &CentroidSet,
) -> Result<(HardAssignment, Vec<f64>)> {
    centroids.check_against(data)?;
    let mut labels = Vec::with_capacity(data.rows());
    let mut dists = Vec::with_capacity(data.rows());
    for x in data.iter_rows() {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (j, c) in centroids.iter().enumerate() {
            let d = sq_dist(x, c);
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        labels.push(best);
        dists.push(best_d);
    }
    Ok((HardAssignment::new(labels, centroids.len())?, dists))
}

/// Output of [`recompute_centroids`].
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidUpdate {
    pub centroids: CentroidSet,
    /// The input assignment with repaired points moved to their new clusters.
    pub assignment: HardAssignment,
    /// Indices of clusters that were empty and received a singleton.
    pub repaired_clusters: Vec<usize>,
}

/// Cluster means, repairing any empty cluster with a singleton.
pub fn recompute_centroids(data: &DataMatrix, assignment: &HardAssignment) -> Result<CentroidUpdate> {
    if assignment.len() != data.rows() {
        return Err(ClusterError::DimensionMismatch {
            expected: data.rows(),
            got: assignment.len(),
        });
    }
    let k = assignment.k();
    check_k(k, data.rows())?;
    let mut assignment = assignment.clone();
    let mut repaired = Vec::new();
    let mut moved = vec![false; data.rows()];

    let mut means = cluster_means(data, &assignment);
    let mut sizes = assignment.cluster_sizes();
    for j in 0..k {
        if sizes[j] != 0 {
            continue;
        }
        let mut donor: Option<(usize, f64)> = None;
        for (i, x) in data.iter_rows().enumerate() {
            let l = assignment.labels()[i];
            if moved[i] || sizes[l] < 2 {
                continue;
            }
            let d = sq_dist(x, &means[l * data.cols()..(l + 1) * data.cols()]);
            if donor.is_none_or(|(_, best)| d > best) {
                donor = Some((i, d));
            }
        }
        // k <= n guarantees a cluster with two or more members while one is empty
        let (i, _) = donor.expect("an empty cluster implies a multi-member cluster");
        let old = assignment.labels()[i];
        assignment.relabel(i, j);
        moved[i] = true;
        sizes[old] -= 1;
        sizes[j] = 1;
        repaired.push(j);
        means = cluster_means(data, &assignment);
    }

    Ok(CentroidUpdate {
        centroids: CentroidSet::new(k, data.cols(), means)?,
        assignment,
        repaired_clusters: repaired,
    })
}

/// Flat `k x d` means; rows of empty clusters are left at zero.
fn cluster_means(data: &DataMatrix, assignment: &HardAssignment) -> Vec<f64> {
    let d = data.cols();
    let k = assignment.k();
    let mut sums = vec![0.0; k * d];
    let mut counts = vec![0usize; k];
    for (x, &l) in data.iter_rows().zip(assignment.labels()) {
        counts[l] += 1;
        for (s, v) in sums[l * d..(l + 1) * d].iter_mut().zip(x) {
            *s += v;
        }
    }
    for (j, &count) in counts.iter().enumerate() {
        if count > 0 {
            for s in &mut sums[j * d..(j + 1) * d] {
                *s /= count as f64;
            }
        }
    }
    sums
}

/// `Σ_j Σ_{i in cluster j} ‖x_i − c_j‖²`.
pub fn kmeans_objective(
    data: &DataMatrix,
    assignment: &HardAssignment,
    centroids: &CentroidSet,
) -> Result<f64> {
    Ok(per_cluster_sumd(data, assignment, centroids)?.iter().sum())
}

pub fn per_cluster_sumd(
    data: &DataMatrix,
    assignment: &HardAssignment,
    centroids: &CentroidSet,
) -> Result<Vec<f64>> {
    centroids.check_against(data)?;
    if assignment.len() != data.rows() {
        return Err(ClusterError::DimensionMismatch {
            expected: data.rows(),
            got: assignment.len(),
        });
    }
    if assignment.k() != centroids.len() {
        return Err(ClusterError::DimensionMismatch {
            expected: centroids.len(),
            got: assignment.k(),
        });
    }
    let mut sums = vec![0.0; centroids.len()];
    for (x, &l) in data.iter_rows().zip(assignment.labels()) {
        sums[l] += sq_dist(x, centroids.center(l));
    }
    Ok(sums)
}

/// One K-means run from sampled initial centroids.
pub fn run_kmeans_once(
    data: &DataMatrix,
    config: &KMeansConfig,
    rng: &mut RandomStream,
) -> Result<KMeansResult> {
    config.validate(data)?;
    let initial = init_centroids(data, config.k, rng)?;
    lloyd(data, initial, config.max_iterations)
}

/// Lloyd iterations from caller-supplied centroids.
pub fn run_kmeans_from(
    data: &DataMatrix,
    initial: CentroidSet,
    max_iterations: usize,
) -> Result<KMeansResult> {
    data.validate()?;
    check_k(initial.len(), data.rows())?;
    if max_iterations == 0 {
        return Err(ClusterError::NonPositive {
            name: "max_iterations",
        });
    }
    lloyd(data, initial, max_iterations)
}

fn lloyd(data: &DataMatrix, initial: CentroidSet, max_iterations: usize) -> Result<KMeansResult> {
    let mut centroids = initial;
    let mut previous: Option<HardAssignment> = None;
    let mut history = Vec::new();
    let mut repairs = 0;

    for iteration in 1..=max_iterations {
        let (assignment, _) = assign_points(data, &centroids)?;
        let per_cluster = per_cluster_sumd(data, &assignment, &centroids)?;
        history.push(per_cluster.iter().sum());

        let converged = previous.as_ref() == Some(&assignment);
        if converged || iteration == max_iterations {
            return Ok(KMeansResult {
                total_sumd: per_cluster.iter().sum(),
                per_cluster_sumd: per_cluster,
                assignment,
                centroids,
                iterations: iteration,
                converged,
                replicate_index: 0,
                objective_history: history,
                repairs,
            });
        }

        let update = recompute_centroids(data, &assignment)?;
        repairs += update.repaired_clusters.len();
        centroids = update.centroids;
        previous = Some(update.assignment);
    }
    unreachable!("max_iterations >= 1 returns inside the loop")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicatedKMeans {
    pub best: KMeansResult,
    /// Every replicate in replicate order.
    pub all: Vec<KMeansResult>,
}

/// Runs `config.replicates` independent restarts; replicate `r` draws from
/// `rng.derive(r)`. The best run has the smallest `total_sumd`, lowest
/// replicate index on ties.
pub fn run_kmeans_replicated(
    data: &DataMatrix,
    config: &KMeansConfig,
    rng: &RandomStream,
) -> Result<ReplicatedKMeans> {
    config.validate(data)?;
    let mut all = Vec::with_capacity(config.replicates);
    for r in 0..config.replicates {
        let mut stream = rng.derive(r as u64);
        let mut result = run_kmeans_once(data, config, &mut stream)?;
        result.replicate_index = r;
        all.push(result);
    }
    let best = select_best(&all).clone();
    Ok(ReplicatedKMeans { best, all })
}

fn select_best(runs: &[KMeansResult]) -> &KMeansResult {
    runs.iter()
        .min_by(|a, b| {
            a.total_sumd
                .total_cmp(&b.total_sumd)
                .then(a.replicate_index.cmp(&b.replicate_index))
        })
        .expect("at least one replicate")
}

impl ReplicatedKMeans {
    /// Replicate lines in the familiar display format.
    pub fn transcript(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .all
            .iter()
            .map(|r| {
                format!(
                    "Replicate {}, {} iterations, total sum of distances = {:.4}.",
                    r.replicate_index + 1,
                    r.iterations,
                    r.total_sumd
                )
            })
            .collect();
        lines.push(format!(
            "Best total sum of distances = {:.4}",
            self.best.total_sumd
        ));
        lines
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> DataMatrix {
        DataMatrix::from_column(&[0.0, 1.0, 9.0, 10.0])
    }

    #[test]
    fn init_is_permutation_when_k_equals_n() {
        let data = line();
        let c = init_centroids(&data, 4, &mut RandomStream::new(1)).unwrap();
        let mut v = c.values().to_vec();
        v.sort_by(f64::total_cmp);
        assert_eq!(v, vec![0.0, 1.0, 9.0, 10.0]);
    }

    #[test]
    fn init_single_and_deterministic() {
        let data = line();
        let c = init_centroids(&data, 1, &mut RandomStream::new(8)).unwrap();
        assert!(data.values().contains(&c.center(0)[0]));
        let a = init_centroids(&data, 3, &mut RandomStream::new(8)).unwrap();
        let b = init_centroids(&data, 3, &mut RandomStream::new(8)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn init_errors() {
        let data = line();
        assert!(matches!(
            init_centroids(&data, 5, &mut RandomStream::new(0)),
            Err(ClusterError::TooManyClusters { k: 5, n: 4 })
        ));
        assert!(matches!(
            init_centroids(&data, 0, &mut RandomStream::new(0)),
            Err(ClusterError::ZeroClusters)
        ));
        let err = init_centroids(&data, 5, &mut RandomStream::new(0)).unwrap_err();
        assert!(err.to_string().contains("more clusters than points"));
    }

    #[test]
    fn assign_examples() {
        let c = CentroidSet::from_rows(&[[0.5], [9.5]]).unwrap();
        let (a, d) = assign_points(&line(), &c).unwrap();
        assert_eq!(a.labels(), &[0, 0, 1, 1]);
        assert_eq!(d, vec![0.25; 4]);

        let single = CentroidSet::from_rows(&[[3.0]]).unwrap();
        assert_eq!(assign_points(&line(), &single).unwrap().0.labels(), &[0; 4]);

        let tie = CentroidSet::from_rows(&[[4.0], [6.0]]).unwrap();
        let (a, _) = assign_points(&DataMatrix::from_column(&[5.0]), &tie).unwrap();
        assert_eq!(a.labels(), &[0]);
    }

    #[test]
    fn assign_dimension_mismatch() {
        let c = CentroidSet::from_rows(&[[0.0, 1.0]]).unwrap();
        assert!(assign_points(&line(), &c).is_err());
    }

    #[test]
    fn recompute_examples() {
        let a = HardAssignment::new(vec![0, 0, 1, 1], 2).unwrap();
        let up = recompute_centroids(&line(), &a).unwrap();
        assert_eq!(up.centroids.values(), &[0.5, 9.5]);
        assert!(up.repaired_clusters.is_empty());

        let identity = HardAssignment::new(vec![0, 1, 2, 3], 4).unwrap();
        let up = recompute_centroids(&line(), &identity).unwrap();
        assert_eq!(up.centroids.values(), line().values());
    }

    #[test]
    fn empty_cluster_takes_farthest_point() {
        let a = HardAssignment::new(vec![0, 0, 0, 0], 2).unwrap();
        let up = recompute_centroids(&line(), &a).unwrap();
        assert_eq!(up.repaired_clusters, vec![1]);
        // mean is 5; points 0 and 10 tie at distance 25, lowest index wins
        assert_eq!(up.assignment.labels(), &[1, 0, 0, 0]);
        assert_eq!(up.centroids.center(1), &[0.0]);
        assert_eq!(up.centroids.center(0), &[20.0 / 3.0]);
    }

    #[test]
    fn repair_handles_several_empty_clusters() {
        let data = DataMatrix::from_column(&[0.0, 1.0, 2.0, 30.0, 31.0]);
        let a = HardAssignment::new(vec![0; 5], 3).unwrap();
        let up = recompute_centroids(&data, &a).unwrap();
        assert_eq!(up.repaired_clusters, vec![1, 2]);
        assert_eq!(up.assignment.cluster_sizes(), vec![3, 1, 1]);
        assert!(up.centroids.values().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn objective_examples() {
        let a = HardAssignment::new(vec![0, 0, 1, 1], 2).unwrap();
        let c = CentroidSet::from_rows(&[[0.5], [9.5]]).unwrap();
        assert_eq!(kmeans_objective(&line(), &a, &c).unwrap(), 1.0);

        let a = HardAssignment::new(vec![0, 1, 2, 3], 4).unwrap();
        let c = CentroidSet::from_rows(&[[0.0], [1.0], [9.0], [10.0]]).unwrap();
        assert_eq!(kmeans_objective(&line(), &a, &c).unwrap(), 0.0);

        let data = DataMatrix::from_column(&[0.0, 2.0]);
        let a = HardAssignment::new(vec![0, 0], 1).unwrap();
        let c = CentroidSet::from_rows(&[[1.0]]).unwrap();
        assert_eq!(kmeans_objective(&data, &a, &c).unwrap(), 2.0);
    }

    #[test]
    fn once_reaches_optimum_on_line() {
        for seed in 0..50 {
            let r = run_kmeans_once(&line(), &KMeansConfig::new(2), &mut RandomStream::new(seed)).unwrap();
            assert_eq!(r.total_sumd, 1.0, "seed {seed}");
            assert!(r.converged);
        }
    }

    #[test]
    fn once_k_equals_n_and_k_one() {
        let r = run_kmeans_once(&line(), &KMeansConfig::new(4), &mut RandomStream::new(2)).unwrap();
        assert_eq!(r.total_sumd, 0.0);
        assert!(r.converged && r.iterations <= 2);

        let r = run_kmeans_once(&line(), &KMeansConfig::new(1), &mut RandomStream::new(2)).unwrap();
        assert_eq!(r.centroids.values(), &[5.0]);
        assert!(r.converged && r.iterations <= 2);
    }

    #[test]
    fn max_iterations_guard() {
        let data = DataMatrix::from_column(&[0.0, 1.0, 2.0, 5.0, 9.0, 10.0, 11.0, 20.0]);
        let cfg = KMeansConfig::new(3).with_max_iterations(1);
        let r = run_kmeans_once(&data, &cfg, &mut RandomStream::new(4)).unwrap();
        assert_eq!(r.iterations, 1);
        assert!(!r.converged);
        let (again, _) = assign_points(&data, &r.centroids).unwrap();
        assert_eq!(again, r.assignment);
    }

    #[test]
    fn replicated_selection_and_ties() {
        let r = run_kmeans_replicated(&line(), &KMeansConfig::new(2), &RandomStream::new(1)).unwrap();
        assert_eq!(r.all.len(), 1);
        assert_eq!(r.best, r.all[0]);

        // every replicate reaches 1.0, so the first one must win
        let cfg = KMeansConfig::new(2).with_replicates(4);
        let r = run_kmeans_replicated(&line(), &cfg, &RandomStream::new(1)).unwrap();
        assert!(r.all.iter().all(|x| x.total_sumd == 1.0));
        assert_eq!(r.best.replicate_index, 0);
        assert_eq!(
            r.all.iter().map(|x| x.replicate_index).collect::<Vec<_>>(),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn transcript_format() {
        let cfg = KMeansConfig::new(2).with_replicates(2);
        let r = run_kmeans_replicated(&line(), &cfg, &RandomStream::new(1)).unwrap();
        let t = r.transcript();
        assert_eq!(t.len(), 3);
        assert!(t[0].starts_with("Replicate 1, "));
        assert!(t[0].ends_with("total sum of distances = 1.0000."));
        assert_eq!(t[2], "Best total sum of distances = 1.0000");
    }

    #[test]
    fn config_validation() {
        let data = line();
        assert!(KMeansConfig::new(2).with_replicates(0).validate(&data).is_err());
        assert!(KMeansConfig::new(2).with_max_iterations(0).validate(&data).is_err());
        assert!(KMeansConfig::new(5).validate(&data).is_err());
        let bad = DataMatrix::new(1, 1, vec![f64::INFINITY]).unwrap();
        assert!(matches!(
            KMeansConfig::new(1).validate(&bad),
            Err(ClusterError::InvalidData(_))
        ));
    }
}
