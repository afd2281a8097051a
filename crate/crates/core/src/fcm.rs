//! Fuzzy C-means by alternating optimization.
//!
//! Each iteration computes centers from the current membership matrix,
//! then a new membership matrix from those centers:
//!
//! ```text
//! c_j  = Σ_i u_ij^m x_i / Σ_i u_ij^m
//! u_ij = 1 / Σ_k (‖x_i − c_j‖ / ‖x_i − c_k‖)^(2/(m−1))
//! ```
//!
//! The norm ratio is evaluated on squared distances raised to `1/(m−1)`,
//! which is the same quantity without a square-root pass. A point that
//! coincides with one or more centers splits its membership equally among
//! those centers.
//!
//! `objective_history[k]` is `J_m` evaluated on the membership produced in
//! iteration `k` against the centers that produced it. The returned centers
//! are recomputed from the final membership so that the pair satisfies the
//! center formula exactly.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{ClusterError, Result};
use crate::model::{sq_dist, CentroidSet, DataMatrix, MembershipMatrix};
use crate::rng::RandomStream;

/// When to stop iterating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopCriterion {
    /// `max_ij |u_ij(k+1) − u_ij(k)| < ε`
    #[default]
    MembershipDelta,
    /// `|J_m(k) − J_m(k−1)| < ε`
    ObjectiveImprovement,
}

impl fmt::Display for StopCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopCriterion::MembershipDelta => "membership-delta",
            StopCriterion::ObjectiveImprovement => "objective-improvement",
        })
    }
}

impl FromStr for StopCriterion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.replace('_', "-").as_str() {
            "membership-delta" => Ok(StopCriterion::MembershipDelta),
            "objective-improvement" => Ok(StopCriterion::ObjectiveImprovement),
            other => Err(format!(
                "unknown criterion `{other}` (expected membership-delta or objective-improvement)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FcmConfig {
    pub c: usize,
    pub m: f64,
    pub epsilon: f64,
    pub max_iterations: usize,
    pub criterion: StopCriterion,
}

impl FcmConfig {
    /// Defaults: `m = 2.0`, `ε = 1e-6`, 100 iterations, membership delta.
    pub fn new(c: usize) -> Self {
        FcmConfig {
            c,
            m: 2.0,
            epsilon: 1e-6,
            max_iterations: 100,
            criterion: StopCriterion::MembershipDelta,
        }
    }

    pub fn with_fuzzifier(mut self, m: f64) -> Self {
        self.m = m;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_criterion(mut self, criterion: StopCriterion) -> Self {
        self.criterion = criterion;
        self
    }

    pub fn validate(&self, data: &DataMatrix) -> Result<()> {
        if self.c < 2 {
            return Err(ClusterError::FcmNeedsTwoClusters);
        }
        check_fuzzifier(self.m)?;
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(ClusterError::InvalidEpsilon(self.epsilon));
        }
        if self.max_iterations == 0 {
            return Err(ClusterError::NonPositive {
                name: "max_iterations",
            });
        }
        data.validate()?;
        if self.c > data.rows() {
            return Err(ClusterError::TooManyClusters {
                k: self.c,
                n: data.rows(),
            });
        }
        Ok(())
    }
}

fn check_fuzzifier(m: f64) -> Result<()> {
    if m.is_finite() && m > 1.0 {
        Ok(())
    } else {
        Err(ClusterError::InvalidFuzzifier(m))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FcmResult {
    pub centers: CentroidSet,
    pub membership: MembershipMatrix,
    pub objective_history: Vec<f64>,
    /// `J_m` of the returned (membership, centers) pair.
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Random row-stochastic start: each row is `c` draws from `(0, 1]`,
/// normalized to sum 1.
pub fn init_membership(n: usize, c: usize, rng: &mut RandomStream) -> Result<MembershipMatrix> {
    if c < 2 {
        return Err(ClusterError::FcmNeedsTwoClusters);
    }
    if n == 0 {
        return Err(ClusterError::NoDataRows);
    }
    let mut values = Vec::with_capacity(n * c);
    let mut row = vec![0.0; c];
    for _ in 0..n {
        for v in row.iter_mut() {
            *v = 1.0 - rng.next_f64();
        }
        let total: f64 = row.iter().sum();
        values.extend(row.iter().map(|v| v / total));
    }
    Ok(MembershipMatrix::from_raw(n, c, values))
}

/// `c_j = Σ_i u_ij^m x_i / Σ_i u_ij^m`.
pub fn update_centers(data: &DataMatrix, u: &MembershipMatrix, m: f64) -> Result<CentroidSet> {
    check_fuzzifier(m)?;
    if u.rows() != data.rows() {
        return Err(ClusterError::DimensionMismatch {
            expected: data.rows(),
            got: u.rows(),
        });
    }
    let (c, d) = (u.clusters(), data.cols());
    let mut sums = vec![0.0; c * d];
    let mut weights = vec![0.0; c];
    for (x, row) in data.iter_rows().zip(u.iter_rows()) {
        for (j, &uij) in row.iter().enumerate() {
            let w = uij.powf(m);
            weights[j] += w;
            for (s, v) in sums[j * d..(j + 1) * d].iter_mut().zip(x) {
                *s += w * v;
            }
        }
    }
    for (j, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            return Err(ClusterError::DegenerateClusterWeight { cluster: j });
        }
        for s in &mut sums[j * d..(j + 1) * d] {
            *s /= w;
        }
    }
    CentroidSet::new(c, d, sums)
}

/// Membership of every point given fixed centers.
pub fn update_membership(
    data: &DataMatrix,
    centers: &CentroidSet,
    m: f64,
) -> Result<MembershipMatrix> {
    check_fuzzifier(m)?;
    centers.check_against(data)?;
    let c = centers.len();
    if c < 2 {
        return Err(ClusterError::FcmNeedsTwoClusters);
    }
    let exponent = 1.0 / (m - 1.0);
    let mut values = Vec::with_capacity(data.rows() * c);
    let mut d2 = vec![0.0; c];
    for x in data.iter_rows() {
        for (dist, center) in d2.iter_mut().zip(centers.iter()) {
            *dist = sq_dist(x, center);
        }
        let coincident = d2.iter().filter(|&&v| v == 0.0).count();
        if coincident > 0 {
            let share = 1.0 / coincident as f64;
            values.extend(d2.iter().map(|&v| if v == 0.0 { share } else { 0.0 }));
            continue;
        }
        for &dj in &d2 {
            let denom: f64 = d2.iter().map(|&dk| (dj / dk).powf(exponent)).sum();
            values.push(1.0 / denom);
        }
    }
    Ok(MembershipMatrix::from_raw(data.rows(), c, values))
}

/// `J_m = Σ_i Σ_j u_ij^m ‖x_i − c_j‖²`.
pub fn fcm_objective(
    data: &DataMatrix,
    u: &MembershipMatrix,
    centers: &CentroidSet,
    m: f64,
) -> Result<f64> {
    centers.check_against(data)?;
    if u.rows() != data.rows() || u.clusters() != centers.len() {
        return Err(ClusterError::DimensionMismatch {
            expected: data.rows() * centers.len(),
            got: u.rows() * u.clusters(),
        });
    }
    let mut total = 0.0;
    for (x, row) in data.iter_rows().zip(u.iter_rows()) {
        for (&uij, center) in row.iter().zip(centers.iter()) {
            total += uij.powf(m) * sq_dist(x, center);
        }
    }
    Ok(total)
}

/// FCM from a random initial membership drawn from `rng`.
pub fn run_fcm(data: &DataMatrix, config: &FcmConfig, rng: &mut RandomStream) -> Result<FcmResult> {
    config.validate(data)?;
    let initial = init_membership(data.rows(), config.c, rng)?;
    run_fcm_from(data, config, initial)
}

/// FCM from a caller-supplied initial membership matrix.
pub fn run_fcm_from(
    data: &DataMatrix,
    config: &FcmConfig,
    initial: MembershipMatrix,
) -> Result<FcmResult> {
    config.validate(data)?;
    if initial.rows() != data.rows() || initial.clusters() != config.c {
        return Err(ClusterError::DimensionMismatch {
            expected: data.rows() * config.c,
            got: initial.rows() * initial.clusters(),
        });
    }
    let m = config.m;
    let mut u = initial;
    let mut history: Vec<f64> = Vec::new();
    let mut converged = false;

    for _ in 0..config.max_iterations {
        let centers = update_centers(data, &u, m)?;
        let next = update_membership(data, &centers, m)?;
        let objective = fcm_objective(data, &next, &centers, m)?;
        let stop = match config.criterion {
            StopCriterion::MembershipDelta => next.max_abs_diff(&u) < config.epsilon,
            StopCriterion::ObjectiveImprovement => history
                .last()
                .is_some_and(|prev| (objective - prev).abs() < config.epsilon),
        };
        history.push(objective);
        u = next;
        if stop {
            converged = true;
            break;
        }
    }

    let centers = update_centers(data, &u, m)?;
    let objective = fcm_objective(data, &u, &centers, m)?;
    Ok(FcmResult {
        centers,
        membership: u,
        iterations: history.len(),
        objective_history: history,
        objective,
        converged,
    })
}
