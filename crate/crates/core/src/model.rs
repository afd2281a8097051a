//! Shared domain types and the squared Euclidean distance kernel.
//!
//! Matrices are stored row-major in a flat `Vec<f64>`; row `i` of a
//! [`DataMatrix`] is the observation `x_i`.

use std::fmt;

use serde::Serialize;

use crate::error::{ClusterError, Result};

/// An `n x d` matrix of observations.
///
/// Construction only checks the shape. Finiteness and the `n >= 1`,
/// `d >= 1` requirements are checked by [`validate_data`], which every
/// algorithm entry point calls.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        let expected = rows * cols;
        if values.len() != expected {
            return Err(ClusterError::ShapeMismatch {
                rows,
                cols,
                expected,
                got: values.len(),
            });
        }
        Ok(DataMatrix { rows, cols, values })
    }

    /// Builds a matrix from row vectors; all rows must share one length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(ClusterError::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Ok(DataMatrix {
            rows: rows.len(),
            cols,
            values,
        })
    }

    /// One-dimensional data, one observation per value.
    pub fn from_column(values: &[f64]) -> Self {
        DataMatrix {
            rows: values.len(),
            cols: 1,
            values: values.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        // chunks_exact(0) panics; a zero-column matrix has no meaningful rows
        self.values.chunks_exact(self.cols.max(1)).take(self.rows)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn validate(&self) -> Result<()> {
        let violations = validate_data(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ClusterError::InvalidData(violations))
        }
    }
}

/// One failed `DataMatrix` invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoRows,
    NoColumns,
    NonFinite { row: usize, column: usize, value: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoRows => write!(f, "n ≥ 1 required"),
            Violation::NoColumns => write!(f, "d ≥ 1 required"),
            Violation::NonFinite { row, column, value } => {
                write!(f, "row {row}, column {column}: non-finite value {value}")
            }
        }
    }
}

/// Checks every `DataMatrix` invariant and reports all failures.
pub fn validate_data(data: &DataMatrix) -> Vec<Violation> {
    let mut out = Vec::new();
    if data.rows == 0 {
        out.push(Violation::NoRows);
    }
    if data.cols == 0 {
        out.push(Violation::NoColumns);
    }
    for (i, row) in data.iter_rows().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                out.push(Violation::NonFinite {
                    row: i,
                    column: j,
                    value: v,
                });
            }
        }
    }
    out
}

/// `k` cluster centers of dimension `d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentroidSet {
    count: usize,
    dim: usize,
    values: Vec<f64>,
}

impl CentroidSet {
    pub fn new(count: usize, dim: usize, values: Vec<f64>) -> Result<Self> {
        if count == 0 {
            return Err(ClusterError::ZeroClusters);
        }
        let expected = count * dim;
        if values.len() != expected {
            return Err(ClusterError::ShapeMismatch {
                rows: count,
                cols: dim,
                expected,
                got: values.len(),
            });
        }
        Ok(CentroidSet { count, dim, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = DataMatrix::from_rows(rows)?;
        CentroidSet::new(m.rows, m.cols, m.values)
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn center(&self, j: usize) -> &[f64] {
        &self.values[j * self.dim..(j + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.dim.max(1)).take(self.count)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Reorders centers so that new center `j` is old center `order[j]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.count)?;
        let mut values = Vec::with_capacity(self.values.len());
        for &j in order {
            values.extend_from_slice(self.center(j));
        }
        CentroidSet::new(self.count, self.dim, values)
    }

    pub(crate) fn check_against(&self, data: &DataMatrix) -> Result<()> {
        if self.dim != data.cols() {
            return Err(ClusterError::DimensionMismatch {
                expected: data.cols(),
                got: self.dim,
            });
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(ClusterError::NonFiniteCentroid);
        }
        Ok(())
    }
}

/// Hard cluster labels, one per observation, each in `[0, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HardAssignment {
    k: usize,
    labels: Vec<usize>,
}

impl HardAssignment {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(ClusterError::ZeroClusters);
        }
        if let Some(&label) = labels.iter().find(|&&l| l >= k) {
            return Err(ClusterError::LabelOutOfRange { label, k });
        }
        Ok(HardAssignment { k, labels })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub(crate) fn relabel(&mut self, point: usize, cluster: usize) {
        debug_assert!(cluster < self.k);
        self.labels[point] = cluster;
    }
}

/// Row-stochastic `n x c` fuzzy membership matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipMatrix {
    rows: usize,
    clusters: usize,
    values: Vec<f64>,
}

/// Allowed deviation of a membership row sum from 1.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

impl MembershipMatrix {
    /// Validates `c >= 2`, entries in `[0, 1]` and unit row sums.
    pub fn new(rows: usize, clusters: usize, values: Vec<f64>) -> Result<Self> {
        if clusters < 2 {
            return Err(ClusterError::FcmNeedsTwoClusters);
        }
        if values.len() != rows * clusters {
            return Err(ClusterError::ShapeMismatch {
                rows,
                cols: clusters,
                expected: rows * clusters,
                got: values.len(),
            });
        }
        for (i, row) in values.chunks_exact(clusters).enumerate() {
            if let Some(j) = row.iter().position(|u| !(0.0..=1.0).contains(u)) {
                return Err(ClusterError::InvalidMembership(format!(
                    "entry ({i}, {j}) = {} outside [0, 1]",
                    row[j]
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(ClusterError::InvalidMembership(format!(
                    "row {i} sums to {sum}"
                )));
            }
        }
        Ok(MembershipMatrix {
            rows,
            clusters,
            values,
        })
    }

    pub(crate) fn from_raw(rows: usize, clusters: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), rows * clusters);
        MembershipMatrix {
            rows,
            clusters,
            values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn clusters(&self) -> usize {
        self.clusters
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.clusters + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.clusters..(i + 1) * self.clusters]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.clusters)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &MembershipMatrix) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Index of the largest membership in each row (lowest index on ties).
    pub fn defuzzify(&self) -> Vec<usize> {
        self.iter_rows()
            .map(|row| {
                let mut best = 0;
                for (j, &u) in row.iter().enumerate() {
                    if u > row[best] {
                        best = j;
                    }
                }
                best
            })
            .collect()
    }

    /// Reorders columns so that new column `j` is old column `order[j]`.
    pub fn permuted_columns(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.clusters)?;
        let values = self
            .iter_rows()
            .flat_map(|row| order.iter().map(move |&j| row[j]))
            .collect();
        Ok(MembershipMatrix::from_raw(self.rows, self.clusters, values))
    }
}

fn check_permutation(order: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if order.len() != len {
        return Err(ClusterError::DimensionMismatch {
            expected: len,
            got: order.len(),
        });
    }
    for &j in order {
        if j >= len || std::mem::replace(&mut seen[j], true) {
            return Err(ClusterError::InvalidFeatures(format!(
                "{order:?} is not a permutation of 0..{len}"
            )));
        }
    }
    Ok(())
}

/// `Σ_t (a_t − b_t)²`, summed left to right.
pub fn squared_euclidean(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(ClusterError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(sq_dist(a, b))
}

/// Unchecked kernel used inside the iteration loops.
#[inline]
pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let t = x - y;
        acc += t * t;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn distance_examples() {
        let a = [1.7, -2.0, 0.0];
        assert_eq!(squared_euclidean(&a, &a).unwrap(), 0.0);
        assert_eq!(squared_euclidean(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 25.0);
        let d = squared_euclidean(&[5.1, 3.5, 1.4, 0.2], &[4.9, 3.0, 1.4, 0.2]).unwrap();
        assert!((d - 0.29).abs() < 1e-12, "{d}");
    }

    #[test]
    fn distance_dimension_mismatch() {
        assert!(matches!(
            squared_euclidean(&[1.0], &[1.0, 2.0]),
            Err(ClusterError::DimensionMismatch { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn validator_reports_nan_position() {
        let mut values = vec![0.0; 5 * 2];
        values[3 * 2 + 1] = f64::NAN;
        let m = DataMatrix::new(5, 2, values).unwrap();
        let v = validate_data(&m);
        assert_eq!(v.len(), 1);
        match &v[0] {
            Violation::NonFinite { row, column, .. } => assert_eq!((*row, *column), (3, 1)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(m.validate().is_err());
    }

    #[test]
    fn validator_rejects_empty() {
        let m = DataMatrix::new(0, 4, vec![]).unwrap();
        let v = validate_data(&m);
        assert_eq!(v, vec![Violation::NoRows]);
        assert_eq!(v[0].to_string(), "n ≥ 1 required");
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![3.0]];
        assert!(DataMatrix::from_rows(&rows).is_err());
    }

    #[test]
    fn membership_validation() {
        assert!(MembershipMatrix::new(1, 2, vec![0.3, 0.7]).is_ok());
        assert!(MembershipMatrix::new(1, 2, vec![0.3, 0.6]).is_err());
        assert!(MembershipMatrix::new(1, 2, vec![-0.1, 1.1]).is_err());
        assert!(matches!(
            MembershipMatrix::new(1, 1, vec![1.0]),
            Err(ClusterError::FcmNeedsTwoClusters)
        ));
    }

    #[test]
    fn assignment_rejects_out_of_range() {
        assert!(HardAssignment::new(vec![0, 2], 2).is_err());
        assert_eq!(
            HardAssignment::new(vec![0, 1, 1], 3).unwrap().cluster_sizes(),
            vec![1, 2, 0]
        );
    }

    fn vec_pair(max_dim: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
        (1..=max_dim).prop_flat_map(|d| {
            (
                prop::collection::vec(-1e3..1e3f64, d),
                prop::collection::vec(-1e3..1e3f64, d),
                prop::collection::vec(-1e3..1e3f64, d),
            )
        })
    }

    proptest! {
        #[test]
        fn distance_is_symmetric((a, b, _t) in vec_pair(8)) {
            prop_assert_eq!(sq_dist(&a, &b), sq_dist(&b, &a));
        }

        #[test]
        fn distance_is_positive_definite((a, b, _t) in vec_pair(8)) {
            prop_assert_eq!(sq_dist(&a, &a), 0.0);
            if a != b {
                prop_assert!(sq_dist(&a, &b) > 0.0);
            }
        }

        #[test]
        fn distance_translation_invariant((a, b, t) in vec_pair(8)) {
            let at: Vec<f64> = a.iter().zip(&t).map(|(x, s)| x + s).collect();
            let bt: Vec<f64> = b.iter().zip(&t).map(|(x, s)| x + s).collect();
            let d0 = sq_dist(&a, &b);
            let d1 = sq_dist(&at, &bt);
            prop_assert!((d0 - d1).abs() <= 1e-9 * d0, "{} vs {}", d0, d1);
        }
    }
}
