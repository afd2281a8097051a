//! Abstract operation-count model for the two algorithms.
//!
//! K-means costs `n·c·d·i` units. FCM costs `n·c²·d·i` units: every
//! membership entry sums a ratio over all `c` clusters. The often-quoted
//! `O(ncd²i)` form for FCM does not grow faster than K-means in `c` at all,
//! so it cannot produce the reference table below; the `c²` form does,
//! row for row:
//!
//! | c | K-means | FCM    |
//! |---|---------|--------|
//! | 1 | 22400   | 22400  |
//! | 2 | 44800   | 89600  |
//! | 3 | 67200   | 201600 |
//! | 4 | 89600   | 358400 |
//!
//! (`n = 200`, `d = 4`, `i = 28`.) Counts are units of the model, not
//! measured instruction counts.

use serde::Serialize;

use crate::error::{ClusterError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComplexityInputs {
    pub n: u64,
    pub c: u64,
    pub d: u64,
    pub i: u64,
}

impl ComplexityInputs {
    pub fn new(n: u64, c: u64, d: u64, i: u64) -> Result<Self> {
        for (name, v) in [("n", n), ("c", c), ("d", d), ("i", i)] {
            if v == 0 {
                return Err(ClusterError::NonPositive { name });
            }
        }
        Ok(ComplexityInputs { n, c, d, i })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComplexityRow {
    /// 1-based row number.
    pub experiment_index: usize,
    pub clusters: u64,
    pub kmeans_ops: u64,
    pub fcm_ops: u64,
}

fn product(factors: &[u64]) -> Result<u64> {
    factors
        .iter()
        .try_fold(1u64, |acc, &f| acc.checked_mul(f))
        .ok_or(ClusterError::Overflow)
}

pub fn kmeans_op_count(inputs: &ComplexityInputs) -> Result<u64> {
    product(&[inputs.n, inputs.c, inputs.d, inputs.i])
}

pub fn fcm_op_count(inputs: &ComplexityInputs) -> Result<u64> {
    product(&[inputs.n, inputs.c, inputs.c, inputs.d, inputs.i])
}

/// One row per entry of `c_values`, in order.
pub fn complexity_table(n: u64, d: u64, i: u64, c_values: &[u64]) -> Result<Vec<ComplexityRow>> {
    if c_values.is_empty() {
        return Err(ClusterError::NonPositive {
            name: "cluster count list length",
        });
    }
    c_values
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            let inputs = ComplexityInputs::new(n, c, d, i)?;
            Ok(ComplexityRow {
                experiment_index: idx + 1,
                clusters: c,
                kmeans_ops: kmeans_op_count(&inputs)?,
                fcm_ops: fcm_op_count(&inputs)?,
            })
        })
        .collect()
}

/// Tab-separated rendering with the familiar column titles.
pub fn render_table(rows: &[ComplexityRow]) -> String {
    let mut out = String::from("Exp No.\tNo. Of Clusters\tK-Means Complexity\tFCM Complexity\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            r.experiment_index, r.clusters, r.kmeans_ops, r.fcm_ops
        ));
    }
    out
}
