//! Independent reference computations used by the integration tests.
//! Nothing here calls into the library's algorithm code.

#![allow(dead_code)]

use clusterbench::{DataMatrix, RandomStream};

/// Minimum K-means objective over all 2-partitions with both parts
/// nonempty, by enumeration. Point `n-1` always stays in the second part to skip
/// mirror images.
pub fn brute_force_two_partition(points: &[Vec<f64>]) -> f64 {
    let n = points.len();
    assert!((2..=20).contains(&n));
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << (n - 1)) {
        let mut part_a = Vec::new();
        let mut part_b = Vec::new();
        for (i, p) in points.iter().enumerate() {
            if mask >> i & 1 == 1 {
                part_a.push(p);
            } else {
                part_b.push(p);
            }
        }
        let cost = sse(&part_a) + sse(&part_b);
        if cost < best {
            best = cost;
        }
    }
    best
}

fn sse(members: &[&Vec<f64>]) -> f64 {
    let d = members[0].len();
    let mut mean = vec![0.0; d];
    for p in members {
        for t in 0..d {
            mean[t] += p[t];
        }
    }
    for v in &mut mean {
        *v /= members.len() as f64;
    }
    members
        .iter()
        .map(|p| p.iter().zip(&mean).map(|(a, b)| (a - b).powi(2)).sum::<f64>())
        .sum()
}

/// Centers straight from `c_j = Σ u^m x / Σ u^m`.
pub fn direct_centers(data: &[Vec<f64>], u: &[Vec<f64>], m: f64) -> Vec<Vec<f64>> {
    let c = u[0].len();
    let d = data[0].len();
    (0..c)
        .map(|j| {
            let weight: f64 = u.iter().map(|row| row[j].powf(m)).sum();
            (0..d)
                .map(|t| {
                    data.iter()
                        .zip(u)
                        .map(|(x, row)| row[j].powf(m) * x[t])
                        .sum::<f64>()
                        / weight
                })
                .collect()
        })
        .collect()
}

fn norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Memberships straight from `u_ij = 1 / Σ_k (‖x_i − c_j‖ / ‖x_i − c_k‖)^(2/(m−1))`.
/// Assumes no point coincides with a center.
pub fn direct_membership(data: &[Vec<f64>], centers: &[Vec<f64>], m: f64) -> Vec<Vec<f64>> {
    let p = 2.0 / (m - 1.0);
    data.iter()
        .map(|x| {
            (0..centers.len())
                .map(|j| {
                    let dj = norm(x, &centers[j]);
                    1.0 / centers
                        .iter()
                        .map(|ck| (dj / norm(x, ck)).powf(p))
                        .sum::<f64>()
                })
                .collect()
        })
        .collect()
}

/// Uniform random points in `[0, scale)^d`.
pub fn random_points(rng: &mut RandomStream, n: usize, d: usize, scale: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..d).map(|_| scale * rng.next_f64()).collect())
        .collect()
}

pub fn to_matrix(points: &[Vec<f64>]) -> DataMatrix {
    DataMatrix::from_rows(points).unwrap()
}

pub fn rows_of(values: &[f64], width: usize) -> Vec<Vec<f64>> {
    values.chunks(width).map(<[f64]>::to_vec).collect()
}

pub fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
