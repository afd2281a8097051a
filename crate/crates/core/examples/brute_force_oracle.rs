//! Checks replicated K-means against exhaustive search on small blob data.
//!
//! Every 2-partition of the points is scored; the best replicate should
//! match the minimum.

use clusterbench::ingest::{generate_blobs, BlobSpec};
use clusterbench::kmeans::{run_kmeans_replicated, KMeansConfig};
use clusterbench::RandomStream;

fn sse(part: &[&[f64]]) -> f64 {
    let d = part[0].len();
    let mean: Vec<f64> = (0..d)
        .map(|t| part.iter().map(|p| p[t]).sum::<f64>() / part.len() as f64)
        .collect();
    part.iter()
        .map(|p| p.iter().zip(&mean).map(|(a, b)| (a - b).powi(2)).sum::<f64>())
        .sum()
}

/// Point `n-1` stays in the second part so mirror images are skipped.
fn best_split(points: &[&[f64]]) -> f64 {
    let n = points.len();
    let mut best = f64::INFINITY;
    for mask in 1u32..1 << (n - 1) {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (i, p) in points.iter().enumerate() {
            if mask >> i & 1 == 1 { a.push(*p) } else { b.push(*p) }
        }
        best = best.min(sse(&a) + sse(&b));
    }
    best
}

fn main() -> clusterbench::Result<()> {
    let spec = BlobSpec {
        clusters: 2,
        points_per_cluster: 5,
        dimension: 2,
        center_box: (-10.0, 10.0),
        spread: 3.0,
    };
    let mut matched = 0;
    for seed in 0..10 {
        let blobs = generate_blobs(&spec, &mut RandomStream::new(seed))?;
        let points: Vec<&[f64]> = blobs.data.iter_rows().collect();
        let optimum = best_split(&points);
        let config = KMeansConfig::new(2).with_replicates(20);
        let found = run_kmeans_replicated(&blobs.data, &config, &RandomStream::new(seed))?.best.total_sumd;
        let ok = (found - optimum).abs() <= 1e-9 * optimum.max(1.0);
        matched += usize::from(ok);
        println!("seed {seed}: k-means {found:.6}, exhaustive {optimum:.6} {}", if ok { "ok" } else { "MISMATCH" });
    }
    println!("{matched}/10 instances reach the exhaustive optimum");
    Ok(())
}
