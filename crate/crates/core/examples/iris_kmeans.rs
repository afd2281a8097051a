//! Replicated K-means on Iris, printing the per-replicate transcript.
//!
//! `cargo run --example iris_kmeans -- [k] [seed]`

use clusterbench::kmeans::{run_kmeans_replicated, KMeansConfig};
use clusterbench::{ingest, RandomStream};

fn main() -> clusterbench::Result<()> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);

    let iris = ingest::iris()?;
    let config = KMeansConfig::new(k).with_replicates(5);
    let result = run_kmeans_replicated(&iris.data, &config, &RandomStream::new(seed))?;
    for line in result.transcript() {
        println!("{line}");
    }

    let best = &result.best;
    println!("\ncluster sizes {:?}", best.assignment.cluster_sizes());
    for (j, center) in best.centroids.iter().enumerate() {
        println!("centroid {j}: {center:.3?}  (within-cluster sum {:.4})", best.per_cluster_sumd[j]);
    }
    Ok(())
}
