//! Operation-count model for both algorithms.
//!
//! `cargo run --example complexity_table -- [n] [d] [i]`

use clusterbench::complexity::{complexity_table, render_table};

fn main() -> clusterbench::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().expect("positive integer"));
    let n = args.next().unwrap_or(200);
    let d = args.next().unwrap_or(4);
    let i = args.next().unwrap_or(28);

    let rows = complexity_table(n, d, i, &[1, 2, 3, 4, 8, 16])?;
    print!("{}", render_table(&rows));
    for r in &rows {
        println!("c = {:2}: FCM costs {}x K-means", r.clusters, r.fcm_ops / r.kmeans_ops);
    }
    Ok(())
}
