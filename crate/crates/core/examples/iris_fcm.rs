//! Fuzzy C-means on Iris with both stop tests, side by side.
//!
//! `cargo run --example iris_fcm -- [c] [seed]`

use clusterbench::fcm::{run_fcm, FcmConfig, StopCriterion};
use clusterbench::{ingest, RandomStream};

fn main() -> clusterbench::Result<()> {
    let mut args = std::env::args().skip(1);
    let c: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);
    let iris = ingest::iris()?;

    for criterion in [StopCriterion::MembershipDelta, StopCriterion::ObjectiveImprovement] {
        let config = FcmConfig::new(c).with_criterion(criterion);
        let r = run_fcm(&iris.data, &config, &mut RandomStream::new(seed))?;
        println!(
            "{criterion}: {} iterations, converged {}, objective {:.6}",
            r.iterations, r.converged, r.objective
        );
        for (j, center) in r.centers.iter().enumerate() {
            println!("  center {j}: {center:.3?}");
        }
    }

    // the most ambiguous points: lowest maximum membership
    let r = run_fcm(&iris.data, &FcmConfig::new(c), &mut RandomStream::new(seed))?;
    let mut rows: Vec<(usize, f64)> = r
        .membership
        .iter_rows()
        .map(|u| u.iter().copied().fold(0.0, f64::max))
        .enumerate()
        .collect();
    rows.sort_by(|a, b| a.1.total_cmp(&b.1));
    println!("\nleast certain points:");
    for &(i, top) in rows.iter().take(5) {
        println!("  point {i:3}: max membership {top:.3}, memberships {:.3?}", r.membership.row(i));
    }
    Ok(())
}
