//! FCM on the two sepal measurements of Iris, with a text scatter plot of
//! the defuzzified clusters.

use clusterbench::fcm::{run_fcm, FcmConfig};
use clusterbench::ingest::{iris, select_features};
use clusterbench::RandomStream;

const WIDTH: usize = 60;
const HEIGHT: usize = 20;

fn main() -> clusterbench::Result<()> {
    let sepals = select_features(&iris()?, &[0, 1])?;
    let r = run_fcm(&sepals.data, &FcmConfig::new(3), &mut RandomStream::new(42))?;
    let labels = r.membership.defuzzify();

    let xs: Vec<f64> = sepals.data.iter_rows().map(|p| p[0]).collect();
    let ys: Vec<f64> = sepals.data.iter_rows().map(|p| p[1]).collect();
    let span = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi - lo)
    };
    let ((x0, dx), (y0, dy)) = (span(&xs), span(&ys));

    let mut grid = vec![vec![' '; WIDTH]; HEIGHT];
    for ((x, y), l) in xs.iter().zip(&ys).zip(&labels) {
        let col = (((x - x0) / dx) * (WIDTH - 1) as f64).round() as usize;
        let row = HEIGHT - 1 - (((y - y0) / dy) * (HEIGHT - 1) as f64).round() as usize;
        grid[row][col] = char::from(b'a' + *l as u8);
    }
    for (j, center) in r.centers.iter().enumerate() {
        let col = (((center[0] - x0) / dx) * (WIDTH - 1) as f64).round() as usize;
        let row = HEIGHT - 1 - (((center[1] - y0) / dy) * (HEIGHT - 1) as f64).round() as usize;
        grid[row][col] = char::from(b'A' + j as u8);
    }

    let names = sepals.feature_names.clone().unwrap_or_default();
    println!("{} (x) against {} (y); capitals mark centers", names[0], names[1]);
    for line in grid {
        println!("|{}|", line.into_iter().collect::<String>());
    }
    println!("objective {:.4} after {} iterations", r.objective, r.iterations);
    Ok(())
}
