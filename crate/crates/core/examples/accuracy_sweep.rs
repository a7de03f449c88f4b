//! Monte Carlo sweep of the accuracy index over `k` for every skewed
//! transform, in the overlapping-normal 1D setting. Uses fewer realizations
//! than the full study so it finishes in a few seconds.
//!
//! ```bash
//! cargo run --release -p coinknn --example accuracy_sweep -- 300
//! ```

use coinknn::{run_experiment, ComparatorKind, ExperimentConfig, TransformKind};

fn main() -> coinknn::Result<()> {
    let realizations: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let ks = [1, 5, 10, 25, 50, 70, 100];

    for kind in TransformKind::skewed() {
        let cfg = ExperimentConfig::normal_1d(kind)
            .with_k_values(ks.to_vec())
            .with_realizations(realizations);
        let stats = run_experiment(&cfg)?;
        println!("\n{} ({realizations} realizations)", kind.name());
        println!("  {:>4} {:>16} {:>16}", "k", "euclidean", "dissimilarity");
        for &k in &ks {
            let e = stats.get(ComparatorKind::Euclidean, k).unwrap();
            let d = stats.get(ComparatorKind::default(), k).unwrap();
            println!(
                "  {k:>4} {:>8.3} ± {:<5.3} {:>8.3} ± {:<5.3}",
                e.mean_beta, e.std_beta, d.mean_beta, d.std_beta
            );
        }
    }
    Ok(())
}
