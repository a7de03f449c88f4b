//! Draws from a transformed base density and compares the empirical
//! histogram with the analytic density of the transformed variable.

use coinknn::rng::substream;
use coinknn::{sample_group, transformed_cdf, transformed_pdf, BaseDensity, GroupLabel, GroupSpec, TransformKind};

fn main() -> coinknn::Result<()> {
    let base = BaseDensity::normal(2.8, 0.333)?;
    let n = 20_000;
    for kind in TransformKind::all() {
        let spec = GroupSpec::new(GroupLabel::A, base, kind, n)?;
        let mut ys: Vec<f64> = sample_group(&spec, &mut substream(1, 0))?
            .into_iter()
            .map(|s| s.y)
            .collect();
        ys.sort_by(f64::total_cmp);
        let (lo, hi) = (ys[n / 200], ys[n - n / 200]);
        let mean = ys.iter().sum::<f64>() / n as f64;
        let median = ys[n / 2];
        println!("\n{} (mean {mean:.3}, median {median:.3})", kind.name());

        let bins = 12;
        let width = (hi - lo) / bins as f64;
        for b in 0..bins {
            let (a, z) = (lo + b as f64 * width, lo + (b + 1) as f64 * width);
            let count = ys.iter().filter(|&&y| y >= a && y < z).count();
            let empirical = count as f64 / (n as f64 * width);
            let analytic = transformed_pdf(&base, kind, 0.5 * (a + z));
            let bar = "#".repeat((empirical / analytic.max(1e-300) * 20.0).round().min(40.0) as usize);
            println!("  [{a:>10.3}, {z:>10.3})  emp {empirical:>9.4}  pdf {analytic:>9.4}  {bar}");
        }
        let below = ys.iter().filter(|&&y| y <= median).count() as f64 / n as f64;
        println!(
            "  F(median) = {:.4}, empirical {below:.4}",
            transformed_cdf(&base, kind, median)
        );
    }
    Ok(())
}
