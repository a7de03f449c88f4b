//! How fast each comparator grows as a scalar moves away from a reference
//! value, and the finite-difference slope of that growth.

use coinknn::sensitivity::uniform_grid;
use coinknn::{profile, sensitivity_curve, ComparatorKind};

fn main() -> coinknn::Result<()> {
    let reference = 4.0;
    let grid = uniform_grid(0.5, 8.0, 7501)?;
    let eu = profile(ComparatorKind::Euclidean, reference, &grid)?;
    let di = profile(ComparatorKind::default(), reference, &grid)?;
    let (s_eu, s_di) = (sensitivity_curve(&eu)?, sensitivity_curve(&di)?);
    // Euclidean distance divided by the reference is on the same relative
    // scale as the dissimilarity.
    let relative = eu.scaled(1.0 / reference);

    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "y", "euclid", "eu/ref", "dissim", "d euclid", "d dissim"
    );
    for i in (0..grid.len()).step_by(500) {
        let fmt = |s: Option<f64>| s.map_or("-".to_string(), |v| format!("{v:.4}"));
        println!(
            "{:>6.2} {:>10.4} {:>10.4} {:>10.4} {:>10} {:>10}",
            grid[i],
            eu.values[i],
            relative.values[i],
            di.values[i],
            fmt(s_eu[i]),
            fmt(s_di[i])
        );
    }
    Ok(())
}
