//! One realization of the 1D experiment: draw both groups, place the
//! reference point on the decision boundary and look at who its nearest
//! neighbors are under each comparator.

use coinknn::experiment::realization_points;
use coinknn::{
    accuracy_beta, classify, count_by_group, k_nearest, reference_point, ComparatorKind, ExperimentConfig,
    TransformKind,
};

fn main() -> coinknn::Result<()> {
    let cfg = ExperimentConfig::uniform_1d(TransformKind::Square).with_seed(3);
    let reference = reference_point(&cfg)?;
    let r = reference.features()?;
    println!("boundary x = {:?}, reference y = {:?}", reference.x, reference.y);

    let points = realization_points(&cfg, 0)?;
    for kind in [ComparatorKind::Euclidean, ComparatorKind::default()] {
        println!("\n{}", kind.name());
        let ns = k_nearest(&r, &points, 10, kind)?;
        for n in ns.as_slice() {
            println!(
                "  #{:<4} y = {:>7.3}  value {:.5}  {:?}",
                n.index,
                points[n.index].features.as_slice()[0],
                n.value,
                n.label
            );
        }
        for k in [10, 40, 70, 100] {
            let (a, b) = count_by_group(&k_nearest(&r, &points, k, kind)?);
            println!(
                "  k = {k:>3}: {a:>3} A / {b:>3} B, beta = {:.3}, majority {:?}",
                accuracy_beta(a, b)?,
                classify(&r, &points, k, kind)?
            );
        }
    }
    Ok(())
}
