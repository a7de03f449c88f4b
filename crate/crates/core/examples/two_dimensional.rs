//! The separable 2D setting: both axes transformed, group B offset along the
//! diagonal. Prints mean β at a few `k` and the spread of the sampled cloud.

use coinknn::experiment::realization_points;
use coinknn::{reference_point, run_experiment, ComparatorKind, ExperimentConfig, GroupLabel, TransformKind};

fn main() -> coinknn::Result<()> {
    let ks = vec![10, 40, 70, 150, 300];
    let cfg = ExperimentConfig::normal_2d(TransformKind::Cube)
        .with_k_values(ks.clone())
        .with_realizations(40);
    let reference = reference_point(&cfg)?;
    println!("reference x = {:?}\n          y = {:?}", reference.x, reference.y);

    let points = realization_points(&cfg, 0)?;
    for label in [GroupLabel::A, GroupLabel::B] {
        let ys: Vec<&[f64]> = points
            .iter()
            .filter(|p| p.label == label)
            .map(|p| p.features.as_slice())
            .collect();
        let (min, max) = ys.iter().fold(([f64::MAX; 2], [f64::MIN; 2]), |(lo, hi), y| {
            ([lo[0].min(y[0]), lo[1].min(y[1])], [hi[0].max(y[0]), hi[1].max(y[1])])
        });
        println!(
            "{label:?}: {} points, y1 in [{:.0}, {:.0}], y2 in [{:.0}, {:.0}]",
            ys.len(),
            min[0],
            max[0],
            min[1],
            max[1]
        );
    }

    let stats = run_experiment(&cfg)?;
    println!("\n{:>5} {:>10} {:>14}", "k", "euclidean", "dissimilarity");
    for k in ks {
        let e = stats.get(ComparatorKind::Euclidean, k).unwrap();
        let d = stats.get(ComparatorKind::default(), k).unwrap();
        println!("{k:>5} {:>10.3} {:>14.3}", e.mean_beta, d.mean_beta);
    }
    Ok(())
}
