use coinknn::experiment::{attainable_betas, realization_points, realization_table};
use coinknn::{
    accuracy_beta, k_nearest, reference_point, run_experiment, run_realization, ComparatorKind, ExperimentConfig,
    FeatureVector, GroupLabel, LabeledPoint, TransformKind,
};
use proptest::prelude::*;

fn points_1d(values: &[(f64, bool)]) -> Vec<LabeledPoint> {
    values
        .iter()
        .map(|&(v, a)| {
            LabeledPoint::new(
                FeatureVector::new(vec![v]).unwrap(),
                if a { GroupLabel::A } else { GroupLabel::B },
            )
        })
        .collect()
}

/// Full sort of every comparison value under the `(value, index)` order.
fn brute_force(reference: &FeatureVector, points: &[LabeledPoint], k: usize, kind: ComparatorKind) -> Vec<usize> {
    let mut all: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (coinknn::compare(kind, reference, &p.features).unwrap().value(), i))
        .collect();
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    all.into_iter().take(k).map(|(_, i)| i).collect()
}

// Values on a coarse lattice so that exact ties actually occur.
fn lattice_points() -> impl Strategy<Value = Vec<(f64, bool)>> {
    prop::collection::vec(((1u32..40).prop_map(|v| v as f64 * 0.25), any::<bool>()), 1..60)
}

fn kinds() -> impl Strategy<Value = ComparatorKind> {
    prop_oneof![
        Just(ComparatorKind::Euclidean),
        (0.5..5.0f64, 0.0..2.0f64).prop_map(|(d, e)| ComparatorKind::CoincidenceDissimilarity { d, e }),
    ]
}

proptest! {
    #[test]
    fn agrees_with_brute_force(values in lattice_points(), r in 0.25..10.0f64, kind in kinds(), kf in 0.0..1.0f64) {
        let points = points_1d(&values);
        let k = 1 + (kf * (points.len() - 1) as f64) as usize;
        let reference = FeatureVector::new(vec![r]).unwrap();
        let ns = k_nearest(&reference, &points, k, kind).unwrap();
        prop_assert_eq!(ns.indices(), brute_force(&reference, &points, k, kind));
    }

    #[test]
    fn growing_k_keeps_the_prefix(values in lattice_points(), r in 0.25..10.0f64, kind in kinds()) {
        let points = points_1d(&values);
        let reference = FeatureVector::new(vec![r]).unwrap();
        let full = k_nearest(&reference, &points, points.len(), kind).unwrap();
        for k in 1..points.len() {
            let ns = k_nearest(&reference, &points, k, kind).unwrap();
            prop_assert_eq!(ns.as_slice(), &full.as_slice()[..k]);
            prop_assert_eq!(ns, full.truncated(k));
        }
    }

    #[test]
    fn retrieval_ignores_d_in_1d(values in lattice_points(), r in 0.25..10.0f64, d1 in 0.2..6.0f64, d2 in 0.2..6.0f64) {
        let points = points_1d(&values);
        let reference = FeatureVector::new(vec![r]).unwrap();
        let k = points.len();
        let a = k_nearest(&reference, &points, k, ComparatorKind::CoincidenceDissimilarity { d: d1, e: 1.0 }).unwrap();
        let b = k_nearest(&reference, &points, k, ComparatorKind::CoincidenceDissimilarity { d: d2, e: 1.0 }).unwrap();
        prop_assert_eq!(a.indices(), b.indices());
    }

    /// Shuffling the input and mapping indices back selects the same points
    /// up to exactly tied comparison values at the cut.
    #[test]
    fn permutation_changes_only_ties(values in lattice_points(), r in 0.25..10.0f64, kind in kinds(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let points = points_1d(&values);
        let reference = FeatureVector::new(vec![r]).unwrap();
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let shuffled: Vec<LabeledPoint> = order.iter().map(|&i| points[i].clone()).collect();
        let k = points.len().div_ceil(2);
        let a = k_nearest(&reference, &points, k, kind).unwrap();
        let b = k_nearest(&reference, &shuffled, k, kind).unwrap();
        let values_a: Vec<u64> = a.as_slice().iter().map(|n| n.value.to_bits()).collect();
        let values_b: Vec<u64> = b.as_slice().iter().map(|n| n.value.to_bits()).collect();
        prop_assert_eq!(values_a, values_b);
        let cut = a.as_slice()[k - 1].value;
        let mut strict_a: Vec<usize> = a.as_slice().iter().filter(|n| n.value < cut).map(|n| n.index).collect();
        let mut strict_b: Vec<usize> = b.as_slice().iter().filter(|n| n.value < cut).map(|n| order[n.index]).collect();
        strict_a.sort_unstable();
        strict_b.sort_unstable();
        prop_assert_eq!(strict_a, strict_b);
    }

    #[test]
    fn beta_is_symmetric_and_bounded(a in 0usize..200, b in 0usize..200) {
        prop_assume!(a + b > 0);
        let beta = accuracy_beta(a, b).unwrap();
        prop_assert_eq!(beta, accuracy_beta(b, a).unwrap());
        prop_assert!((0.0..=1.0).contains(&beta));
        prop_assert!(attainable_betas(a + b).contains(&beta));
    }
}

#[test]
fn beta_examples() {
    assert_eq!(accuracy_beta(35, 35).unwrap(), 1.0);
    assert_eq!(accuracy_beta(40, 30).unwrap(), 0.75);
    assert_eq!(accuracy_beta(70, 0).unwrap(), 0.0);
    assert!(accuracy_beta(0, 0).is_err());
}

#[test]
fn reference_point_examples() {
    let cfg = ExperimentConfig::uniform_1d(TransformKind::Square);
    assert_eq!(reference_point(&cfg).unwrap().y, vec![16.0]);
    let cfg = ExperimentConfig::normal_1d(TransformKind::Identity);
    assert!((reference_point(&cfg).unwrap().y[0] - 3.4).abs() < 1e-12);
    let cfg = ExperimentConfig::normal_2d(TransformKind::PowerOfTwo);
    let p = reference_point(&cfg).unwrap();
    for axis in 0..2 {
        let mid = 0.5 * (cfg.group_a.bases[axis].mean() + cfg.group_b.bases[axis].mean());
        assert_eq!(p.x[axis], mid);
        assert_eq!(p.y[axis], 2f64.powf(mid));
    }
}

#[test]
fn realizations_are_reproducible_and_tables_match_single_runs() {
    let cfg = ExperimentConfig::uniform_1d(TransformKind::Cube)
        .with_k_values(vec![1, 7, 70, 150])
        .with_seed(42);
    let reference = reference_point(&cfg).unwrap().features().unwrap();
    for index in [0u64, 5, 999] {
        assert_eq!(
            realization_points(&cfg, index).unwrap(),
            realization_points(&cfg, index).unwrap()
        );
        let table = realization_table(&cfg, &reference, index).unwrap();
        for (ci, &kind) in cfg.comparators.iter().enumerate() {
            for (ki, &k) in cfg.k_values.iter().enumerate() {
                assert_eq!(table[ci][ki], run_realization(&cfg, kind, k, index).unwrap());
            }
        }
    }
}

#[test]
fn single_realization_has_zero_spread() {
    let cfg = ExperimentConfig::uniform_1d(TransformKind::Square).with_realizations(1);
    let stats = run_experiment(&cfg).unwrap();
    assert_eq!(stats.cells.len(), 2 * 100);
    for cell in &stats.cells {
        assert_eq!(cell.std_beta, 0.0);
        assert_eq!(cell.histogram.total(), 1);
    }
}

#[test]
fn every_cell_conserves_mass() {
    let cfg = ExperimentConfig::normal_1d(TransformKind::PowerOfTwo).with_realizations(50);
    let stats = run_experiment(&cfg).unwrap();
    for cell in &stats.cells {
        assert_eq!(cell.histogram.total(), 50);
        assert!((0.0..=1.0).contains(&cell.mean_beta));
        assert!((cell.mean_n_a + cell.mean_n_b - cell.k as f64).abs() < 1e-9);
        assert_eq!(cell.histogram.coarse(20).counts.iter().sum::<u64>(), 50);
    }
}
