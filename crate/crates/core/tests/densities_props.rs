mod common;

use coinknn::densities::image_interval;
use coinknn::rng::substream;
use coinknn::{sample_group, sample_group_2d, transformed_cdf, transformed_pdf};
use coinknn::{BaseDensity, GroupLabel, GroupSpec, TransformKind};
use proptest::prelude::*;

use common::{experiment_bases, integrate_pdf, ks_critical_1pct, ks_statistic, ks_two_sample, mean_std, x_range};

#[test]
fn pdf_normalizes_for_every_experiment_pair() {
    for base in experiment_bases() {
        for kind in TransformKind::all() {
            let (x0, x1) = x_range(&base);
            let mass = integrate_pdf(&base, kind, x0, x1);
            assert!((mass - 1.0).abs() <= 1e-6, "{base} under {kind}: mass {mass}");
        }
    }
}

#[test]
fn cdf_is_the_integrated_pdf() {
    for base in experiment_bases() {
        for kind in TransformKind::all() {
            let (x0, x1) = x_range(&base);
            for q in [0.1, 0.3, 0.5, 0.8] {
                let xq = x0 + q * (x1 - x0);
                let y = kind.apply(xq).unwrap();
                let integral = integrate_pdf(&base, kind, x0, xq) + base.cdf(x0);
                let cdf = transformed_cdf(&base, kind, y);
                assert!(
                    (cdf - integral).abs() <= 1e-6,
                    "{base} under {kind} at {y}: {cdf} vs {integral}"
                );
            }
        }
    }
}

/// The KS statistic is invariant under strictly increasing maps, so every
/// transform of one base is checked on the same base draw; this keeps one
/// independent 1% test per base instead of one per pair.
#[test]
fn sampler_matches_analytic_cdf() {
    let n = 100_000;
    for (bi, base) in experiment_bases().into_iter().enumerate() {
        for kind in TransformKind::all() {
            let spec = GroupSpec::new(GroupLabel::A, base, kind, n).unwrap();
            let mut rng = substream(17, bi as u64);
            let ys: Vec<f64> = sample_group(&spec, &mut rng).unwrap().iter().map(|s| s.y).collect();
            let d = ks_statistic(&ys, |y| transformed_cdf(&base, kind, y));
            assert!(d < ks_critical_1pct(n), "{base} under {kind}: KS {d}");
        }
    }
}

#[test]
fn square_of_uniform_has_analytic_mean() {
    let spec = GroupSpec::new(
        GroupLabel::A,
        BaseDensity::uniform(2.0, 4.0).unwrap(),
        TransformKind::Square,
        100_000,
    )
    .unwrap();
    let ys: Vec<f64> = sample_group(&spec, &mut substream(3, 0))
        .unwrap()
        .iter()
        .map(|s| s.y)
        .collect();
    let (mean, sd) = mean_std(&ys);
    let se = sd / (ys.len() as f64).sqrt();
    assert!((mean - 28.0 / 3.0).abs() <= 3.0 * se, "mean {mean}, se {se}");
}

#[test]
fn power_of_two_preserves_the_median() {
    let base = BaseDensity::normal(2.8, 0.333).unwrap();
    let n = 100_000;
    let spec = GroupSpec::new(GroupLabel::A, base, TransformKind::PowerOfTwo, n).unwrap();
    let mut ys: Vec<f64> = sample_group(&spec, &mut substream(5, 0))
        .unwrap()
        .iter()
        .map(|s| s.y)
        .collect();
    assert!(ys.iter().all(|&y| y > 0.0));
    ys.sort_by(f64::total_cmp);
    let median = 0.5 * (ys[n / 2 - 1] + ys[n / 2]);
    let expected = 2f64.powf(2.8);
    let se = 1.0 / (2.0 * transformed_pdf(&base, TransformKind::PowerOfTwo, expected) * (n as f64).sqrt());
    assert!((median - expected).abs() <= 3.0 * se, "median {median}, se {se}");
}

#[test]
fn change_of_variables_example() {
    let base = BaseDensity::uniform(2.0, 4.0).unwrap();
    assert!((transformed_pdf(&base, TransformKind::Square, 9.0) - 1.0 / 12.0).abs() < 1e-15);
    assert_eq!(transformed_pdf(&base, TransformKind::Square, 17.0), 0.0);
    assert_eq!(transformed_pdf(&base, TransformKind::Identity, 3.0), base.pdf(3.0));
    assert_eq!(image_interval(&base, TransformKind::Square).unwrap(), (4.0, 16.0));
}

#[test]
fn small_identity_sample_stays_in_support() {
    let spec = GroupSpec::new(
        GroupLabel::B,
        BaseDensity::uniform(2.0, 4.0).unwrap(),
        TransformKind::Identity,
        5,
    )
    .unwrap();
    let samples = sample_group(&spec, &mut substream(0, 0)).unwrap();
    assert_eq!(samples.len(), 5);
    assert!(samples
        .iter()
        .all(|s| (2.0..=4.0).contains(&s.y) && s.label == GroupLabel::B));
}

#[test]
fn two_dimensional_axes_are_uncorrelated() {
    let n = 10_000;
    let ax1 = GroupSpec::new(
        GroupLabel::A,
        BaseDensity::normal(7.0, 1.0).unwrap(),
        TransformKind::Identity,
        n,
    )
    .unwrap();
    let ax2 = GroupSpec::new(
        GroupLabel::A,
        BaseDensity::normal(9.0, 1.0).unwrap(),
        TransformKind::Identity,
        n,
    )
    .unwrap();
    let s = sample_group_2d(&ax1, &ax2, &mut substream(11, 0)).unwrap();
    let (x, y): (Vec<f64>, Vec<f64>) = s.iter().map(|p| (p.y[0], p.y[1])).unzip();
    let ((mx, sx), (my, sy)) = (mean_std(&x), mean_std(&y));
    let cov = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / n as f64;
    let r = cov / (sx * sy);
    assert!(r.abs() < 3.0 / (n as f64).sqrt(), "correlation {r}");
}

#[test]
fn two_dimensional_marginal_matches_1d_sampler() {
    let n = 20_000;
    let base1 = BaseDensity::normal(7.0, 1.0).unwrap();
    let ax1 = GroupSpec::new(GroupLabel::A, base1, TransformKind::Cube, n).unwrap();
    let ax2 = GroupSpec::new(
        GroupLabel::A,
        BaseDensity::normal(9.0, 1.0).unwrap(),
        TransformKind::Cube,
        n,
    )
    .unwrap();
    let pairs = sample_group_2d(&ax1, &ax2, &mut substream(21, 0)).unwrap();
    let marginal: Vec<f64> = pairs.iter().map(|p| p.y[0]).collect();
    let direct: Vec<f64> = sample_group(&ax1, &mut substream(21, 1))
        .unwrap()
        .iter()
        .map(|s| s.y)
        .collect();
    let d = ks_two_sample(&marginal, &direct);
    // 5% two-sample critical value.
    let critical = 1.358 * (2.0 / n as f64).sqrt();
    assert!(d < critical, "two-sample KS {d} vs {critical}");
}

#[test]
fn equal_seeds_give_identical_samples() {
    let spec = GroupSpec::new(
        GroupLabel::A,
        BaseDensity::normal(2.8, 0.333).unwrap(),
        TransformKind::Cube,
        1000,
    )
    .unwrap();
    let a = sample_group(&spec, &mut substream(9, 4)).unwrap();
    let b = sample_group(&spec, &mut substream(9, 4)).unwrap();
    assert!(a.iter().zip(&b).all(|(p, q)| p.y.to_bits() == q.y.to_bits()));
    let c = sample_group(&spec, &mut substream(9, 5)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn out_of_domain_inputs_are_rejected() {
    assert!(TransformKind::Square.apply(-1.0).is_err());
    assert!(TransformKind::Cube.inverse(-8.0).is_err());
    assert!(TransformKind::PowerOfTwo.inverse(0.0).is_err());
    assert!(TransformKind::ExpAlpha(-0.1).validate().is_err());
}

fn transform() -> impl Strategy<Value = TransformKind> {
    prop_oneof![
        Just(TransformKind::PowerOfTwo),
        Just(TransformKind::Square),
        Just(TransformKind::Cube),
        (0.01..2.0f64).prop_map(TransformKind::ExpAlpha),
        Just(TransformKind::Identity),
    ]
}

proptest! {
    #[test]
    fn transforms_are_strictly_increasing(kind in transform(), mut xs in prop::collection::vec(0.0..20.0f64, 2..30)) {
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let ys: Vec<f64> = xs.iter().map(|&x| kind.apply(x).unwrap()).collect();
        prop_assert!(ys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn inverse_round_trips(kind in transform(), x in 0.0..20.0f64) {
        let back = kind.inverse(kind.apply(x).unwrap()).unwrap();
        prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0), "{} -> {}", x, back);
    }
}
