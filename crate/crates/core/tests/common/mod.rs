//! Reference oracles and statistical helpers shared by the integration
//! tests. The oracles are written from the definitions and do not call the
//! library code they check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use coinknn::{transformed_pdf, BaseDensity, TransformKind};

/// Coincidence index computed literally from the multiset definition: each
/// vector becomes a map from `(coordinate, sign)` to multiplicity, and the
/// intersection/union are the element-wise min/max of multiplicities over the
/// union of keys.
pub fn oracle_coincidence(u: &[f64], v: &[f64], d: f64, e: f64) -> f64 {
    assert_eq!(u.len(), v.len());
    let multiset = |w: &[f64]| {
        let mut m: BTreeMap<(usize, bool), f64> = BTreeMap::new();
        for (k, &x) in w.iter().enumerate() {
            if x > 0.0 {
                m.insert((k, true), x);
            } else if x < 0.0 {
                m.insert((k, false), -x);
            }
        }
        m
    };
    let (mu, mv) = (multiset(u), multiset(v));
    let mut keys: Vec<_> = mu.keys().chain(mv.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let (mut inter, mut union) = (0.0, 0.0);
    for key in keys {
        let a = mu.get(&key).copied().unwrap_or(0.0);
        let b = mv.get(&key).copied().unwrap_or(0.0);
        inter += a.min(b);
        union += a.max(b);
    }
    let size_u: f64 = mu.values().sum();
    let size_v: f64 = mv.values().sum();
    assert!(union > 0.0, "oracle called with two zero vectors");
    if inter == 0.0 {
        return 0.0;
    }
    (inter / union).powf(d) * (inter / size_u.min(size_v)).powf(e)
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2) && n > 0);
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// One-sample Kolmogorov-Smirnov statistic against `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic 1% critical value of the one-sample statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Asymptotic 1% critical value of the two-sample statistic.
pub fn ks_two_sample_critical_1pct(n: usize, m: usize) -> f64 {
    1.628 * ((n + m) as f64 / (n * m) as f64).sqrt()
}

/// Mean and population standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Every base density that appears in the shipped experiments.
pub fn experiment_bases() -> Vec<BaseDensity> {
    let mut bases = vec![
        BaseDensity::uniform(2.0, 4.0).unwrap(),
        BaseDensity::uniform(4.0, 6.0).unwrap(),
        BaseDensity::normal(2.8, 0.333).unwrap(),
        BaseDensity::normal(4.0, 0.333).unwrap(),
    ];
    for mean in [7.0, 9.0, 10.6, 12.6] {
        bases.push(BaseDensity::normal(mean, 1.0).unwrap());
    }
    bases
}

/// Integration range in `x`, wide enough that the neglected normal tails
/// carry far less than 1e-6 of the mass.
pub fn x_range(base: &BaseDensity) -> (f64, f64) {
    match *base {
        BaseDensity::Uniform { low, high } => (low, high),
        BaseDensity::Normal { mean, sd } => ((mean - 6.5 * sd).max(0.0), mean + 6.5 * sd),
    }
}

/// `∫ transformed_pdf dy` over the image of `[x0, x1]`, split into pieces whose
/// endpoints are the images of an even partition in `x`. Each piece is
/// integrated in `y` with Simpson's rule.
pub fn integrate_pdf(base: &BaseDensity, kind: TransformKind, x0: f64, x1: f64) -> f64 {
    let pieces = 200;
    (0..pieces)
        .map(|i| {
            let a = kind.apply(x0 + (x1 - x0) * i as f64 / pieces as f64).unwrap();
            let b = kind.apply(x0 + (x1 - x0) * (i + 1) as f64 / pieces as f64).unwrap();
            // Stay inside the support so the uniform's jumps are not sampled.
            let nudge = (b - a) * 1e-12;
            let a = if i == 0 { a + nudge } else { a };
            let b = if i == pieces - 1 { b - nudge } else { b };
            simpson(|y| transformed_pdf(base, kind, y), a, b, 200)
        })
        .sum()
}
