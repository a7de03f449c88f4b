//! Monte Carlo accuracy experiments at the decision point between two
//! groups.
//!
//! One realization samples both groups from its own random substream, pools
//! the points, retrieves the `k` neighbors closest to the transformed
//! decision point `P_y = f(P_x)` and scores the balance of the neighborhood
//! with `β = min(n_A, n_B) / max(n_A, n_B)`. A perfectly located decision
//! point gives `β = 1`.
//!
//! Realizations run in parallel on the current rayon pool; their results are
//! collected by realization index and reduced sequentially, so statistics are
//! bitwise identical for any number of worker threads.

use rayon::prelude::*;

use crate::densities::{sample_group, sample_group_2d, BaseDensity, GroupLabel, GroupSpec, TransformKind};
use crate::error::{Error, Result};
use crate::knn::{count_labels, k_nearest, LabeledPoint};
use crate::rng::substream;
use crate::similarity::{ComparatorKind, FeatureVector};

/// Offset, in standard deviations per axis, of the second 2D group from the
/// first: the same separation as the 1D normal pair (1.2 / 0.333).
pub const DEFAULT_2D_OFFSET_SD: f64 = 3.6;

/// `min(n_A, n_B) / max(n_A, n_B)`; zero when exactly one count is zero.
pub fn accuracy_beta(n_a: usize, n_b: usize) -> Result<f64> {
    if n_a == 0 && n_b == 0 {
        return Err(Error::invalid("accuracy index needs at least one neighbor"));
    }
    Ok(n_a.min(n_b) as f64 / n_a.max(n_b) as f64)
}

/// Every value β can take for a neighborhood of size `k`, ascending.
pub fn attainable_betas(k: usize) -> Vec<f64> {
    let mut values: Vec<f64> = (0..=k).filter_map(|i| accuracy_beta(i, k - i).ok()).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
}

/// Per-axis bases and sample count of one group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupConfig {
    pub bases: Vec<BaseDensity>,
    pub n: usize,
}

impl GroupConfig {
    pub fn new(bases: Vec<BaseDensity>, n: usize) -> Self {
        GroupConfig { bases, n }
    }

    fn axis_spec(&self, label: GroupLabel, axis: usize, transform: TransformKind) -> GroupSpec {
        GroupSpec {
            label,
            base: self.bases[axis],
            transform,
            n: self.n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Applied to every axis of both groups.
    pub transform: TransformKind,
    pub group_a: GroupConfig,
    pub group_b: GroupConfig,
    pub comparators: Vec<ComparatorKind>,
    pub k_values: Vec<usize>,
    pub realizations: usize,
    pub master_seed: u64,
}

impl ExperimentConfig {
    /// Adjacent uniform groups `U(2,4)` and `U(4,6)` with 100 points each.
    pub fn uniform_1d(transform: TransformKind) -> Self {
        Self::with_groups(
            transform,
            GroupConfig::new(vec![BaseDensity::Uniform { low: 2.0, high: 4.0 }], 100),
            GroupConfig::new(vec![BaseDensity::Uniform { low: 4.0, high: 6.0 }], 100),
        )
    }

    /// Overlapping normal groups with means 2.8 and 4.0, sd 0.333.
    pub fn normal_1d(transform: TransformKind) -> Self {
        Self::with_groups(
            transform,
            GroupConfig::new(vec![BaseDensity::Normal { mean: 2.8, sd: 0.333 }], 100),
            GroupConfig::new(vec![BaseDensity::Normal { mean: 4.0, sd: 0.333 }], 100),
        )
    }

    /// Separable normal groups: A centered at (7, 9), B offset by
    /// [`DEFAULT_2D_OFFSET_SD`] per axis, unit sd, 1000 points each.
    pub fn normal_2d(transform: TransformKind) -> Self {
        let normal = |mean| BaseDensity::Normal { mean, sd: 1.0 };
        let off = DEFAULT_2D_OFFSET_SD;
        Self::with_groups(
            transform,
            GroupConfig::new(vec![normal(7.0), normal(9.0)], 1000),
            GroupConfig::new(vec![normal(7.0 + off), normal(9.0 + off)], 1000),
        )
    }

    fn with_groups(transform: TransformKind, group_a: GroupConfig, group_b: GroupConfig) -> Self {
        ExperimentConfig {
            transform,
            group_a,
            group_b,
            comparators: vec![ComparatorKind::Euclidean, ComparatorKind::default()],
            k_values: (1..=100).collect(),
            realizations: 1000,
            master_seed: 0,
        }
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.group_a.n = n;
        self.group_b.n = n;
        self
    }

    pub fn with_k_values(mut self, k_values: Vec<usize>) -> Self {
        self.k_values = k_values;
        self
    }

    pub fn with_realizations(mut self, realizations: usize) -> Self {
        self.realizations = realizations;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_comparators(mut self, comparators: Vec<ComparatorKind>) -> Self {
        self.comparators = comparators;
        self
    }

    pub fn dimensions(&self) -> usize {
        self.group_a.bases.len()
    }

    pub fn total_points(&self) -> usize {
        self.group_a.n + self.group_b.n
    }

    pub fn validate(&self) -> Result<()> {
        self.transform.validate()?;
        let dims = self.dimensions();
        if !(1..=2).contains(&dims) {
            return Err(Error::UnsupportedConfig(format!(
                "dimensions must be 1 or 2, got {dims}"
            )));
        }
        if self.group_b.bases.len() != dims {
            return Err(Error::invalid("both groups must have one base density per axis"));
        }
        for base in self.group_a.bases.iter().chain(&self.group_b.bases) {
            base.validate()?;
        }
        if self.group_a.n == 0 || self.group_b.n == 0 {
            return Err(Error::invalid("group sample counts must be at least 1"));
        }
        if self.comparators.is_empty() {
            return Err(Error::invalid("at least one comparator is required"));
        }
        for c in &self.comparators {
            c.validate()?;
        }
        if self.k_values.is_empty() {
            return Err(Error::invalid("at least one k value is required"));
        }
        let total = self.total_points();
        if let Some(&bad) = self.k_values.iter().find(|&&k| k == 0 || k > total) {
            return Err(Error::invalid(format!("k = {bad} outside 1..={total}")));
        }
        if self.realizations == 0 {
            return Err(Error::invalid("at least one realization is required"));
        }
        Ok(())
    }
}

/// Decision point in original (`x`) and transformed (`y`) coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ReferencePoint {
    pub fn features(&self) -> Result<FeatureVector> {
        FeatureVector::new(self.y.clone())
    }
}

/// Where the densities of `a` and `b` cross along one axis.
pub fn decision_boundary(a: &BaseDensity, b: &BaseDensity) -> Result<f64> {
    match (*a, *b) {
        (BaseDensity::Uniform { low: al, high: ah }, BaseDensity::Uniform { low: bl, high: bh }) => {
            if ah == bl {
                Ok(ah)
            } else if bh == al {
                Ok(bh)
            } else {
                Err(Error::UnsupportedConfig(format!(
                    "uniform groups [{al},{ah}] and [{bl},{bh}] are not adjacent"
                )))
            }
        }
        (BaseDensity::Normal { mean: am, sd: asd }, BaseDensity::Normal { mean: bm, sd: bsd }) => {
            if asd == bsd {
                Ok(0.5 * (am + bm))
            } else {
                Err(Error::UnsupportedConfig(format!(
                    "normal groups with unequal sd ({asd} vs {bsd}) are not supported"
                )))
            }
        }
        _ => Err(Error::UnsupportedConfig(
            "groups must share one base family per axis".into(),
        )),
    }
}

pub fn reference_point(config: &ExperimentConfig) -> Result<ReferencePoint> {
    config.validate()?;
    let x = config
        .group_a
        .bases
        .iter()
        .zip(&config.group_b.bases)
        .map(|(a, b)| decision_boundary(a, b))
        .collect::<Result<Vec<_>>>()?;
    let y = x
        .iter()
        .map(|&px| config.transform.apply(px))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReferencePoint { x, y })
}

/// Samples both groups for realization `index` (group A first, then B).
pub fn realization_points(config: &ExperimentConfig, index: u64) -> Result<Vec<LabeledPoint>> {
    let mut rng = substream(config.master_seed, index);
    let mut points = Vec::with_capacity(config.total_points());
    for (group, label) in [(&config.group_a, GroupLabel::A), (&config.group_b, GroupLabel::B)] {
        match config.dimensions() {
            1 => {
                let spec = group.axis_spec(label, 0, config.transform);
                for s in sample_group(&spec, &mut rng)? {
                    points.push(LabeledPoint::new(FeatureVector::new(vec![s.y])?, s.label));
                }
            }
            _ => {
                let ax1 = group.axis_spec(label, 0, config.transform);
                let ax2 = group.axis_spec(label, 1, config.transform);
                for s in sample_group_2d(&ax1, &ax2, &mut rng)? {
                    points.push(LabeledPoint::new(FeatureVector::new(s.y.to_vec())?, s.label));
                }
            }
        }
    }
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizationOutcome {
    pub n_a: usize,
    pub n_b: usize,
    pub beta: f64,
}

impl RealizationOutcome {
    fn from_counts(n_a: usize, n_b: usize) -> Result<Self> {
        Ok(RealizationOutcome {
            n_a,
            n_b,
            beta: accuracy_beta(n_a, n_b)?,
        })
    }
}

pub fn run_realization(
    config: &ExperimentConfig,
    comparator: ComparatorKind,
    k: usize,
    index: u64,
) -> Result<RealizationOutcome> {
    config.validate()?;
    let reference = reference_point(config)?.features()?;
    let points = realization_points(config, index)?;
    let ns = k_nearest(&reference, &points, k, comparator)?;
    let (n_a, n_b) = count_labels(ns.labels());
    RealizationOutcome::from_counts(n_a, n_b)
}

/// Outcomes of one realization for every comparator (outer) and every
/// configured k (inner), from a single sample and a single ranking per
/// comparator.
pub fn realization_table(
    config: &ExperimentConfig,
    reference: &FeatureVector,
    index: u64,
) -> Result<Vec<Vec<RealizationOutcome>>> {
    let points = realization_points(config, index)?;
    let k_max = config.k_values.iter().copied().max().unwrap_or(0);
    config
        .comparators
        .iter()
        .map(|&comparator| {
            let ranked = k_nearest(reference, &points, k_max, comparator)?;
            // prefix[i] = (n_A, n_B) among the i closest neighbors
            let mut prefix = Vec::with_capacity(k_max + 1);
            prefix.push((0, 0));
            for label in ranked.labels() {
                let &(a, b) = prefix.last().expect("non-empty");
                prefix.push(match label {
                    GroupLabel::A => (a + 1, b),
                    GroupLabel::B => (a, b + 1),
                });
            }
            config
                .k_values
                .iter()
                .map(|&k| RealizationOutcome::from_counts(prefix[k].0, prefix[k].1))
                .collect()
        })
        .collect()
}

/// Counts of β over realizations, one bin per attainable value.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaHistogram {
    pub values: Vec<f64>,
    pub counts: Vec<u64>,
}

/// Fixed-width view of a [`BetaHistogram`] on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseHistogram {
    /// `bins + 1` edges; the last bin includes 1.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl BetaHistogram {
    pub fn for_k(k: usize) -> Self {
        let values = attainable_betas(k);
        let counts = vec![0; values.len()];
        BetaHistogram { values, counts }
    }

    fn record(&mut self, beta: f64) -> Result<()> {
        let slot = self
            .values
            .binary_search_by(|v| v.total_cmp(&beta))
            .map_err(|_| Error::invalid(format!("β = {beta} is not attainable for this k")))?;
        self.counts[slot] += 1;
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn coarse(&self, bins: usize) -> CoarseHistogram {
        let bins = bins.max(1);
        let edges = (0..=bins).map(|i| i as f64 / bins as f64).collect();
        let mut counts = vec![0; bins];
        for (&v, &c) in self.values.iter().zip(&self.counts) {
            let slot = ((v * bins as f64).floor() as usize).min(bins - 1);
            counts[slot] += c;
        }
        CoarseHistogram { edges, counts }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyCell {
    pub comparator: ComparatorKind,
    pub k: usize,
    pub mean_beta: f64,
    /// Population standard deviation over realizations.
    pub std_beta: f64,
    pub mean_n_a: f64,
    pub mean_n_b: f64,
    pub realizations: usize,
    pub histogram: BetaHistogram,
}

impl AccuracyCell {
    /// Standard error of `mean_beta`.
    pub fn standard_error(&self) -> f64 {
        self.std_beta / (self.realizations as f64).sqrt()
    }

    /// Builds a cell from per-realization outcomes, in realization order.
    pub fn from_outcomes(comparator: ComparatorKind, k: usize, outcomes: &[RealizationOutcome]) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::invalid("no realizations to aggregate"));
        }
        let r = outcomes.len() as f64;
        let mut histogram = BetaHistogram::for_k(k);
        let (mut sum, mut sum_a, mut sum_b) = (0.0, 0.0, 0.0);
        for o in outcomes {
            if o.n_a + o.n_b != k {
                return Err(Error::invalid(format!(
                    "neighbor counts {} + {} do not add up to k = {k}",
                    o.n_a, o.n_b
                )));
            }
            histogram.record(o.beta)?;
            sum += o.beta;
            sum_a += o.n_a as f64;
            sum_b += o.n_b as f64;
        }
        let mean = sum / r;
        let var = outcomes.iter().map(|o| (o.beta - mean).powi(2)).sum::<f64>() / r;
        Ok(AccuracyCell {
            comparator,
            k,
            mean_beta: mean,
            std_beta: var.sqrt(),
            mean_n_a: sum_a / r,
            mean_n_b: sum_b / r,
            realizations: outcomes.len(),
            histogram,
        })
    }
}

/// Cells ordered by comparator (config order), then by k (config order).
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyStats {
    pub cells: Vec<AccuracyCell>,
}

impl AccuracyStats {
    pub fn get(&self, comparator: ComparatorKind, k: usize) -> Option<&AccuracyCell> {
        self.cells.iter().find(|c| c.comparator == comparator && c.k == k)
    }

    pub fn for_comparator(&self, comparator: ComparatorKind) -> impl Iterator<Item = &AccuracyCell> {
        self.cells.iter().filter(move |c| c.comparator == comparator)
    }
}

/// All realization tables, indexed by realization.
pub fn run_realizations(config: &ExperimentConfig) -> Result<Vec<Vec<Vec<RealizationOutcome>>>> {
    config.validate()?;
    let reference = reference_point(config)?.features()?;
    (0..config.realizations as u64)
        .into_par_iter()
        .map(|i| realization_table(config, &reference, i))
        .collect()
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<AccuracyStats> {
    let tables = run_realizations(config)?;
    let mut cells = Vec::with_capacity(config.comparators.len() * config.k_values.len());
    for (ci, &comparator) in config.comparators.iter().enumerate() {
        for (ki, &k) in config.k_values.iter().enumerate() {
            let outcomes: Vec<RealizationOutcome> = tables.iter().map(|t| t[ci][ki]).collect();
            cells.push(AccuracyCell::from_outcomes(comparator, k, &outcomes)?);
        }
    }
    Ok(AccuracyStats { cells })
}
