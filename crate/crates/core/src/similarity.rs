//! Comparators between real feature vectors.
//!
//! The coincidence similarity treats each vector as a multiset of signed
//! masses (an np-set): coordinate `k` contributes a positive mass
//! `max(v_k, 0)` and a negative mass `min(v_k, 0)`. Two vectors are then
//! compared through the ratio of their multiset intersection to their union
//! (a signed Jaccard ratio, raised to `D`) times the ratio of the
//! intersection to the smaller total mass (the interiority, raised to `E`).
//!
//! [`compare`] is the single entry point used by the neighbor search: it
//! returns either the Euclidean distance or the dissimilarity `1 - C`, so in
//! both cases a smaller value means "more closely related".

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default sharpness exponent applied to the Jaccard factor.
pub const DEFAULT_D: f64 = 3.0;
/// Default exponent applied to the interiority factor.
pub const DEFAULT_E: f64 = 1.0;

/// An ordered list of `M >= 1` finite feature values.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("feature vector must have at least one entry"));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite feature value {bad}")));
        }
        Ok(FeatureVector(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub fn is_non_negative(&self) -> bool {
        self.0.iter().all(|&v| v >= 0.0)
    }

    /// Multiplies every coordinate by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        FeatureVector::new(self.0.iter().map(|v| v * factor).collect())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        FeatureVector::new(values)
    }
}

impl TryFrom<&[f64]> for FeatureVector {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        FeatureVector::new(values.to_vec())
    }
}

/// Positive/negative mass decomposition of a feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct NpSet {
    /// `max(v_k, 0)` for every coordinate.
    pub positive: Vec<f64>,
    /// `min(v_k, 0)` for every coordinate.
    pub negative: Vec<f64>,
}

impl NpSet {
    pub fn len(&self) -> usize {
        self.positive.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positive.is_empty()
    }

    /// Total magnitude `sum_k m^p_k + |m^n_k|`.
    pub fn magnitude(&self) -> f64 {
        self.positive.iter().zip(&self.negative).map(|(p, n)| p + n.abs()).sum()
    }

    /// Rebuilds the original coordinates.
    pub fn reconstruct(&self) -> Vec<f64> {
        self.positive.iter().zip(&self.negative).map(|(p, n)| p + n).collect()
    }
}

pub fn npset_decompose(v: &FeatureVector) -> NpSet {
    let positive = v.as_slice().iter().map(|&x| x.max(0.0)).collect();
    let negative = v.as_slice().iter().map(|&x| x.min(0.0)).collect();
    NpSet { positive, negative }
}

/// Which comparator the neighbor search uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparatorKind {
    Euclidean,
    /// `1 - C(u, v)` with Jaccard exponent `d` and interiority exponent `e`.
    CoincidenceDissimilarity {
        d: f64,
        e: f64,
    },
}

impl ComparatorKind {
    pub fn dissimilarity(d: f64, e: f64) -> Result<Self> {
        validate_exponents(d, e)?;
        Ok(ComparatorKind::CoincidenceDissimilarity { d, e })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ComparatorKind::Euclidean => Ok(()),
            ComparatorKind::CoincidenceDissimilarity { d, e } => validate_exponents(d, e),
        }
    }

    /// Short name used in result tables: `euclidean` or `dissimilarity`.
    pub fn name(&self) -> &'static str {
        match self {
            ComparatorKind::Euclidean => "euclidean",
            ComparatorKind::CoincidenceDissimilarity { .. } => "dissimilarity",
        }
    }

    pub fn is_coincidence(&self) -> bool {
        matches!(self, ComparatorKind::CoincidenceDissimilarity { .. })
    }
}

impl Default for ComparatorKind {
    fn default() -> Self {
        ComparatorKind::CoincidenceDissimilarity {
            d: DEFAULT_D,
            e: DEFAULT_E,
        }
    }
}

impl fmt::Display for ComparatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparatorKind::Euclidean => write!(f, "euclidean"),
            ComparatorKind::CoincidenceDissimilarity { d, e } => {
                write!(f, "dissimilarity(D={d},E={e})")
            }
        }
    }
}

fn validate_exponents(d: f64, e: f64) -> Result<()> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::invalid(format!("exponent D must be positive, got {d}")));
    }
    if !(e.is_finite() && e >= 0.0) {
        return Err(Error::invalid(format!("exponent E must be non-negative, got {e}")));
    }
    Ok(())
}

/// Output of [`compare`]. Smaller is closer for every comparator.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ComparisonResult(f64);

impl ComparisonResult {
    pub fn value(self) -> f64 {
        self.0
    }
}

fn check_lengths(u: &FeatureVector, v: &FeatureVector) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::invalid(format!("length mismatch: {} vs {}", u.len(), v.len())));
    }
    Ok(())
}

/// Intersection, union and the two total masses of a pair of np-sets.
struct MultisetSums {
    intersection: f64,
    union: f64,
    total_u: f64,
    total_v: f64,
}

fn multiset_sums(u: &[f64], v: &[f64]) -> MultisetSums {
    let mut sums = MultisetSums {
        intersection: 0.0,
        union: 0.0,
        total_u: 0.0,
        total_v: 0.0,
    };
    for (&a, &b) in u.iter().zip(v) {
        let (pa, pb) = (a.max(0.0), b.max(0.0));
        let (na, nb) = (a.min(0.0).abs(), b.min(0.0).abs());
        sums.intersection += pa.min(pb) + na.min(nb);
        sums.union += pa.max(pb) + na.max(nb);
        sums.total_u += pa + na;
        sums.total_v += pb + nb;
    }
    sums
}

fn combine(sums: MultisetSums, d: f64, e: f64) -> f64 {
    // The interiority is 0/0 when exactly one vector is zero; the Jaccard
    // factor is already zero there, and D > 0.
    if sums.intersection == 0.0 {
        return 0.0;
    }
    let jaccard = sums.intersection / sums.union;
    let interiority = sums.intersection / sums.total_u.min(sums.total_v);
    jaccard.powf(d) * interiority.powf(e)
}

/// Coincidence similarity of two signed vectors, in `[0, 1]`.
pub fn coincidence(u: &FeatureVector, v: &FeatureVector, d: f64, e: f64) -> Result<f64> {
    check_lengths(u, v)?;
    validate_exponents(d, e)?;
    if u.is_zero() && v.is_zero() {
        return Err(Error::UndefinedComparison);
    }
    Ok(combine(multiset_sums(u.as_slice(), v.as_slice()), d, e))
}

/// Coincidence similarity restricted to non-negative vectors, using the
/// plain min/max form. Agrees with [`coincidence`] on its domain.
pub fn coincidence_nonneg(u: &FeatureVector, v: &FeatureVector, d: f64, e: f64) -> Result<f64> {
    check_lengths(u, v)?;
    validate_exponents(d, e)?;
    if !u.is_non_negative() || !v.is_non_negative() {
        return Err(Error::invalid("negative coordinate in non-negative coincidence"));
    }
    if u.is_zero() && v.is_zero() {
        return Err(Error::UndefinedComparison);
    }
    Ok(coincidence_nonneg_slices(u.as_slice(), v.as_slice(), d, e))
}

fn coincidence_nonneg_slices(u: &[f64], v: &[f64], d: f64, e: f64) -> f64 {
    let mut sums = MultisetSums {
        intersection: 0.0,
        union: 0.0,
        total_u: 0.0,
        total_v: 0.0,
    };
    for (&a, &b) in u.iter().zip(v) {
        sums.intersection += a.min(b);
        sums.union += a.max(b);
        sums.total_u += a;
        sums.total_v += b;
    }
    combine(sums, d, e)
}

/// `1 - coincidence(u, v, d, e)`.
pub fn dissimilarity(u: &FeatureVector, v: &FeatureVector, d: f64, e: f64) -> Result<f64> {
    coincidence(u, v, d, e).map(|c| 1.0 - c)
}

pub fn euclidean(u: &FeatureVector, v: &FeatureVector) -> Result<f64> {
    check_lengths(u, v)?;
    Ok(euclidean_slices(u.as_slice(), v.as_slice()))
}

fn euclidean_slices(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Dispatches to the selected comparator.
pub fn compare(kind: ComparatorKind, u: &FeatureVector, v: &FeatureVector) -> Result<ComparisonResult> {
    let value = match kind {
        ComparatorKind::Euclidean => euclidean(u, v)?,
        ComparatorKind::CoincidenceDissimilarity { d, e } => dissimilarity(u, v, d, e)?,
    };
    Ok(ComparisonResult(value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(v: &[f64]) -> FeatureVector {
        FeatureVector::try_from(v).unwrap()
    }

    #[test]
    fn feature_vector_rejects_bad_input() {
        assert!(FeatureVector::new(vec![]).is_err());
        assert!(FeatureVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(FeatureVector::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn npset_examples() {
        let s = npset_decompose(&fv(&[3.0, -2.0, 0.0]));
        assert_eq!(s.positive, vec![3.0, 0.0, 0.0]);
        assert_eq!(s.negative, vec![0.0, -2.0, 0.0]);
        assert_eq!(s.reconstruct(), vec![3.0, -2.0, 0.0]);

        let s = npset_decompose(&fv(&[0.0, 0.0]));
        assert_eq!(s.positive, vec![0.0, 0.0]);
        assert_eq!(s.negative, vec![0.0, 0.0]);

        let s = npset_decompose(&fv(&[1.5, 2.5]));
        assert_eq!(s.positive, vec![1.5, 2.5]);
        assert_eq!(s.negative, vec![0.0, 0.0]);
        assert_eq!(s.magnitude(), 4.0);
    }

    #[test]
    fn coincidence_examples() {
        let (u, v) = (fv(&[2.0, 2.0]), fv(&[1.0, 1.0]));
        assert_eq!(coincidence(&u, &v, 1.0, 1.0).unwrap(), 0.5);
        assert_eq!(coincidence(&u, &v, 3.0, 1.0).unwrap(), 0.125);

        let w = fv(&[1.0, 2.0, 3.0]);
        for (d, e) in [(1.0, 1.0), (3.0, 0.0), (0.5, 2.5)] {
            assert_eq!(coincidence(&w, &w, d, e).unwrap(), 1.0);
        }

        let c = coincidence(&fv(&[1.0, -1.0]), &fv(&[1.0, 1.0]), 1.0, 1.0).unwrap();
        assert!((c - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn coincidence_errors() {
        let z = fv(&[0.0, 0.0]);
        assert!(matches!(coincidence(&z, &z, 1.0, 1.0), Err(Error::UndefinedComparison)));
        assert!(matches!(
            coincidence(&fv(&[1.0]), &fv(&[1.0, 2.0]), 1.0, 1.0),
            Err(Error::InvalidInput(_))
        ));
        assert!(coincidence(&fv(&[1.0]), &fv(&[1.0]), 0.0, 1.0).is_err());
        assert!(coincidence(&fv(&[1.0]), &fv(&[1.0]), 1.0, -1.0).is_err());
    }

    #[test]
    fn one_zero_vector_gives_zero() {
        let c = coincidence(&fv(&[0.0, 0.0]), &fv(&[1.0, 2.0]), 3.0, 1.0).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn nonneg_examples() {
        let (u, v) = (fv(&[2.0, 2.0]), fv(&[1.0, 1.0]));
        assert_eq!(coincidence_nonneg(&u, &v, 1.0, 1.0).unwrap(), 0.5);
        for (d, e) in [(1.0, 1.0), (3.0, 1.0), (2.0, 0.0)] {
            assert_eq!(
                coincidence_nonneg(&fv(&[1.0, 0.0]), &fv(&[0.0, 1.0]), d, e).unwrap(),
                0.0
            );
        }
        let scaled = coincidence_nonneg(&fv(&[6.0, 6.0]), &fv(&[3.0, 3.0]), 1.0, 1.0).unwrap();
        assert_eq!(scaled, 0.5);
        assert_eq!(scaled, coincidence(&u, &v, 1.0, 1.0).unwrap());
        assert!(matches!(
            coincidence_nonneg(&fv(&[1.0, -1.0]), &v, 1.0, 1.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn dissimilarity_examples() {
        let u = fv(&[1.0, 2.0]);
        assert_eq!(dissimilarity(&u, &u, 3.0, 1.0).unwrap(), 0.0);
        assert_eq!(
            dissimilarity(&fv(&[1.0, 0.0]), &fv(&[0.0, 1.0]), 3.0, 1.0).unwrap(),
            1.0
        );
        assert_eq!(
            dissimilarity(&fv(&[2.0, 2.0]), &fv(&[1.0, 1.0]), 1.0, 1.0).unwrap(),
            0.5
        );
    }

    #[test]
    fn euclidean_examples() {
        assert_eq!(euclidean(&fv(&[0.0, 0.0]), &fv(&[3.0, 4.0])).unwrap(), 5.0);
        assert_eq!(euclidean(&fv(&[7.0]), &fv(&[7.0])).unwrap(), 0.0);
        assert_eq!(euclidean(&fv(&[1.0]), &fv(&[4.0])).unwrap(), 3.0);
        assert!(euclidean(&fv(&[1.0]), &fv(&[4.0, 1.0])).is_err());
    }

    #[test]
    fn compare_dispatch() {
        let r = compare(ComparatorKind::Euclidean, &fv(&[0.0]), &fv(&[3.0])).unwrap();
        assert_eq!(r.value(), 3.0);
        let same = fv(&[2.0, 2.0]);
        let r = compare(ComparatorKind::dissimilarity(3.0, 1.0).unwrap(), &same, &same).unwrap();
        assert_eq!(r.value(), 0.0);
        let r = compare(
            ComparatorKind::dissimilarity(1.0, 1.0).unwrap(),
            &fv(&[2.0, 2.0]),
            &fv(&[1.0, 1.0]),
        )
        .unwrap();
        assert_eq!(r.value(), 0.5);
    }

    #[test]
    fn comparator_defaults_and_validation() {
        assert_eq!(
            ComparatorKind::default(),
            ComparatorKind::CoincidenceDissimilarity { d: 3.0, e: 1.0 }
        );
        assert!(ComparatorKind::dissimilarity(-1.0, 1.0).is_err());
        assert!(ComparatorKind::dissimilarity(1.0, f64::NAN).is_err());
        assert!(ComparatorKind::dissimilarity(2.0, 0.0).is_ok());
        assert_eq!(ComparatorKind::default().to_string(), "dissimilarity(D=3,E=1)");
    }
}
