//! Skewed feature densities obtained by monotone transforms of symmetric
//! base densities.
//!
//! A feature `x` drawn from a uniform or normal base density is mapped to
//! `y = f(x)` by one of a small family of strictly increasing transforms.
//! The density of `y` follows from the change of variables
//! `p_y(y) = p_x(f⁻¹(y)) / f'(f⁻¹(y))`, which [`transformed_pdf`] evaluates
//! directly. All features are kept non-negative: uniform supports must lie
//! in `[0, ∞)` and normal bases are truncated at zero by rejection.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Default rate of the exponential transform `e^{αx}`.
pub const DEFAULT_EXP_ALPHA: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformKind {
    /// `y = 2^x`
    PowerOfTwo,
    /// `y = x²`, for `x >= 0`
    Square,
    /// `y = x³`, for `x >= 0`
    Cube,
    /// `y = e^{αx}` with `α > 0`
    ExpAlpha(f64),
    /// `y = x`
    Identity,
}

impl TransformKind {
    /// The four right-skewing transforms, in the usual reporting order.
    pub fn skewed() -> [TransformKind; 4] {
        [
            TransformKind::PowerOfTwo,
            TransformKind::Square,
            TransformKind::Cube,
            TransformKind::ExpAlpha(DEFAULT_EXP_ALPHA),
        ]
    }

    /// All five transforms, skewed ones first.
    pub fn all() -> [TransformKind; 5] {
        let [a, b, c, d] = Self::skewed();
        [a, b, c, d, TransformKind::Identity]
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            TransformKind::ExpAlpha(alpha) if !(alpha.is_finite() && alpha > 0.0) => Err(Error::invalid(format!(
                "exponential rate must be positive, got {alpha}"
            ))),
            _ => Ok(()),
        }
    }

    /// Smallest admissible input, if the transform has one.
    pub fn domain_min(&self) -> Option<f64> {
        match self {
            TransformKind::Square | TransformKind::Cube => Some(0.0),
            _ => None,
        }
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::invalid(format!("non-finite transform input {x}")));
        }
        if let Some(min) = self.domain_min() {
            if x < min {
                return Err(Error::invalid(format!("{self} requires x >= {min}, got {x}")));
            }
        }
        let y = match *self {
            TransformKind::PowerOfTwo => x.exp2(),
            TransformKind::Square => x * x,
            TransformKind::Cube => x * x * x,
            TransformKind::ExpAlpha(alpha) => (alpha * x).exp(),
            TransformKind::Identity => x,
        };
        if !y.is_finite() {
            return Err(Error::invalid(format!("{self}({x}) overflows")));
        }
        Ok(y)
    }

    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !y.is_finite() {
            return Err(Error::invalid(format!("non-finite transform output {y}")));
        }
        let outside = || Error::invalid(format!("{y} is outside the image of {self}"));
        match *self {
            TransformKind::PowerOfTwo if y > 0.0 => Ok(y.log2()),
            TransformKind::Square if y >= 0.0 => Ok(y.sqrt()),
            TransformKind::Cube if y >= 0.0 => Ok(y.cbrt()),
            TransformKind::ExpAlpha(alpha) if y > 0.0 => Ok(y.ln() / alpha),
            TransformKind::Identity => Ok(y),
            _ => Err(outside()),
        }
    }

    /// `f'(x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            TransformKind::PowerOfTwo => std::f64::consts::LN_2 * x.exp2(),
            TransformKind::Square => 2.0 * x,
            TransformKind::Cube => 3.0 * x * x,
            TransformKind::ExpAlpha(alpha) => alpha * (alpha * x).exp(),
            TransformKind::Identity => 1.0,
        }
    }

    pub fn is_skewed(&self) -> bool {
        !matches!(self, TransformKind::Identity)
    }

    /// Stable name used in configs and result tables.
    pub fn name(&self) -> String {
        match *self {
            TransformKind::PowerOfTwo => "power2".into(),
            TransformKind::Square => "square".into(),
            TransformKind::Cube => "cube".into(),
            TransformKind::ExpAlpha(alpha) if alpha == DEFAULT_EXP_ALPHA => "exp".into(),
            TransformKind::ExpAlpha(alpha) => format!("exp({alpha})"),
            TransformKind::Identity => "identity".into(),
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    /// Accepts `power2`, `square`, `cube`, `exp`, `exp(<alpha>)` and
    /// `identity`, plus a few aliases (`2^x`, `x^2`, `x^3`, `linear`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let kind = match s.to_ascii_lowercase().as_str() {
            "power2" | "pow2" | "2^x" | "power" => TransformKind::PowerOfTwo,
            "square" | "x^2" | "quadratic" => TransformKind::Square,
            "cube" | "x^3" | "cubic" => TransformKind::Cube,
            "exp" | "exponential" => TransformKind::ExpAlpha(DEFAULT_EXP_ALPHA),
            "identity" | "linear" | "x" => TransformKind::Identity,
            other => {
                let alpha = other
                    .strip_prefix("exp(")
                    .and_then(|rest| rest.strip_suffix(')'))
                    .and_then(|a| a.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::invalid(format!("unknown transform `{s}`")))?;
                TransformKind::ExpAlpha(alpha)
            }
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl Serialize for TransformKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for TransformKind {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Symmetric base density of the primary feature `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseDensity {
    Uniform {
        low: f64,
        high: f64,
    },
    /// Normal density, truncated to `x >= 0`.
    Normal {
        mean: f64,
        sd: f64,
    },
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

impl BaseDensity {
    pub fn uniform(low: f64, high: f64) -> Result<Self> {
        let b = BaseDensity::Uniform { low, high };
        b.validate()?;
        Ok(b)
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        let b = BaseDensity::Normal { mean, sd };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BaseDensity::Uniform { low, high } => {
                if !(low.is_finite() && high.is_finite() && low < high) {
                    return Err(Error::invalid(format!("uniform needs low < high, got [{low}, {high}]")));
                }
                if low < 0.0 {
                    return Err(Error::invalid(format!(
                        "uniform support must be non-negative, got low = {low}"
                    )));
                }
            }
            BaseDensity::Normal { mean, sd } => {
                if !(mean.is_finite() && sd.is_finite() && sd > 0.0) {
                    return Err(Error::invalid(format!(
                        "normal needs finite mean and sd > 0, got ({mean}, {sd})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Support `[lo, hi]` after truncation; `hi` is infinite for normals.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            BaseDensity::Uniform { low, high } => (low, high),
            BaseDensity::Normal { .. } => (0.0, f64::INFINITY),
        }
    }

    /// Probability mass the untruncated normal puts on `x >= 0`.
    fn normal_mass(mean: f64, sd: f64) -> f64 {
        1.0 - std_normal_cdf(-mean / sd)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            BaseDensity::Uniform { low, high } => {
                if (low..=high).contains(&x) {
                    1.0 / (high - low)
                } else {
                    0.0
                }
            }
            BaseDensity::Normal { mean, sd } => {
                if x < 0.0 {
                    return 0.0;
                }
                let z = (x - mean) / sd;
                (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt()) / Self::normal_mass(mean, sd)
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            BaseDensity::Uniform { low, high } => ((x - low) / (high - low)).clamp(0.0, 1.0),
            BaseDensity::Normal { mean, sd } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let below_zero = std_normal_cdf(-mean / sd);
                ((std_normal_cdf((x - mean) / sd) - below_zero) / (1.0 - below_zero)).clamp(0.0, 1.0)
            }
        }
    }

    /// Draws one `x`; normal draws below zero are rejected and redrawn.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            BaseDensity::Uniform { low, high } => rng.random_range(low..high),
            BaseDensity::Normal { mean, sd } => {
                let normal = Normal::new(mean, sd).expect("validated normal parameters");
                loop {
                    let x = normal.sample(rng);
                    if x >= 0.0 {
                        return x;
                    }
                }
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            BaseDensity::Uniform { low, high } => 0.5 * (low + high),
            BaseDensity::Normal { mean, .. } => mean,
        }
    }
}

impl fmt::Display for BaseDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseDensity::Uniform { low, high } => write!(f, "uniform({low},{high})"),
            BaseDensity::Normal { mean, sd } => write!(f, "normal({mean},{sd})"),
        }
    }
}

/// Density of `y = f(x)` at `y`; zero outside the image of the base support.
///
/// At a point where `f'` vanishes (`y = 0` under `Square` or `Cube`) the
/// density may be infinite.
pub fn transformed_pdf(base: &BaseDensity, kind: TransformKind, y: f64) -> f64 {
    let Ok(x) = kind.inverse(y) else {
        return 0.0;
    };
    let (lo, hi) = base.support();
    if x < lo || x > hi {
        return 0.0;
    }
    let px = base.pdf(x);
    if px == 0.0 {
        return 0.0;
    }
    px / kind.derivative(x)
}

/// Distribution function of `y = f(x)`.
pub fn transformed_cdf(base: &BaseDensity, kind: TransformKind, y: f64) -> f64 {
    match kind.inverse(y) {
        Ok(x) => base.cdf(x),
        // Every image is bounded below only, so a rejected finite y lies below it.
        Err(_) if y == f64::INFINITY => 1.0,
        Err(_) => 0.0,
    }
}

/// Interval `[f(lo), f(hi)]` carrying the transformed density.
pub fn image_interval(base: &BaseDensity, kind: TransformKind) -> Result<(f64, f64)> {
    let (lo, hi) = base.support();
    let lo = kind.apply(lo.max(kind.domain_min().unwrap_or(lo)))?;
    let hi = if hi.is_finite() { kind.apply(hi)? } else { f64::INFINITY };
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupLabel {
    A,
    B,
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::A => f.write_str("A"),
            GroupLabel::B => f.write_str("B"),
        }
    }
}

/// One group along one feature axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupSpec {
    pub label: GroupLabel,
    pub base: BaseDensity,
    pub transform: TransformKind,
    pub n: usize,
}

impl GroupSpec {
    pub fn new(label: GroupLabel, base: BaseDensity, transform: TransformKind, n: usize) -> Result<Self> {
        let spec = GroupSpec {
            label,
            base,
            transform,
            n,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.transform.validate()?;
        if self.n == 0 {
            return Err(Error::invalid("group sample count must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample1D {
    pub y: f64,
    pub label: GroupLabel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample2D {
    pub y: [f64; 2],
    pub label: GroupLabel,
}

fn draw<R: Rng + ?Sized>(spec: &GroupSpec, rng: &mut R) -> Result<f64> {
    spec.transform.apply(spec.base.sample(rng))
}

pub fn sample_group<R: Rng + ?Sized>(spec: &GroupSpec, rng: &mut R) -> Result<Vec<Sample1D>> {
    spec.validate()?;
    (0..spec.n)
        .map(|_| {
            Ok(Sample1D {
                y: draw(spec, rng)?,
                label: spec.label,
            })
        })
        .collect()
}

/// Separable 2D group: each point draws `x1` then `x2` independently and
/// transforms each with its own axis transform.
pub fn sample_group_2d<R: Rng + ?Sized>(axis1: &GroupSpec, axis2: &GroupSpec, rng: &mut R) -> Result<Vec<Sample2D>> {
    axis1.validate()?;
    axis2.validate()?;
    if axis1.label != axis2.label {
        return Err(Error::invalid("both axes of a 2D group must share one label"));
    }
    if axis1.n != axis2.n {
        return Err(Error::invalid("both axes of a 2D group must share one sample count"));
    }
    (0..axis1.n)
        .map(|_| {
            let y1 = draw(axis1, rng)?;
            let y2 = draw(axis2, rng)?;
            Ok(Sample2D {
                y: [y1, y2],
                label: axis1.label,
            })
        })
        .collect()
}
