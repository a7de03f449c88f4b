//! k-nearest-neighbor comparison of the Euclidean distance and the
//! coincidence-similarity dissimilarity on skewed feature densities.
//!
//! The crate is organized bottom-up:
//!
//! * [`similarity`]: the coincidence index over np-sets, its dissimilarity,
//!   the Euclidean distance and the [`compare`] dispatch point.
//! * [`densities`]: monotone transforms of uniform and normal bases, their
//!   analytic densities and seeded samplers for 1D and separable 2D groups.
//! * [`knn`]: exact neighbor retrieval with deterministic tie-breaking.
//! * [`experiment`]: the accuracy index β and Monte Carlo sweeps over `k`.
//! * [`sensitivity`]: comparator profiles, finite-difference sensitivity
//!   and marching-squares level sets.
//! * [`config`] and [`report`]: JSON configuration and the CSV/SVG writers
//!   behind the `coinknn` command-line tool.
//!
//! ```
//! use coinknn::{coincidence, dissimilarity, FeatureVector};
//!
//! let u = FeatureVector::new(vec![2.0, 2.0]).unwrap();
//! let v = FeatureVector::new(vec![1.0, 1.0]).unwrap();
//! assert_eq!(coincidence(&u, &v, 1.0, 1.0).unwrap(), 0.5);
//! assert_eq!(dissimilarity(&u, &v, 3.0, 1.0).unwrap(), 0.875);
//! ```

pub mod config;
pub mod densities;
pub mod error;
pub mod experiment;
pub mod knn;
pub mod report;
pub mod rng;
pub mod sensitivity;
pub mod similarity;
mod svg;

pub use densities::{
    sample_group, sample_group_2d, transformed_cdf, transformed_pdf, BaseDensity, GroupLabel, GroupSpec, Sample1D,
    Sample2D, TransformKind,
};
pub use error::{Error, Result};
pub use experiment::{
    accuracy_beta, reference_point, run_experiment, run_realization, AccuracyCell, AccuracyStats, ExperimentConfig,
    GroupConfig, RealizationOutcome, ReferencePoint,
};
pub use knn::{classify, count_by_group, k_nearest, LabeledPoint, Neighbor, NeighborSet};
pub use sensitivity::{level_set_grid, profile, sensitivity_curve, LevelSetGrid, ProfileCurve, Rect};
pub use similarity::{
    coincidence, coincidence_nonneg, compare, dissimilarity, euclidean, npset_decompose, ComparatorKind,
    ComparisonResult, FeatureVector, NpSet,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
