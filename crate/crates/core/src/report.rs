//! Output files for the `coinknn` commands.
//!
//! Every command writes its CSV tables, an SVG rendering and a
//! `manifest.json` into one output directory. CSV output is a pure function
//! of the resolved configuration, so reruns are byte-identical regardless of
//! the worker count; the manifest additionally records a wall-clock
//! timestamp.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::experiment::{
    realization_points, reference_point, run_experiment, run_realizations, AccuracyCell, AccuracyStats,
    RealizationOutcome,
};
use crate::knn::k_nearest;
use crate::sensitivity::{level_set_grid, profile, sensitivity_curve, uniform_grid, LevelSetGrid, Rect};
use crate::similarity::{ComparatorKind, FeatureVector};
use crate::svg::{Plot, PALETTE};
use crate::VERSION;

/// Runs `f` on a dedicated rayon pool with `threads` workers (machine
/// parallelism when `None` or zero).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(f)
}

/// One line of `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub experiment_id: String,
    pub comparator: String,
    pub transform: String,
    pub dim: usize,
    pub k: usize,
    pub mean_beta: f64,
    pub std_beta: f64,
    pub realizations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct HistRow<'a> {
    experiment_id: &'a str,
    comparator: &'a str,
    k: usize,
    beta_value: f64,
    count: u64,
}

pub fn result_rows(cfg: &RunConfig, stats: &AccuracyStats) -> Vec<ResultRow> {
    stats
        .cells
        .iter()
        .map(|c| ResultRow {
            experiment_id: cfg.experiment_id.clone(),
            comparator: c.comparator.name().to_string(),
            transform: cfg.experiment.transform.name(),
            dim: cfg.experiment.dimensions(),
            k: c.k,
            mean_beta: c.mean_beta,
            std_beta: c.std_beta,
            realizations: c.realizations,
        })
        .collect()
}

fn create_dir(out: &Path) -> Result<()> {
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn finish(mut w: csv::Writer<fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_serialized<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv_writer(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    finish(w, path)
}

fn write_histograms<'a>(path: &Path, id: &str, cells: impl IntoIterator<Item = &'a AccuracyCell>) -> Result<()> {
    let mut rows = Vec::new();
    for cell in cells {
        for (&beta_value, &count) in cell.histogram.values.iter().zip(&cell.histogram.counts) {
            rows.push(HistRow {
                experiment_id: id,
                comparator: cell.comparator.name(),
                k: cell.k,
                beta_value,
                count,
            });
        }
    }
    write_serialized(path, rows)
}

/// Writes `manifest.json`, listing `files` plus the manifest itself.
fn write_manifest(cfg: &RunConfig, command: &str, out: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    let path = out.join("manifest.json");
    files.push(path.clone());
    let names: Vec<String> = files
        .iter()
        .filter_map(|f| f.file_name().map(|n| n.to_string_lossy().into_owned()))
        .collect();
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = serde_json::json!({
        "version": VERSION,
        "command": command,
        "seed": cfg.experiment.master_seed,
        "timestamp_unix": timestamp,
        "files": names,
        "config": cfg.to_json(),
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest is valid JSON");
    write_text(&path, &(text + "\n"))
}

fn comparator_color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

/// `sweep`: `results.csv`, `beta_hist.csv`, `sweep.svg`, `manifest.json`.
pub fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    create_dir(out)?;
    let stats = run_experiment(&cfg.experiment)?;

    let results = out.join("results.csv");
    write_serialized(&results, result_rows(cfg, &stats))?;
    let hist = out.join("beta_hist.csv");
    write_histograms(&hist, &cfg.experiment_id, &stats.cells)?;

    let mut plot = Plot::new(&format!("{}: mean β vs k", cfg.experiment_id), "k", "accuracy index β").y_range(0.0, 1.0);
    for (i, &comparator) in cfg.experiment.comparators.iter().enumerate() {
        let cells: Vec<&AccuracyCell> = stats.for_comparator(comparator).collect();
        let at =
            |f: &dyn Fn(&AccuracyCell) -> f64| -> Vec<[f64; 2]> { cells.iter().map(|c| [c.k as f64, f(c)]).collect() };
        let color = comparator_color(i);
        plot.band(
            at(&|c| c.mean_beta - c.std_beta),
            at(&|c| c.mean_beta + c.std_beta),
            color,
        );
        plot.line(at(&|c| c.mean_beta), color, false);
        plot.legend(comparator.name(), color);
    }
    let svg = out.join("sweep.svg");
    write_text(&svg, &plot.render())?;

    let mut files = vec![results, hist, svg];
    write_manifest(cfg, "sweep", out, &mut files)?;
    Ok(files)
}

#[derive(Serialize)]
struct SingleRow<'a> {
    experiment_id: &'a str,
    comparator: &'a str,
    k: usize,
    realization: usize,
    n_a: usize,
    n_b: usize,
    beta: f64,
}

/// `single`: one (comparator, k) cell. Writes the per-realization outcomes to
/// `single.csv`, the exact β histogram to `beta_hist.csv` and a 20-bin
/// histogram to `single.svg`.
pub fn cmd_single(cfg: &RunConfig, comparator: ComparatorKind, k: usize, out: &Path) -> Result<Vec<PathBuf>> {
    if k == 0 || k > cfg.experiment.total_points() {
        return Err(Error::config(
            "k",
            format!("k = {k} outside 1..={}", cfg.experiment.total_points()),
        ));
    }
    create_dir(out)?;
    let mut exp = cfg.experiment.clone();
    exp.comparators = vec![comparator];
    exp.k_values = vec![k];
    let outcomes: Vec<RealizationOutcome> = run_realizations(&exp)?.into_iter().map(|t| t[0][0]).collect();
    let cell = AccuracyCell::from_outcomes(comparator, k, &outcomes)?;

    let single = out.join("single.csv");
    write_serialized(
        &single,
        outcomes.iter().enumerate().map(|(realization, o)| SingleRow {
            experiment_id: &cfg.experiment_id,
            comparator: comparator.name(),
            k,
            realization,
            n_a: o.n_a,
            n_b: o.n_b,
            beta: o.beta,
        }),
    )?;
    let hist = out.join("beta_hist.csv");
    write_histograms(&hist, &cfg.experiment_id, [&cell])?;

    let coarse = cell.histogram.coarse(20);
    let mut steps = Vec::new();
    for (i, &c) in coarse.counts.iter().enumerate() {
        steps.push([coarse.edges[i], c as f64]);
        steps.push([coarse.edges[i + 1], c as f64]);
    }
    let mut plot = Plot::new(
        &format!(
            "{}: {comparator}, k = {k}, mean β = {:.3} ± {:.3}",
            cfg.experiment_id, cell.mean_beta, cell.std_beta
        ),
        "β",
        "realizations",
    )
    .x_range(0.0, 1.0);
    let zero: Vec<[f64; 2]> = steps.iter().map(|p| [p[0], 0.0]).collect();
    plot.band(zero, steps.clone(), PALETTE[0]);
    plot.line(steps, PALETTE[0], false);
    let svg = out.join("single.svg");
    write_text(&svg, &plot.render())?;

    let mut files = vec![single, hist, svg];
    write_manifest(cfg, "single", out, &mut files)?;
    Ok(files)
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// `profile`: `profile.csv` with one value column and one sensitivity column
/// per comparator over a shared grid, plus `profile.svg`.
pub fn cmd_profile(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    create_dir(out)?;
    let p = &cfg.profile;
    let grid = uniform_grid(p.from, p.to, p.points)?;
    let comparators = &cfg.experiment.comparators;
    let curves = comparators
        .iter()
        .map(|&kind| profile(kind, p.reference, &grid))
        .collect::<Result<Vec<_>>>()?;
    let sensitivities = curves.iter().map(sensitivity_curve).collect::<Result<Vec<_>>>()?;

    let path = out.join("profile.csv");
    let mut w = csv_writer(&path)?;
    let mut header = vec!["y".to_string()];
    header.extend(comparators.iter().map(|c| c.name().to_string()));
    header.extend(comparators.iter().map(|c| format!("{}_sensitivity", c.name())));
    w.write_record(&header)?;
    for (i, y) in grid.iter().enumerate() {
        let mut record = vec![y.to_string()];
        record.extend(curves.iter().map(|c| c.values[i].to_string()));
        record.extend(sensitivities.iter().map(|s| opt_cell(s[i])));
        w.write_record(&record)?;
    }
    finish(w, &path)?;

    let mut plot = Plot::new(
        &format!("comparison profiles around y = {}", p.reference),
        "y",
        "value (solid), sensitivity (dashed)",
    );
    for (i, (curve, sens)) in curves.iter().zip(&sensitivities).enumerate() {
        let color = comparator_color(i);
        plot.line(
            grid.iter().zip(&curve.values).map(|(&x, &v)| [x, v]).collect(),
            color,
            false,
        );
        // Split the sensitivity line at the reference so the gap is visible.
        let mut segment = Vec::new();
        for (&x, s) in grid.iter().zip(sens) {
            match s {
                Some(v) => segment.push([x, *v]),
                None => plot.line(std::mem::take(&mut segment), color, true),
            }
        }
        plot.line(segment, color, true);
        plot.legend(curve.kind.name(), color);
    }
    let svg = out.join("profile.svg");
    write_text(&svg, &plot.render())?;

    let mut files = vec![path, svg];
    write_manifest(cfg, "profile", out, &mut files)?;
    Ok(files)
}

/// Bounding box of the points and the reference, padded by 5% and kept in
/// the non-negative quadrant when the data are.
fn default_rect(points: &[[f64; 2]], reference: [f64; 2]) -> Result<Rect> {
    let mut lo = reference;
    let mut hi = reference;
    for p in points {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let pad = |a: usize| {
        let m = 0.05 * (hi[a] - lo[a]).max(1e-9);
        let low = lo[a] - m;
        (if lo[a] >= 0.0 { low.max(0.0) } else { low }, hi[a] + m)
    };
    let (x0, x1) = pad(0);
    let (y0, y1) = pad(1);
    Rect::new(x0, x1, y0, y1)
}

/// Comparator values of the `ranks`-th nearest points to `reference`.
fn rank_levels(
    kind: ComparatorKind,
    reference: &FeatureVector,
    points: &[crate::knn::LabeledPoint],
    ranks: &[usize],
) -> Result<Vec<f64>> {
    let max_rank = ranks.iter().copied().max().unwrap_or(1);
    let ns = k_nearest(reference, points, max_rank, kind)?;
    Ok(ranks.iter().map(|&r| ns.as_slice()[r - 1].value).collect())
}

/// Level sets around the 2D decision point for every comparator, computed on
/// the first realization's samples.
pub fn level_sets(cfg: &RunConfig) -> Result<(Vec<LevelSetGrid>, Vec<crate::knn::LabeledPoint>)> {
    if cfg.experiment.dimensions() != 2 {
        return Err(Error::config("dimensions", "level sets need a 2D configuration"));
    }
    let settings = &cfg.levelsets;
    let points = realization_points(&cfg.experiment, 0)?;
    let reference = match settings.reference {
        Some(r) => r,
        None => {
            let y = reference_point(&cfg.experiment)?.y;
            [y[0], y[1]]
        }
    };
    let rect = match settings.rect()? {
        Some(r) => r,
        None => {
            let xy: Vec<[f64; 2]> = points
                .iter()
                .map(|p| [p.features.as_slice()[0], p.features.as_slice()[1]])
                .collect();
            default_rect(&xy, reference)?
        }
    };
    let reference_fv = FeatureVector::new(reference.to_vec())?;
    let grids = cfg
        .experiment
        .comparators
        .iter()
        .map(|&kind| {
            let levels = match settings.levels.as_ref().and_then(|l| l.for_comparator(&kind)) {
                Some(levels) => levels.clone(),
                None => rank_levels(kind, &reference_fv, &points, &settings.ranks(points.len()))?,
            };
            level_set_grid(kind, reference, rect, settings.resolution, &levels)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((grids, points))
}

#[derive(Serialize)]
struct ContourRow<'a> {
    comparator: &'a str,
    level: f64,
    polyline: usize,
    vertex: usize,
    x: f64,
    y: f64,
    closed: bool,
}

#[derive(Serialize)]
struct SampleRow {
    label: String,
    y1: f64,
    y2: f64,
}

/// `levelsets`: `contours.csv` (one polyline group per level per
/// comparator), `samples.csv`, `levelsets.svg`.
pub fn cmd_levelsets(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let (grids, points) = level_sets(cfg)?;
    create_dir(out)?;

    let contours = out.join("contours.csv");
    let mut rows = Vec::new();
    for g in &grids {
        for (level, polylines) in g.levels.iter().zip(&g.contours) {
            for (pi, line) in polylines.iter().enumerate() {
                for (vi, v) in line.points.iter().enumerate() {
                    rows.push(ContourRow {
                        comparator: g.kind.name(),
                        level: *level,
                        polyline: pi,
                        vertex: vi,
                        x: v[0],
                        y: v[1],
                        closed: line.closed,
                    });
                }
            }
        }
    }
    write_serialized(&contours, rows)?;

    let samples = out.join("samples.csv");
    write_serialized(
        &samples,
        points.iter().map(|p| SampleRow {
            label: p.label.to_string(),
            y1: p.features.as_slice()[0],
            y2: p.features.as_slice()[1],
        }),
    )?;

    let rect = grids[0].rect;
    let mut plot = Plot::new(&format!("{}: level sets", cfg.experiment_id), "y1", "y2")
        .x_range(rect.x_min, rect.x_max)
        .y_range(rect.y_min, rect.y_max);
    for label in [crate::GroupLabel::A, crate::GroupLabel::B] {
        let xy = points
            .iter()
            .filter(|p| p.label == label)
            .map(|p| [p.features.as_slice()[0], p.features.as_slice()[1]])
            .collect();
        plot.dots(
            xy,
            if label == crate::GroupLabel::A {
                "#999999"
            } else {
                "#444444"
            },
            1.2,
        );
    }
    for (i, g) in grids.iter().enumerate() {
        let color = comparator_color(i);
        for line in g.contours.iter().flatten() {
            plot.line(line.points.clone(), color, !g.kind.is_coincidence());
        }
        plot.legend(g.kind.name(), color);
    }
    plot.dots(vec![grids[0].reference], "#000000", 3.5);
    let svg = out.join("levelsets.svg");
    write_text(&svg, &plot.render())?;

    let mut files = vec![contours, samples, svg];
    write_manifest(cfg, "levelsets", out, &mut files)?;
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config_str;

    fn small() -> RunConfig {
        parse_config_str(r#"{"transform": "square", "k_values": [1, 5, 10], "realizations": 20}"#).unwrap()
    }

    #[test]
    fn sweep_writes_expected_tables() {
        let dir = tempfile::tempdir().unwrap();
        let files = cmd_sweep(&small(), dir.path()).unwrap();
        let names: Vec<_> = files.iter().map(|f| f.file_name().unwrap().to_str().unwrap()).collect();
        assert_eq!(names, ["results.csv", "beta_hist.csv", "sweep.svg", "manifest.json"]);

        let results = fs::read_to_string(dir.path().join("results.csv")).unwrap();
        let mut lines = results.lines();
        assert_eq!(
            lines.next().unwrap(),
            "experiment_id,comparator,transform,dim,k,mean_beta,std_beta,realizations"
        );
        assert_eq!(lines.count(), 2 * 3);

        let hist = fs::read_to_string(dir.path().join("beta_hist.csv")).unwrap();
        assert!(hist.starts_with("experiment_id,comparator,k,beta_value,count\n"));

        let manifest: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
        assert_eq!(manifest["files"].as_array().unwrap().len(), 4);
        let echoed = parse_config_str(&manifest["config"].to_string()).unwrap();
        assert_eq!(echoed, small());
    }

    #[test]
    fn unwritable_output_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let err = cmd_sweep(&small(), &blocker.join("sub")).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn single_cell() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small();
        cmd_single(&cfg, ComparatorKind::default(), 5, dir.path()).unwrap();
        let single = fs::read_to_string(dir.path().join("single.csv")).unwrap();
        assert_eq!(single.lines().count(), 1 + 20);
        assert!(cmd_single(&cfg, ComparatorKind::default(), 0, dir.path()).is_err());
    }

    #[test]
    fn profile_shares_grid() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config_str(r#"{"transform": "square", "profile": {"from": 2, "to": 6, "points": 5}}"#).unwrap();
        cmd_profile(&cfg, dir.path()).unwrap();
        let text = fs::read_to_string(dir.path().join("profile.csv")).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "y,euclidean,dissimilarity,euclidean_sensitivity,dissimilarity_sensitivity"
        );
        assert_eq!(lines.len(), 6);
        assert!(lines[3].starts_with("4,0,0,,"));
    }

    #[test]
    fn levelsets_need_two_dimensions() {
        let dir = tempfile::tempdir().unwrap();
        let err = cmd_levelsets(&small(), dir.path()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
