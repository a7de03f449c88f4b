//! Comparator profiles around a fixed reference, their numerical
//! sensitivity, and iso-contours of 2D comparator fields.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::similarity::{compare, ComparatorKind, FeatureVector};

/// Lattice size used when none is requested.
pub const DEFAULT_RESOLUTION: usize = 512;

/// `count` evenly spaced points from `from` to `to`, both included.
///
/// Points are computed as `from + (to - from) * i / (count - 1)` so that
/// round values such as a reference abscissa land exactly on the grid.
pub fn uniform_grid(from: f64, to: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(from.is_finite() && to.is_finite()) || from >= to {
        return Err(Error::invalid(format!(
            "grid needs from < to and at least 2 points, got [{from}, {to}] x {count}"
        )));
    }
    let span = to - from;
    let last = (count - 1) as f64;
    Ok((0..count).map(|i| from + span * i as f64 / last).collect())
}

/// Comparator values against a scalar reference along a 1D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub kind: ComparatorKind,
    pub reference: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl ProfileCurve {
    /// Same curve with every value multiplied by `factor`, e.g. `1 / reference`
    /// to express a Euclidean profile as a relative deviation.
    pub fn scaled(&self, factor: f64) -> ProfileCurve {
        ProfileCurve {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }
}

pub fn profile(kind: ComparatorKind, reference: f64, grid: &[f64]) -> Result<ProfileCurve> {
    if grid.is_empty() {
        return Err(Error::invalid("profile grid is empty"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("profile grid must be strictly increasing"));
    }
    let r = FeatureVector::new(vec![reference])?;
    let values = grid
        .iter()
        .map(|&y| Ok(compare(kind, &r, &FeatureVector::new(vec![y])?)?.value()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProfileCurve {
        kind,
        reference,
        grid: grid.to_vec(),
        values,
    })
}

/// `|d value / dy|` along the profile.
///
/// Interior points use central differences and the two ends one-sided ones.
/// A stencil never spans the reference: next to it the one-sided difference
/// away from the reference is used, and the reference abscissa itself, where
/// the profile has a kink, is reported as `None`.
pub fn sensitivity_curve(p: &ProfileCurve) -> Result<Vec<Option<f64>>> {
    let (g, v) = (&p.grid, &p.values);
    let n = g.len();
    if n < 3 {
        return Err(Error::invalid(format!(
            "sensitivity needs at least 3 grid points, got {n}"
        )));
    }
    let slope = |a: usize, b: usize| ((v[b] - v[a]) / (g[b] - g[a])).abs();
    let spans_reference = |a: usize, b: usize| g[a] < p.reference && p.reference < g[b];
    Ok((0..n)
        .map(|i| {
            if g[i] == p.reference {
                return None;
            }
            let value = if i == 0 {
                slope(0, 1)
            } else if i == n - 1 {
                slope(n - 2, n - 1)
            } else if !spans_reference(i - 1, i + 1) {
                slope(i - 1, i + 1)
            } else if p.reference < g[i] {
                slope(i, i + 1)
            } else {
                slope(i - 1, i)
            };
            Some(value)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let r = Rect {
            x_min,
            x_max,
            y_min,
            y_max,
        };
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_min >= x_max || y_min >= y_max {
            return Err(Error::invalid(format!("degenerate rectangle {r:?}")));
        }
        Ok(r)
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        (self.x_min..=self.x_max).contains(&p[0]) && (self.y_min..=self.y_max).contains(&p[1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    /// First and last points coincide in the lattice (the curve closes on
    /// itself); otherwise both ends lie on the rectangle boundary.
    pub closed: bool,
}

/// Comparator field sampled on a lattice, with its iso-contours.
#[derive(Debug, Clone)]
pub struct LevelSetGrid {
    pub kind: ComparatorKind,
    pub reference: [f64; 2],
    pub rect: Rect,
    /// Nodes per axis.
    pub resolution: usize,
    /// Row-major node values: `values[row * resolution + col]`, where rows
    /// run along the second coordinate.
    pub values: Vec<f64>,
    pub levels: Vec<f64>,
    /// `contours[l]` holds the polylines of `levels[l]`.
    pub contours: Vec<Vec<Polyline>>,
}

impl LevelSetGrid {
    pub fn node(&self, col: usize, row: usize) -> [f64; 2] {
        node_position(&self.rect, self.resolution, col, row)
    }

    pub fn value(&self, col: usize, row: usize) -> f64 {
        self.values[row * self.resolution + col]
    }
}

fn node_position(rect: &Rect, res: usize, col: usize, row: usize) -> [f64; 2] {
    let last = (res - 1) as f64;
    [
        rect.x_min + (rect.x_max - rect.x_min) * col as f64 / last,
        rect.y_min + (rect.y_max - rect.y_min) * row as f64 / last,
    ]
}

pub fn level_set_grid(
    kind: ComparatorKind,
    reference: [f64; 2],
    rect: Rect,
    resolution: usize,
    levels: &[f64],
) -> Result<LevelSetGrid> {
    kind.validate()?;
    if resolution < 2 {
        return Err(Error::invalid(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    let rect = Rect::new(rect.x_min, rect.x_max, rect.y_min, rect.y_max)?;
    if !rect.contains(reference) {
        return Err(Error::invalid(format!("reference {reference:?} outside {rect:?}")));
    }
    if kind.is_coincidence() && (rect.x_min < 0.0 || rect.y_min < 0.0) {
        return Err(Error::invalid(
            "coincidence level sets need a rectangle in the positive quadrant",
        ));
    }
    if let Some(bad) = levels.iter().find(|l| !l.is_finite()) {
        return Err(Error::invalid(format!("non-finite level {bad}")));
    }
    let r = FeatureVector::new(reference.to_vec())?;
    let values = (0..resolution)
        .into_par_iter()
        .map(|row| {
            (0..resolution)
                .map(|col| {
                    let p = node_position(&rect, resolution, col, row);
                    Ok(compare(kind, &r, &FeatureVector::new(p.to_vec())?)?.value())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    let mut grid = LevelSetGrid {
        kind,
        reference,
        rect,
        resolution,
        values,
        levels: levels.to_vec(),
        contours: Vec::new(),
    };
    grid.contours = levels.iter().map(|&l| marching_squares(&grid, l)).collect();
    Ok(grid)
}

/// Lattice edge identifier: horizontal edges start at node `(col, row)` and
/// run to `(col + 1, row)`; vertical ones run to `(col, row + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeKey {
    H(usize, usize),
    V(usize, usize),
}

struct Segment {
    ends: [(EdgeKey, [f64; 2]); 2],
}

fn crossing(grid: &LevelSetGrid, level: f64, edge: EdgeKey) -> [f64; 2] {
    let ((c0, r0), (c1, r1)) = match edge {
        EdgeKey::H(c, r) => ((c, r), (c + 1, r)),
        EdgeKey::V(c, r) => ((c, r), (c, r + 1)),
    };
    let (va, vb) = (grid.value(c0, r0), grid.value(c1, r1));
    let t = if vb == va {
        0.5
    } else {
        ((level - va) / (vb - va)).clamp(0.0, 1.0)
    };
    let (pa, pb) = (grid.node(c0, r0), grid.node(c1, r1));
    [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
}

fn cell_segments(grid: &LevelSetGrid, level: f64, col: usize, row: usize, out: &mut Vec<Segment>) {
    let v00 = grid.value(col, row);
    let v10 = grid.value(col + 1, row);
    let v11 = grid.value(col + 1, row + 1);
    let v01 = grid.value(col, row + 1);
    let above = [v00 >= level, v10 >= level, v11 >= level, v01 >= level];
    let bottom = EdgeKey::H(col, row);
    let right = EdgeKey::V(col + 1, row);
    let top = EdgeKey::H(col, row + 1);
    let left = EdgeKey::V(col, row);
    // Edge i joins corner i and corner i+1 (counter-clockwise from (0,0)).
    let edges = [bottom, right, top, left];
    let crossed: Vec<EdgeKey> = (0..4)
        .filter(|&i| above[i] != above[(i + 1) % 4])
        .map(|i| edges[i])
        .collect();
    let mut push = |a: EdgeKey, b: EdgeKey| {
        out.push(Segment {
            ends: [(a, crossing(grid, level, a)), (b, crossing(grid, level, b))],
        })
    };
    match crossed.len() {
        2 => push(crossed[0], crossed[1]),
        4 => {
            // Saddle: the cell-center average decides which diagonal connects.
            let center = 0.25 * (v00 + v10 + v11 + v01);
            if (center >= level) == above[0] {
                push(bottom, right);
                push(top, left);
            } else {
                push(left, bottom);
                push(right, top);
            }
        }
        _ => {}
    }
}

fn marching_squares(grid: &LevelSetGrid, level: f64) -> Vec<Polyline> {
    let res = grid.resolution;
    let mut segments = Vec::new();
    for row in 0..res - 1 {
        for col in 0..res - 1 {
            cell_segments(grid, level, col, row, &mut segments);
        }
    }
    join_segments(&segments)
}

fn join_segments(segments: &[Segment]) -> Vec<Polyline> {
    let mut by_edge: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (i, s) in segments.iter().enumerate() {
        for (key, _) in &s.ends {
            by_edge.entry(*key).or_default().push(i);
        }
    }
    let degree = |key: &EdgeKey| by_edge.get(key).map_or(0, Vec::len);
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();

    // Open chains start at an edge touched by a single segment; whatever is
    // left afterwards forms closed loops.
    let mut starts = Vec::new();
    for (i, s) in segments.iter().enumerate() {
        for e in 0..2 {
            if degree(&s.ends[e].0) == 1 {
                starts.push((i, e));
            }
        }
    }
    starts.extend((0..segments.len()).map(|i| (i, 0)));
    for (start, end_idx) in starts {
        if used[start] {
            continue;
        }
        let closed_candidate = degree(&segments[start].ends[end_idx].0) > 1;
        let mut points = vec![segments[start].ends[end_idx].1];
        let mut current = start;
        let mut exit = 1 - end_idx;
        loop {
            used[current] = true;
            let (key, point) = segments[current].ends[exit];
            points.push(point);
            let next = by_edge[&key].iter().copied().find(|&j| !used[j]);
            match next {
                Some(j) => {
                    exit = if segments[j].ends[0].0 == key { 1 } else { 0 };
                    current = j;
                }
                None => break,
            }
        }
        let closed = closed_candidate && {
            let first_key = segments[start].ends[end_idx].0;
            let last_key = segments[current].ends[exit].0;
            first_key == last_key
        };
        lines.push(Polyline { points, closed });
    }
    lines
}
