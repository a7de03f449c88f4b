//! Iso-contours of both comparators around a 2D reference point, summarized
//! as one line per contour with its vertex count and bounding box.

use coinknn::{level_set_grid, ComparatorKind, Rect};

fn main() -> coinknn::Result<()> {
    let reference = [6.0, 9.0];
    let rect = Rect::new(0.0, 24.0, 0.0, 24.0)?;
    let cases = [
        (ComparatorKind::Euclidean, vec![1.0, 3.0, 6.0]),
        (ComparatorKind::default(), vec![0.2, 0.4, 0.6]),
    ];
    for (kind, levels) in cases {
        let grid = level_set_grid(kind, reference, rect, 241, &levels)?;
        println!("{}", kind.name());
        for (level, lines) in grid.levels.iter().zip(&grid.contours) {
            for line in lines {
                let (lo, hi) = line.points.iter().fold(([f64::MAX; 2], [f64::MIN; 2]), |(lo, hi), p| {
                    ([lo[0].min(p[0]), lo[1].min(p[1])], [hi[0].max(p[0]), hi[1].max(p[1])])
                });
                println!(
                    "  level {level:<4} {:>4} vertices, {}, y1 [{:.2}, {:.2}] y2 [{:.2}, {:.2}]",
                    line.points.len(),
                    if line.closed { "closed" } else { "open  " },
                    lo[0],
                    hi[0],
                    lo[1],
                    hi[1]
                );
            }
        }
    }
    Ok(())
}
