//! Bare-bones SVG line/scatter plots. Output depends only on the data, so two
//! runs with the same inputs write identical files.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;

pub(crate) const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

enum Mark {
    Line {
        points: Vec<[f64; 2]>,
        color: String,
        dashed: bool,
    },
    Band {
        lower: Vec<[f64; 2]>,
        upper: Vec<[f64; 2]>,
        color: String,
    },
    Dots {
        points: Vec<[f64; 2]>,
        color: String,
        radius: f64,
    },
}

pub(crate) struct Plot {
    title: String,
    x_label: String,
    y_label: String,
    marks: Vec<Mark>,
    legend: Vec<(String, String)>,
    x_range: Option<(f64, f64)>,
    y_range: Option<(f64, f64)>,
}

/// Pixel coordinates: two decimals, no trailing zeros.
fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn tick_label(v: f64) -> String {
    let s = if v.abs() >= 1e4 || (v != 0.0 && v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else {
        format!("{v:.4}")
    };
    if s.contains('e') {
        return s;
    }
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    pub(crate) fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Plot {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            marks: Vec::new(),
            legend: Vec::new(),
            x_range: None,
            y_range: None,
        }
    }

    pub(crate) fn x_range(mut self, lo: f64, hi: f64) -> Self {
        self.x_range = Some((lo, hi));
        self
    }

    pub(crate) fn y_range(mut self, lo: f64, hi: f64) -> Self {
        self.y_range = Some((lo, hi));
        self
    }

    pub(crate) fn line(&mut self, points: Vec<[f64; 2]>, color: &str, dashed: bool) {
        self.marks.push(Mark::Line {
            points,
            color: color.into(),
            dashed,
        });
    }

    pub(crate) fn band(&mut self, lower: Vec<[f64; 2]>, upper: Vec<[f64; 2]>, color: &str) {
        self.marks.push(Mark::Band {
            lower,
            upper,
            color: color.into(),
        });
    }

    pub(crate) fn dots(&mut self, points: Vec<[f64; 2]>, color: &str, radius: f64) {
        self.marks.push(Mark::Dots {
            points,
            color: color.into(),
            radius,
        });
    }

    pub(crate) fn legend(&mut self, label: &str, color: &str) {
        self.legend.push((label.into(), color.into()));
    }

    fn data_bounds(&self) -> ((f64, f64), (f64, f64)) {
        let mut xs = (f64::INFINITY, f64::NEG_INFINITY);
        let mut ys = (f64::INFINITY, f64::NEG_INFINITY);
        let mut see = |p: &[f64; 2]| {
            if p[0].is_finite() && p[1].is_finite() {
                xs = (xs.0.min(p[0]), xs.1.max(p[0]));
                ys = (ys.0.min(p[1]), ys.1.max(p[1]));
            }
        };
        for mark in &self.marks {
            match mark {
                Mark::Line { points, .. } | Mark::Dots { points, .. } => points.iter().for_each(&mut see),
                Mark::Band { lower, upper, .. } => lower.iter().chain(upper).for_each(&mut see),
            }
        }
        let widen = |(lo, hi): (f64, f64)| {
            if !lo.is_finite() {
                (0.0, 1.0)
            } else if lo == hi {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        };
        (
            self.x_range.unwrap_or_else(|| widen(xs)),
            self.y_range.unwrap_or_else(|| widen(ys)),
        )
    }

    pub(crate) fn render(&self) -> String {
        let ((x0, x1), (y0, y1)) = self.data_bounds();
        let pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| MARGIN_TOP + ph - (y - y0) / (y1 - y0) * ph;
        let path = |pts: &[[f64; 2]]| {
            pts.iter()
                .map(|p| format!("{},{}", num(sx(p[0])), num(sy(p[1]))))
                .collect::<Vec<_>>()
                .join(" ")
        };

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            num(MARGIN_LEFT + pw / 2.0),
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r##"<clipPath id="plot"><rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}"/></clipPath>"##
        );

        for i in 0..=5 {
            let t = i as f64 / 5.0;
            let xv = x0 + t * (x1 - x0);
            let yv = y0 + t * (y1 - y0);
            let (px, py) = (num(sx(xv)), num(sy(yv)));
            let _ = writeln!(
                out,
                r##"<line x1="{px}" y1="{MARGIN_TOP}" x2="{px}" y2="{}" stroke="#e5e5e5"/>"##,
                MARGIN_TOP + ph
            );
            let _ = writeln!(
                out,
                r##"<line x1="{MARGIN_LEFT}" y1="{py}" x2="{}" y2="{py}" stroke="#e5e5e5"/>"##,
                MARGIN_LEFT + pw
            );
            let _ = writeln!(
                out,
                r#"<text x="{px}" y="{}" text-anchor="middle">{}</text>"#,
                MARGIN_TOP + ph + 18.0,
                tick_label(xv)
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{py}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
                MARGIN_LEFT - 6.0,
                tick_label(yv)
            );
        }
        let _ = writeln!(
            out,
            r##"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            num(MARGIN_LEFT + pw / 2.0),
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text transform="translate(18,{}) rotate(-90)" text-anchor="middle">{}</text>"#,
            num(MARGIN_TOP + ph / 2.0),
            escape(&self.y_label)
        );

        let _ = writeln!(out, r#"<g clip-path="url(#plot)">"#);
        for mark in &self.marks {
            match mark {
                Mark::Band { lower, upper, color } => {
                    let mut outline = lower.clone();
                    outline.extend(upper.iter().rev());
                    let _ = writeln!(
                        out,
                        r#"<polygon points="{}" fill="{color}" fill-opacity="0.18" stroke="none"/>"#,
                        path(&outline)
                    );
                }
                Mark::Line { points, color, dashed } => {
                    let dash = if *dashed { r#" stroke-dasharray="5,4""# } else { "" };
                    let _ = writeln!(
                        out,
                        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.6"{dash}/>"#,
                        path(points)
                    );
                }
                Mark::Dots { points, color, radius } => {
                    for p in points {
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{}" cy="{}" r="{radius}" fill="{color}" fill-opacity="0.5"/>"#,
                            num(sx(p[0])),
                            num(sy(p[1]))
                        );
                    }
                }
            }
        }
        let _ = writeln!(out, "</g>");

        for (i, (label, color)) in self.legend.iter().enumerate() {
            let y = MARGIN_TOP + 12.0 + 20.0 * i as f64;
            let x = MARGIN_LEFT + pw + 12.0;
            let _ = writeln!(
                out,
                r#"<rect x="{x}" y="{}" width="14" height="10" fill="{color}"/>"#,
                y - 8.0
            );
            let _ = writeln!(out, r#"<text x="{}" y="{y}">{}</text>"#, x + 20.0, escape(label));
        }
        out.push_str("</svg>\n");
        out
    }
}
