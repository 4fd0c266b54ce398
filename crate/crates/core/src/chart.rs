//! Minimal SVG bar and line charts.
//!
//! Output is a pure function of the [`ChartSpec`]: fixed canvas, fixed
//! number formatting, no timestamps. Every plotted value is also written as
//! a `<text class="value">` label with four decimals, and [`ChartSpec::to_csv`]
//! uses the same formatting, so the two can be compared textually.

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const WIDTH: f64 = 720.0;
pub const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 96.0;

const PALETTE: [&str; 6] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#af7aa1",
];

pub const GRADE_RANGE: (f64, f64) = (1.0, 12.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    Bar,
    GroupedBar,
    Line,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub kind: ChartKind,
    pub title: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub y_range: (f64, f64),
}

pub fn format_value(v: f64) -> String {
    format!("{v:.4}")
}

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Upper bound for an auto-scaled axis starting at zero: the next multiple
/// of 0.5 at or above the maximum.
pub fn auto_range(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let max = values.into_iter().fold(0.0f64, f64::max);
    let top = (max / 0.5).ceil() * 0.5;
    (0.0, if top > 0.0 { top } else { 0.5 })
}

impl ChartSpec {
    pub fn validate(&self) -> Result<()> {
        if self.series.is_empty() {
            return Err(Error::Chart(format!("{}: no series", self.title)));
        }
        let (lo, hi) = self.y_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Chart(format!("{}: bad y range", self.title)));
        }
        for s in &self.series {
            if s.points.iter().any(|(_, y)| !y.is_finite()) {
                return Err(Error::Chart(format!("{}: non-finite value", self.title)));
            }
            match self.kind {
                ChartKind::Line if s.points.is_empty() => {
                    return Err(Error::Chart(format!("{}: empty line series", self.title)));
                }
                ChartKind::Bar | ChartKind::GroupedBar => {
                    let mut labels: Vec<&str> = s.points.iter().map(|(x, _)| x.as_str()).collect();
                    labels.sort_unstable();
                    if labels.windows(2).any(|w| w[0] == w[1]) {
                        return Err(Error::Chart(format!(
                            "{}: repeated category in series {}",
                            self.title, s.label
                        )));
                    }
                }
                ChartKind::Line => {}
            }
        }
        if self.kind == ChartKind::Bar && self.series.len() != 1 {
            return Err(Error::Chart(format!(
                "{}: bar chart takes one series",
                self.title
            )));
        }
        Ok(())
    }

    /// Category labels in first-appearance order across series.
    fn categories(&self) -> Vec<&str> {
        let mut cats: Vec<&str> = Vec::new();
        for s in &self.series {
            for (x, _) in &s.points {
                if !cats.contains(&x.as_str()) {
                    cats.push(x);
                }
            }
        }
        cats
    }

    /// `series,x,y` rows with the same value formatting as the SVG labels.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["series", "x", "y"])
            .expect("in-memory write");
        for s in &self.series {
            for (x, y) in &s.points {
                w.write_record([s.label.as_str(), x.as_str(), &format_value(*y)])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn render_svg(&self) -> Result<String> {
        self.validate()?;
        let mut svg = String::new();
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let (lo, hi) = self.y_range;
        let y_px = |v: f64| {
            let t = ((v.clamp(lo, hi) - lo) / (hi - lo)).clamp(0.0, 1.0);
            MARGIN_TOP + plot_h * (1.0 - t)
        };

        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
        );
        let _ = writeln!(
            svg,
            r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text class="title" x="{:.1}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
            WIDTH / 2.0,
            esc(&self.title)
        );

        // axes and horizontal grid
        let step = tick_step(hi - lo);
        let first = (lo / step - 1e-9).ceil() as i64;
        let last = (hi / step + 1e-9).floor() as i64;
        for k in first..=last {
            let t = k as f64 * step;
            let y = y_px(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{MARGIN_LEFT:.1}" y1="{y:.2}" x2="{:.1}" y2="{y:.2}" stroke="#dddddd"/>"##,
                WIDTH - MARGIN_RIGHT
            );
            let _ = writeln!(
                svg,
                r#"<text class="tick" x="{:.1}" y="{:.2}" text-anchor="end" font-size="11">{}</text>"#,
                MARGIN_LEFT - 6.0,
                y + 4.0,
                trim_tick(t)
            );
        }
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT:.1}" y1="{MARGIN_TOP:.1}" x2="{MARGIN_LEFT:.1}" y2="{:.1}" stroke="#333333"/>"##,
            MARGIN_TOP + plot_h
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#333333"/>"##,
            MARGIN_TOP + plot_h,
            WIDTH - MARGIN_RIGHT,
            MARGIN_TOP + plot_h
        );
        let _ = writeln!(
            svg,
            r#"<text class="axis-label" x="16" y="{:.1}" font-size="12" transform="rotate(-90 16 {:.1})" text-anchor="middle">{}</text>"#,
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            esc(&self.y_label)
        );

        let cats = self.categories();
        let band = plot_w / cats.len().max(1) as f64;
        let cx = |i: usize| MARGIN_LEFT + band * (i as f64 + 0.5);
        for (i, c) in cats.iter().enumerate() {
            let x = cx(i);
            let y = MARGIN_TOP + plot_h + 16.0;
            let _ = writeln!(
                svg,
                r#"<text class="category" x="{x:.2}" y="{y:.1}" font-size="11" text-anchor="end" transform="rotate(-30 {x:.2} {y:.1})">{}</text>"#,
                esc(c)
            );
        }

        let base_y = y_px(lo);
        match self.kind {
            ChartKind::Bar | ChartKind::GroupedBar => {
                let m = self.series.len() as f64;
                let bar_w = band * 0.8 / m;
                for (si, s) in self.series.iter().enumerate() {
                    let color = PALETTE[si % PALETTE.len()];
                    for (x, v) in &s.points {
                        let ci = cats.iter().position(|c| c == x).expect("category listed");
                        let left = cx(ci) - band * 0.4 + bar_w * si as f64;
                        let top = y_px(*v);
                        let _ = writeln!(
                            svg,
                            r#"<rect x="{left:.2}" y="{top:.2}" width="{bar_w:.2}" height="{:.2}" fill="{color}"/>"#,
                            (base_y - top).max(0.0)
                        );
                        let _ = writeln!(
                            svg,
                            r#"<text class="value" data-series="{}" data-x="{}" x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
                            esc(&s.label),
                            esc(x),
                            left + bar_w / 2.0,
                            top - 4.0,
                            format_value(*v)
                        );
                    }
                }
            }
            ChartKind::Line => {
                for (si, s) in self.series.iter().enumerate() {
                    let color = PALETTE[si % PALETTE.len()];
                    let coords: Vec<(f64, f64)> = s
                        .points
                        .iter()
                        .map(|(x, v)| {
                            let ci = cats.iter().position(|c| c == x).expect("category listed");
                            (cx(ci), y_px(*v))
                        })
                        .collect();
                    let path: Vec<String> = coords
                        .iter()
                        .map(|(x, y)| format!("{x:.2},{y:.2}"))
                        .collect();
                    let _ = writeln!(
                        svg,
                        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                        path.join(" ")
                    );
                    for ((x, v), (px, py)) in s.points.iter().zip(&coords) {
                        let _ = writeln!(
                            svg,
                            r#"<circle cx="{px:.2}" cy="{py:.2}" r="3" fill="{color}"/>"#
                        );
                        let _ = writeln!(
                            svg,
                            r#"<text class="value" data-series="{}" data-x="{}" x="{px:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
                            esc(&s.label),
                            esc(x),
                            py - 6.0,
                            format_value(*v)
                        );
                    }
                }
            }
        }

        if self.series.len() > 1 {
            for (si, s) in self.series.iter().enumerate() {
                let y = MARGIN_TOP - 14.0;
                let x = MARGIN_LEFT + 8.0 + 160.0 * si as f64;
                let _ = writeln!(
                    svg,
                    r#"<rect x="{x:.1}" y="{:.1}" width="10" height="10" fill="{}"/>"#,
                    y - 9.0,
                    PALETTE[si % PALETTE.len()]
                );
                let _ = writeln!(
                    svg,
                    r#"<text class="legend" x="{:.1}" y="{y:.1}" font-size="11">{}</text>"#,
                    x + 14.0,
                    esc(&s.label)
                );
            }
        }
        svg.push_str("</svg>\n");
        Ok(svg)
    }
}

fn tick_step(span: f64) -> f64 {
    if span > 6.0 {
        1.0
    } else if span > 2.0 {
        0.5
    } else if span > 0.8 {
        0.25
    } else {
        0.1
    }
}

fn trim_tick(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}
