//! Minimal SVG line plot: data polylines, horizontal reference lines, linear
//! axes with ticks, and a legend.

use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;
const TICK: f64 = 6.0;

/// Series colours in drawing order.
pub const PALETTE: [&str; 6] = [
    "#17becf", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceLine {
    pub y: f64,
    pub color: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub series: Vec<Series>,
    pub references: Vec<ReferenceLine>,
}

/// Round tick positions covering [lo, hi] with roughly `target` intervals.
pub fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    if !(hi > lo) || target == 0 {
        return vec![lo];
    }
    let raw = (hi - lo) / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

impl Plot {
    fn px(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        LEFT + (x - lo) / (hi - lo) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        HEIGHT - BOTTOM - (y - lo) / (hi - lo) * (HEIGHT - TOP - BOTTOM)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let x0 = LEFT;
        let x1 = WIDTH - RIGHT;
        let y0 = HEIGHT - BOTTOM;
        let y1 = TOP;
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="14">"#
        )
        .unwrap();
        writeln!(
            s,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
            (x0 + x1) / 2.0,
            escape(&self.title)
        )
        .unwrap();

        // Axes and ticks are paths so that <line> is reserved for references.
        writeln!(
            s,
            r#"<path class="axes" d="M{x0:.2},{y1:.2} V{y0:.2} H{x1:.2}" fill="none" stroke="black" stroke-width="1.5"/>"#
        )
        .unwrap();
        let xt = nice_ticks(self.x_range.0, self.x_range.1, 5);
        let yt = nice_ticks(self.y_range.0, self.y_range.1, 6);
        let mut d = String::new();
        for &t in &xt {
            write!(d, "M{:.2},{y0:.2} v{TICK} ", self.px(t)).unwrap();
        }
        for &t in &yt {
            write!(d, "M{x0:.2},{:.2} h-{TICK} ", self.py(t)).unwrap();
        }
        writeln!(
            s,
            r#"<path class="ticks" d="{}" stroke="black"/>"#,
            d.trim_end()
        )
        .unwrap();
        for &t in &xt {
            writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                self.px(t),
                y0 + TICK + 16.0,
                tick_label(t)
            )
            .unwrap();
        }
        for &t in &yt {
            writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - TICK - 4.0,
                self.py(t) + 5.0,
                tick_label(t)
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 20.0,
            escape(&self.x_label)
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(&self.y_label)
        )
        .unwrap();

        for r in &self.references {
            let y = self.py(r.y);
            writeln!(
                s,
                r#"<line class="reference" x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="{}" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
                r.color
            )
            .unwrap();
            writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" fill="{}">{}</text>"#,
                x1 - 4.0,
                y - 6.0,
                r.color,
                escape(&r.label)
            )
            .unwrap();
        }

        for (k, series) in self.series.iter().enumerate() {
            let pts: Vec<String> = series
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
                .collect();
            writeln!(
                s,
                r#"<polyline class="data" points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
                pts.join(" "),
                PALETTE[k % PALETTE.len()]
            )
            .unwrap();
        }

        // Legend in the upper right of the plot area.
        let lx = x1 - 150.0;
        for (k, series) in self.series.iter().enumerate() {
            let ly = y1 + 20.0 + 22.0 * k as f64;
            writeln!(
                s,
                r#"<rect class="legend" x="{lx:.2}" y="{:.2}" width="24" height="4" fill="{}"/>"#,
                ly - 6.0,
                PALETTE[k % PALETTE.len()]
            )
            .unwrap();
            writeln!(
                s,
                r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#,
                lx + 32.0,
                escape(&series.label)
            )
            .unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}
