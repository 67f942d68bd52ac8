//! Minimal SVG line plot for the speed-up curve.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 55.0;

pub struct Axis {
    pub label: String,
    pub min: f64,
    pub max: f64,
    pub ticks: Vec<f64>,
}

pub struct LinePlot {
    pub title: String,
    pub x: Axis,
    pub y: Axis,
    pub points: Vec<(f64, f64)>,
}

impl LinePlot {
    fn px(&self, x: f64) -> f64 {
        let w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        MARGIN_LEFT + (x - self.x.min) / (self.x.max - self.x.min) * w
    }

    fn py(&self, y: f64) -> f64 {
        let h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        HEIGHT - MARGIN_BOTTOM - (y - self.y.min) / (self.y.max - self.y.min) * h
    }

    pub fn to_svg(&self) -> String {
        let mut s = String::new();
        let (x0, x1) = (self.px(self.x.min), self.px(self.x.max));
        let (y0, y1) = (self.py(self.y.min), self.py(self.y.max));
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="18" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<path d="M{x0:.2},{y0:.2} H{x1:.2} M{x0:.2},{y0:.2} V{y1:.2}" stroke="black" fill="none"/>"#
        );
        for &t in &self.x.ticks {
            let x = self.px(t);
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                y0 + 5.0,
                y0 + 19.0,
                tick_label(t)
            );
        }
        for &t in &self.y.ticks {
            let y = self.py(t);
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - 5.0,
                x0 - 8.0,
                y + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 15.0,
            escape(&self.x.label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(&self.y.label)
        );
        let pts: Vec<String> = self
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
            pts.join(" ")
        );
        s.push_str("</svg>\n");
        s
    }
}

fn tick_label(t: f64) -> String {
    let s = format!("{t:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Speed-up against final purity `1 − 2P`.
pub fn speedup_plot(points: &[(f64, f64)]) -> LinePlot {
    let ymax = points.iter().map(|p| p.1).fold(2.0, f64::max);
    LinePlot {
        title: "Feedback speed-up".into(),
        x: Axis {
            label: "final purity 1 - 2P".into(),
            min: 0.0,
            max: 1.0,
            ticks: (0..=5).map(|k| k as f64 * 0.2).collect(),
        },
        y: Axis {
            label: "speed-up t_classical / t_feedback".into(),
            min: 1.0,
            max: ymax,
            ticks: (0..=4).map(|k| 1.0 + k as f64 * (ymax - 1.0) / 4.0).collect(),
        },
        points: points.to_vec(),
    }
}
