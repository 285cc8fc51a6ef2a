//! Minimal deterministic SVG line and scatter plots.

use std::fmt::Write;

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 320.0;
const MARGIN_L: f64 = 62.0;
const MARGIN_R: f64 = 14.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 44.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Points,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

impl Series {
    pub fn line(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series { label: label.into(), points, style: Style::Line }
    }

    pub fn points(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series { label: label.into(), points, style: Style::Points }
    }
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

impl Panel {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Panel {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            log_y: false,
            series: Vec::new(),
        }
    }

    pub fn log_y(mut self, on: bool) -> Self {
        self.log_y = on;
        self
    }

    pub fn with(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }

    fn y_of(&self, y: f64) -> Option<f64> {
        if self.log_y {
            (y > 0.0 && y.is_finite()).then(|| y.log10())
        } else {
            y.is_finite().then_some(y)
        }
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut xs = (f64::INFINITY, f64::NEG_INFINITY);
        let mut ys = (f64::INFINITY, f64::NEG_INFINITY);
        for s in &self.series {
            for &(x, y) in &s.points {
                if let (true, Some(y)) = (x.is_finite(), self.y_of(y)) {
                    xs = (xs.0.min(x), xs.1.max(x));
                    ys = (ys.0.min(y), ys.1.max(y));
                }
            }
        }
        if !xs.0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        let pad = |lo: f64, hi: f64| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        let (x0, x1) = pad(xs.0, xs.1);
        let (y0, y1) = pad(ys.0, ys.1);
        (x0, x1, y0, y1)
    }

    fn render(&self, out: &mut String, ox: f64) {
        let (x0, x1, y0, y1) = self.bounds();
        let pw = PANEL_W - MARGIN_L - MARGIN_R;
        let ph = PANEL_H - MARGIN_T - MARGIN_B;
        let sx = |x: f64| ox + MARGIN_L + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| MARGIN_T + (1.0 - (y - y0) / (y1 - y0)) * ph;

        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000"/>"##,
            ox + MARGIN_L, MARGIN_T, pw, ph
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="18" text-anchor="middle" font-size="13">{}</text>"#,
            ox + MARGIN_L + pw / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"#,
            ox + MARGIN_L + pw / 2.0,
            PANEL_H - 8.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12" transform="rotate(-90 {:.2} {:.2})">{}</text>"#,
            ox + 14.0,
            MARGIN_T + ph / 2.0,
            ox + 14.0,
            MARGIN_T + ph / 2.0,
            escape(&self.y_label)
        );
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let xv = x0 + t * (x1 - x0);
            let yv = y0 + t * (y1 - y0);
            let ylab = if self.log_y { format!("1e{yv:.1}") } else { tick(yv) };
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="10">{}</text>"#,
                sx(xv),
                MARGIN_T + ph + 14.0,
                tick(xv)
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="10">{}</text>"#,
                ox + MARGIN_L - 4.0,
                sy(yv) + 3.0,
                ylab
            );
        }
        for (idx, s) in self.series.iter().enumerate() {
            let color = PALETTE[idx % PALETTE.len()];
            let pts: Vec<(f64, f64)> = s
                .points
                .iter()
                .filter_map(|&(x, y)| self.y_of(y).filter(|_| x.is_finite()).map(|y| (sx(x), sy(y))))
                .collect();
            match s.style {
                Style::Line => {
                    let mut d = String::new();
                    for (i, (px, py)) in pts.iter().enumerate() {
                        let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, px, py);
                    }
                    let _ = writeln!(out, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#);
                }
                Style::Points => {
                    for (px, py) in &pts {
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{px:.2}" cy="{py:.2}" r="2.2" fill="none" stroke="{color}"/>"#
                        );
                    }
                }
            }
            let ly = MARGIN_T + 14.0 + 14.0 * idx as f64;
            let lx = ox + MARGIN_L + pw - 8.0;
            let _ = writeln!(
                out,
                r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="end" font-size="10" fill="{color}">{}</text>"#,
                escape(&s.label)
            );
        }
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the panels side by side into one SVG document.
pub fn render(panels: &[Panel]) -> String {
    let width = PANEL_W * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{PANEL_H:.0}" viewBox="0 0 {width:.0} {PANEL_H:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, p) in panels.iter().enumerate() {
        p.render(&mut out, PANEL_W * i as f64);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_panel(log_y: bool) -> Panel {
        Panel::new("f(x)", "x", "f")
            .log_y(log_y)
            .with(Series::line("theory", vec![(0.0, 4.0), (0.5, 1.0), (1.0, 0.0)]))
            .with(Series::points("mc <a&b>", vec![(0.25, 2.0), (0.75, 0.3)]))
    }

    #[test]
    fn deterministic_output() {
        let a = render(&[sample_panel(false), sample_panel(true)]);
        let b = render(&[sample_panel(false), sample_panel(true)]);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.trim_end().ends_with("</svg>"));
        assert!(a.contains("&lt;a&amp;b&gt;"));
        assert_eq!(a.matches("<path").count(), 2);
    }

    #[test]
    fn log_axis_skips_nonpositive() {
        let svg = render(&[sample_panel(true)]);
        // (1.0, 0.0) is dropped, leaving two line vertices
        let path = svg.lines().find(|l| l.starts_with("<path")).unwrap();
        assert_eq!(path.matches('L').count(), 1);
    }

    #[test]
    fn empty_panel_renders() {
        let svg = render(&[Panel::new("empty", "x", "y")]);
        assert!(svg.contains("empty"));
    }
}
