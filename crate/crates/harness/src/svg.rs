//! Minimal self-contained SVG line/marker plots.

use std::fmt::Write as _;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2", "#444444",
    "#7f7f7f",
];

#[derive(Clone, Debug)]
pub struct Axis {
    pub label: String,
    pub min: f64,
    pub max: f64,
    pub log: bool,
    /// Draw values increasing from right to left.
    pub reversed: bool,
}

impl Axis {
    pub fn linear(label: &str, min: f64, max: f64) -> Self {
        Axis { label: label.to_string(), min, max, log: false, reversed: false }
    }

    pub fn log(label: &str, min: f64, max: f64) -> Self {
        Axis { label: label.to_string(), min, max, log: true, reversed: false }
    }

    pub fn reversed(mut self) -> Self {
        self.reversed = true;
        self
    }

    fn unit(&self, v: f64) -> f64 {
        let (lo, hi, v) = if self.log {
            (self.min.log10(), self.max.log10(), v.max(self.min).log10())
        } else {
            (self.min, self.max, v)
        };
        let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
        if self.reversed {
            1.0 - t
        } else {
            t
        }
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let lo = self.min.log10().ceil() as i32;
            let hi = self.max.log10().floor() as i32;
            let step = ((hi - lo) / 6 + 1).max(1);
            (lo..=hi).step_by(step as usize).map(|e| 10f64.powi(e)).collect()
        } else {
            let span = self.max - self.min;
            if span <= 0.0 {
                return vec![self.min];
            }
            let raw = span / 5.0;
            let mag = 10f64.powf(raw.log10().floor());
            let step =
                [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
            let first = (self.min / step).ceil() as i64;
            let last = (self.max / step).floor() as i64;
            (first..=last).map(|i| i as f64 * step).collect()
        }
    }
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        return format!("1e{}", v.log10().round() as i32);
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mark {
    Line,
    Dots,
    LineDots,
}

#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub mark: Mark,
    pub color: usize,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>, mark: Mark, color: usize) -> Self {
        Series { label: label.into(), points, mark, color }
    }
}

#[derive(Clone, Debug)]
pub struct Plot {
    pub title: String,
    pub x: Axis,
    pub y: Axis,
    pub series: Vec<Series>,
    pub legend: bool,
}

impl Plot {
    pub fn new(title: impl Into<String>, x: Axis, y: Axis) -> Self {
        Plot { title: title.into(), x, y, series: Vec::new(), legend: true }
    }

    pub fn add(&mut self, s: Series) {
        self.series.push(s);
    }

    /// Standalone SVG document.
    pub fn render(&self) -> String {
        let (w, h) = (720.0, 460.0);
        let mut out = header(w, h);
        self.draw(&mut out, 0.0, 0.0, w, h, true);
        out.push_str("</svg>\n");
        out
    }

    fn draw(&self, out: &mut String, x0: f64, y0: f64, w: f64, h: f64, full: bool) {
        let (ml, mr, mt, mb) = if full { (70.0, 20.0, 36.0, 50.0) } else { (8.0, 8.0, 18.0, 8.0) };
        let (pl, pt) = (x0 + ml, y0 + mt);
        let (pw, ph) = (w - ml - mr, h - mt - mb);
        let px = |v: f64| pl + self.x.unit(v) * pw;
        let py = |v: f64| pt + (1.0 - self.y.unit(v)) * ph;
        let fs = if full { 14.0 } else { 10.0 };
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="{fs}" text-anchor="middle">{}</text>"#,
            pl + pw / 2.0,
            y0 + mt - 8.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r##"<rect x="{pl:.2}" y="{pt:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="#333"/>"##
        );
        if full {
            for t in self.x.ticks() {
                let x = px(t);
                let _ = writeln!(
                    out,
                    r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333"/><text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"##,
                    pt + ph,
                    pt + ph + 5.0,
                    pt + ph + 18.0,
                    tick_label(t, self.x.log)
                );
            }
            for t in self.y.ticks() {
                let y = py(t);
                let _ = writeln!(
                    out,
                    r##"<line x1="{:.2}" y1="{y:.2}" x2="{pl:.2}" y2="{y:.2}" stroke="#333"/><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"##,
                    pl - 5.0,
                    pl - 8.0,
                    y + 4.0,
                    tick_label(t, self.y.log)
                );
            }
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
                pl + pw / 2.0,
                y0 + h - 10.0,
                escape(&self.x.label)
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">{}</text>"#,
                x0 + 16.0,
                pt + ph / 2.0,
                x0 + 16.0,
                pt + ph / 2.0,
                escape(&self.y.label)
            );
        }
        for s in &self.series {
            let color = PALETTE[s.color % PALETTE.len()];
            let pts: Vec<(f64, f64)> = s
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| (px(x), py(y)))
                .collect();
            if matches!(s.mark, Mark::Line | Mark::LineDots) && pts.len() > 1 {
                let d: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    d.join(" ")
                );
            }
            if matches!(s.mark, Mark::Dots | Mark::LineDots) {
                for (x, y) in &pts {
                    let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="{color}"/>"#);
                }
            }
        }
        if full && self.legend {
            for (i, s) in self.series.iter().enumerate() {
                let color = PALETTE[s.color % PALETTE.len()];
                let y = pt + 14.0 + 16.0 * i as f64;
                let x = pl + pw - 190.0;
                let _ = writeln!(
                    out,
                    r#"<rect x="{x:.2}" y="{:.2}" width="10" height="10" fill="{color}"/><text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
                    y - 9.0,
                    x + 15.0,
                    y,
                    escape(&s.label)
                );
            }
        }
    }
}

fn header(w: f64, h: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Grid of small plots sharing the axes of each cell. `cells` is row-major.
pub fn panel_grid(title: &str, cols: usize, cells: &[Plot]) -> String {
    let rows = cells.len().div_ceil(cols.max(1));
    let (cw, ch) = (180.0, 120.0);
    let top = 30.0;
    let (w, h) = (cw * cols as f64, top + ch * rows as f64);
    let mut out = header(w, h);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="20" font-size="14" text-anchor="middle">{}</text>"#,
        w / 2.0,
        escape(title)
    );
    for (i, cell) in cells.iter().enumerate() {
        let (r, c) = (i / cols, i % cols);
        cell.draw(&mut out, c as f64 * cw, top + r as f64 * ch, cw, ch, false);
    }
    out.push_str("</svg>\n");
    out
}

/// Reduces a trace to at most `2 * buckets` points, keeping the minimum and
/// maximum of each bucket in order.
pub fn decimate_min_max(points: &[(f64, f64)], buckets: usize) -> Vec<(f64, f64)> {
    if buckets == 0 || points.len() <= 2 * buckets {
        return points.to_vec();
    }
    let size = points.len().div_ceil(buckets);
    let mut out = Vec::with_capacity(2 * buckets);
    for chunk in points.chunks(size) {
        let (mut lo, mut hi) = (0, 0);
        for (i, p) in chunk.iter().enumerate() {
            if p.1 < chunk[lo].1 {
                lo = i;
            }
            if p.1 > chunk[hi].1 {
                hi = i;
            }
        }
        let (a, b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        out.push(chunk[a]);
        if b != a {
            out.push(chunk[b]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversed_axis_maps_max_to_left() {
        let a = Axis::linear("f", -100.0, 100.0).reversed();
        assert_eq!(a.unit(100.0), 0.0);
        assert_eq!(a.unit(-100.0), 1.0);
        let l = Axis::log("e", 1e-3, 1e-1);
        assert!((l.unit(1e-2) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ticks_are_round_numbers() {
        assert_eq!(Axis::linear("p", 0.0, 1.0).ticks(), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        assert_eq!(Axis::log("e", 1e-3, 1e-2).ticks(), vec![1e-3, 1e-2]);
        assert_eq!(tick_label(0.6000000000000001, false), "0.6");
        assert_eq!(tick_label(1e-3, true), "1e-3");
    }

    #[test]
    fn decimation_keeps_extremes() {
        let pts: Vec<(f64, f64)> = (0..1000).map(|i| (i as f64, ((i as f64) * 0.05).sin())).collect();
        let d = decimate_min_max(&pts, 50);
        assert!(d.len() <= 100);
        let max = d.iter().map(|p| p.1).fold(f64::MIN, f64::max);
        let true_max = pts.iter().map(|p| p.1).fold(f64::MIN, f64::max);
        assert_eq!(max, true_max);
        assert!(d.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn renders_well_formed_document() {
        let mut p = Plot::new("t & u", Axis::linear("x", 0.0, 3.0), Axis::linear("y", 0.0, 1.0));
        p.add(Series::new("s", vec![(0.0, 0.25), (1.0, 0.5)], Mark::LineDots, 0));
        let svg = p.render();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("t &amp; u"));
        assert_eq!(svg.matches("<circle").count(), 2);
        let grid = panel_grid("g", 2, &[p.clone(), p.clone(), p]);
        assert_eq!(grid.matches("<polyline").count(), 3);
    }
}
