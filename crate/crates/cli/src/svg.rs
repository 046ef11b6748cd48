//! Self-contained SVG figures: a heatmap with colorbar and a log-log line
//! plot. No external fonts, images, scripts or stylesheets are referenced.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Viridis anchors at `0, 1/8, ..., 1`.
const VIRIDIS: [[f64; 3]; 9] = [
    [68.0, 1.0, 84.0],
    [71.0, 44.0, 122.0],
    [59.0, 81.0, 139.0],
    [44.0, 113.0, 142.0],
    [33.0, 144.0, 141.0],
    [39.0, 173.0, 129.0],
    [92.0, 200.0, 99.0],
    [170.0, 220.0, 50.0],
    [253.0, 231.0, 37.0],
];

pub fn color(v: f64) -> String {
    if !v.is_finite() {
        return "#b0b0b0".into();
    }
    let s = v.clamp(0.0, 1.0) * 8.0;
    let i = (s.floor() as usize).min(7);
    let f = s - i as f64;
    let c: Vec<u8> = (0..3)
        .map(|k| (VIRIDIS[i][k] + f * (VIRIDIS[i + 1][k] - VIRIDIS[i][k])).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Maps data to pixels, optionally through `log10`.
#[derive(Debug, Clone, Copy)]
struct Scale {
    lo: f64,
    hi: f64,
    p0: f64,
    p1: f64,
    log: bool,
}

impl Scale {
    fn new(lo: f64, hi: f64, p0: f64, p1: f64, log: bool) -> Self {
        let (mut lo, mut hi) = if log { (lo.log10(), hi.log10()) } else { (lo, hi) };
        if hi - lo <= 0.0 {
            lo -= 0.5;
            hi += 0.5;
        }
        Self { lo, hi, p0, p1, log }
    }

    fn px(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        self.p0 + (v - self.lo) / (self.hi - self.lo) * (self.p1 - self.p0)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let (a, b) = (self.lo.ceil() as i32, self.hi.floor() as i32);
            let step = (((b - a) as f64 / 6.0).ceil() as i32).max(1);
            (a..=b)
                .step_by(step as usize)
                .map(|e| (10f64.powi(e), format!("1e{e}")))
                .collect()
        } else {
            let span = self.hi - self.lo;
            let raw = span / 5.0;
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 5.0, 10.0]
                .iter()
                .map(|m| m * mag)
                .find(|s| *s >= raw)
                .unwrap_or(10.0 * mag);
            let first = (self.lo / step).ceil() as i64;
            let last = (self.hi / step).floor() as i64;
            (first..=last)
                .map(|i| {
                    let v = i as f64 * step;
                    (v, trim_float(v, step))
                })
                .collect()
        }
    }
}

fn trim_float(v: f64, step: f64) -> String {
    let digits = (-step.log10().floor()).max(0.0) as usize;
    format!("{v:.digits$}")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>
<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, xs: &Scale, ys: &Scale, xlabel: &str, ylabel: &str) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        out,
        r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    for (v, label) in xs.ticks() {
        let p = xs.px(v);
        let _ = writeln!(
            out,
            r#"<line x1="{p:.2}" y1="{y0}" x2="{p:.2}" y2="{}" stroke="black"/><text x="{p:.2}" y="{}" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 19.0,
            escape(&label)
        );
    }
    for (v, label) in ys.ticks() {
        let p = ys.px(v);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{p:.2}" x2="{x0}" y2="{p:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            p + 4.0,
            escape(&label)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>
<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 18.0,
        escape(xlabel),
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
}

/// Cell edges around sorted centres, midpoints inside and half a step
/// outside; in `log10` when `log`.
fn edges(c: &[f64], log: bool) -> Vec<f64> {
    let t: Vec<f64> = c.iter().map(|&v| if log { v.log10() } else { v }).collect();
    let n = t.len();
    let mut e = Vec::with_capacity(n + 1);
    if n == 1 {
        e.push(t[0] - 0.5);
        e.push(t[0] + 0.5);
    } else {
        e.push(t[0] - 0.5 * (t[1] - t[0]));
        for w in t.windows(2) {
            e.push(0.5 * (w[0] + w[1]));
        }
        e.push(t[n - 1] + 0.5 * (t[n - 1] - t[n - 2]));
    }
    if log {
        e.iter().map(|v| 10f64.powf(*v)).collect()
    } else {
        e
    }
}

/// Heatmap of `values[i * y.len() + j]` at `(x[i], y[j])` with a colorbar
/// fixed to `[0, 1]`. Missing values are drawn grey.
pub fn heatmap(
    x: &[f64],
    y: &[f64],
    values: &[f64],
    log_y: bool,
    title: &str,
    xlabel: &str,
    ylabel: &str,
) -> String {
    let xe = edges(x, false);
    let ye = edges(y, log_y);
    let xs = Scale::new(xe[0], xe[xe.len() - 1], LEFT, WIDTH - RIGHT, false);
    let ys = Scale::new(ye[0], ye[ye.len() - 1], HEIGHT - BOTTOM, TOP, log_y);
    let mut out = String::new();
    header(&mut out, title);
    out.push_str("<g shape-rendering=\"crispEdges\">\n");
    for i in 0..x.len() {
        let (px0, px1) = (xs.px(xe[i]), xs.px(xe[i + 1]));
        for j in 0..y.len() {
            let (py0, py1) = (ys.px(ye[j + 1]), ys.px(ye[j]));
            let _ = writeln!(
                out,
                r#"<rect x="{px0:.3}" y="{py0:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                px1 - px0,
                py1 - py0,
                color(values[i * y.len() + j])
            );
        }
    }
    out.push_str("</g>\n");
    axes(&mut out, &xs, &ys, xlabel, ylabel);

    // colorbar
    let (bx, bw) = (WIDTH - RIGHT + 30.0, 20.0);
    let (by0, by1) = (TOP, HEIGHT - BOTTOM);
    let steps = 64;
    for s in 0..steps {
        let h = (by1 - by0) / steps as f64;
        let y = by1 - (s + 1) as f64 * h;
        let _ = writeln!(
            out,
            r#"<rect x="{bx}" y="{y:.3}" width="{bw}" height="{:.3}" fill="{}"/>"#,
            h + 0.5,
            color((s as f64 + 0.5) / steps as f64)
        );
    }
    let _ = writeln!(
        out,
        r#"<rect x="{bx}" y="{by0}" width="{bw}" height="{}" fill="none" stroke="black"/>"#,
        by1 - by0
    );
    for k in 0..=4 {
        let v = k as f64 / 4.0;
        let y = by1 - v * (by1 - by0);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}">{v:.2}</text>"#,
            bx + bw + 5.0,
            y + 4.0
        );
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">R</text>"#, bx + bw / 2.0, by0 - 8.0);
    out.push_str("</svg>\n");
    out
}

pub struct Series<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
    pub color: &'a str,
    /// Markers when true, a polyline otherwise.
    pub markers: bool,
}

/// Log-log plot; non-positive points are dropped.
pub fn loglog(series: &[Series<'_>], title: &str, xlabel: &str, ylabel: &str) -> String {
    let pos = |p: &&(f64, f64)| p.0 > 0.0 && p.1 > 0.0 && p.0.is_finite() && p.1.is_finite();
    let all: Vec<(f64, f64)> = series.iter().flat_map(|s| s.points.iter().filter(pos).copied()).collect();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &all {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    if all.is_empty() {
        (xmin, xmax, ymin, ymax) = (0.1, 10.0, 0.1, 10.0);
    }
    let pad = |lo: f64, hi: f64| {
        let f = ((hi / lo).log10() * 0.05).max(0.05);
        (lo / 10f64.powf(f), hi * 10f64.powf(f))
    };
    let (xmin, xmax) = pad(xmin, xmax);
    let (ymin, ymax) = pad(ymin, ymax);
    let xs = Scale::new(xmin, xmax, LEFT, WIDTH - RIGHT, true);
    let ys = Scale::new(ymin, ymax, HEIGHT - BOTTOM, TOP, true);
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &xs, &ys, xlabel, ylabel);
    for (k, s) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = s.points.iter().filter(pos).map(|&(x, y)| (xs.px(x), ys.px(y))).collect();
        if s.markers {
            for (x, y) in &pts {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="none" stroke="{}"/>"#,
                    escape(s.color)
                );
            }
        } else if !pts.is_empty() {
            let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                path.join(" "),
                escape(s.color)
            );
        }
        let ly = TOP + 16.0 + 18.0 * k as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 18.0,
            escape(s.color),
            lx + 22.0,
            ly + 4.0,
            escape(s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}
