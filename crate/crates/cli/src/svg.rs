//! Minimal static scatter/line plots of the complex plane.

use std::fmt::Write;

pub const BLUE: &str = "#1f4fd1";
pub const RED: &str = "#d62728";

pub enum Layer {
    /// Closed or open polyline through `(re, im)` points.
    Line {
        points: Vec<(f64, f64)>,
        color: &'static str,
        label: String,
    },
    Dots {
        points: Vec<(f64, f64)>,
        color: &'static str,
        label: String,
    },
}

impl Layer {
    fn points(&self) -> &[(f64, f64)] {
        match self {
            Layer::Line { points, .. } | Layer::Dots { points, .. } => points,
        }
    }
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const PAD: f64 = 60.0;

fn bounds(layers: &[Layer]) -> (f64, f64, f64, f64) {
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (x, y) in layers.iter().flat_map(|l| l.points().iter()) {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    let grow = |lo: f64, hi: f64| {
        let span = (hi - lo).max(1e-300);
        (lo - 0.05 * span, hi + 0.05 * span)
    };
    let (x0, x1) = grow(x0, x1);
    let (y0, y1) = grow(y0, y1);
    (x0, x1, y0, y1)
}

/// Renders `layers` with independent axis scales, axes through the origin.
pub fn render(title: &str, layers: &[Layer]) -> String {
    let (x0, x1, y0, y1) = bounds(layers);
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="gray"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let (ox, oy) = (sx(0.0), sy(0.0));
    let _ = writeln!(
        s,
        r#"<line x1="{PAD}" y1="{oy:.2}" x2="{}" y2="{oy:.2}" stroke="silver"/>"#,
        W - PAD
    );
    let _ = writeln!(
        s,
        r#"<line x1="{ox:.2}" y1="{PAD}" x2="{ox:.2}" y2="{}" stroke="silver"/>"#,
        H - PAD
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">Re λ  [{x0:.3e}, {x1:.3e}]</text>"#,
        W / 2.0,
        H - 20.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">Im λ  [{y0:.3e}, {y1:.3e}]</text>"#,
        H / 2.0,
        H / 2.0
    );
    for layer in layers {
        match layer {
            Layer::Line { points, color, .. } => {
                let path: Vec<String> = points
                    .iter()
                    .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    path.join(" ")
                );
            }
            Layer::Dots { points, color, .. } => {
                for &(x, y) in points {
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="1.8" fill="{color}"/>"#,
                        sx(x),
                        sy(y)
                    );
                }
            }
        }
    }
    for (i, layer) in layers.iter().enumerate() {
        let (color, label) = match layer {
            Layer::Line { color, label, .. } | Layer::Dots { color, label, .. } => (color, label),
        };
        let y = PAD + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="10" height="10" fill="{color}"/>"#,
            W - PAD - 150.0,
            y - 9.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}">{}</text>"#,
            W - PAD - 135.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
