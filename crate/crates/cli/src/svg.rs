//! Minimal standalone SVG figures.

use std::fmt::Write;

use qsparse::MutualInformationMatrix;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

pub struct Series {
    pub label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// White to dark blue, `t` in `[0, 1]`.
fn shade(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(255.0, 8.0), lerp(255.0, 48.0), lerp(255.0, 107.0))
}

pub fn heatmap(mi: &MutualInformationMatrix, title: &str) -> String {
    let n = mi.size();
    let cell = (480.0 / n.max(1) as f64).clamp(2.0, 40.0);
    let (left, top) = (50.0, 40.0);
    let side = cell * n as f64;
    let (width, height) = (left + side + 90.0, top + side + 30.0);
    let max = mi.max_value().max(f64::MIN_POSITIVE);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{left}" y="20" font-size="13">{}</text>"#, escape(title));
    for i in 0..n {
        for j in 0..n {
            let v = mi.get(i, j);
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{cell:.2}" height="{cell:.2}" fill="{}"><title>I({i},{j}) = {v:.6}</title></rect>"#,
                left + j as f64 * cell,
                top + i as f64 * cell,
                shade(v / max)
            );
        }
    }
    // sparse axis labels keep large matrices readable
    let step = (n / 10).max(1);
    for k in (0..n).step_by(step) {
        let c = k as f64 * cell + cell / 2.0;
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{k}</text>"#, left - 4.0, top + c + 4.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{k}</text>"#, left + c, top + side + 14.0);
    }
    let bar_x = left + side + 20.0;
    for b in 0..50 {
        let t = 1.0 - b as f64 / 49.0;
        let _ = writeln!(s, r#"<rect x="{bar_x}" y="{:.2}" width="14" height="{:.2}" fill="{}"/>"#, top + b as f64 * side / 50.0, side / 50.0 + 0.5, shade(t));
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{max:.3}</text>"#, bar_x + 18.0, top + 10.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">0</text>"#, bar_x + 18.0, top + side);
    s.push_str("</svg>\n");
    s
}

/// Line plot of `series`; `log` puts both axes on a log10 scale.
pub fn line_plot(series: &[Series], title: &str, xlabel: &str, ylabel: &str, log: bool) -> String {
    let (width, height) = (640.0, 420.0);
    let (left, right, top, bottom) = (70.0, 160.0, 40.0, 50.0);
    let (pw, ph) = (width - left - right, height - top - bottom);
    let tx = |v: f64| if log { v.log10() } else { v };

    let pts = series.iter().flat_map(|s| s.xs.iter().zip(&s.ys)).map(|(&x, &y)| (tx(x), tx(y))).filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if !log {
        y0 = y0.min(0.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| left + (tx(x) - x0) / (x1 - x0) * pw;
    let py = |y: f64| top + ph - (tx(y) - y0) / (y1 - y0) * ph;
    let tick = |v: f64| if log { format!("{:.3e}", 10f64.powf(v)) } else { format!("{v:.3}") };

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{left}" y="20" font-size="13">{}</text>"#, escape(title));
    let _ = writeln!(s, r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (gx, gy) = (left + f * pw, top + ph - f * ph);
        let _ = writeln!(s, r#"<text x="{gx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, top + ph + 15.0, tick(xv));
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, left - 4.0, gy + 4.0, tick(yv));
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, left + pw / 2.0, height - 12.0, escape(xlabel));
    let _ = writeln!(
        s,
        r#"<text transform="translate(14,{:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
        top + ph / 2.0,
        escape(ylabel)
    );
    for (k, ser) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = ser
            .xs
            .iter()
            .zip(&ser.ys)
            .filter(|(x, y)| tx(**x).is_finite() && tx(**y).is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        for p in &pts {
            let (cx, cy) = p.split_once(',').unwrap_or(("0", "0"));
            let _ = writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="2.5" fill="{color}"/>"#);
        }
        let ly = top + 10.0 + 16.0 * k as f64;
        let lx = left + pw + 10.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#, ly - 4.0, lx + 18.0, ly - 4.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#, lx + 22.0, escape(&ser.label));
    }
    s.push_str("</svg>\n");
    s
}
