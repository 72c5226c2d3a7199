//! Minimal SVG line charts.

use std::fmt::Write;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];
const PANEL_W: f64 = 320.0;
const PANEL_H: f64 = 260.0;
const MARGIN_L: f64 = 62.0;
const MARGIN_R: f64 = 12.0;
const MARGIN_T: f64 = 28.0;
const MARGIN_B: f64 = 40.0;

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub series: Vec<Series>,
}

fn bounds(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        return None;
    }
    if hi - lo < 1e-300 {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.05 };
        return Some((lo - pad, hi + pad));
    }
    Some((lo, hi))
}

fn tick(v: f64, log_y: bool) -> String {
    if log_y {
        format!("1e{}", v.round() as i64)
    } else if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.4}")
    }
}

fn panel(out: &mut String, p: &Panel, x0: f64, log_y: bool) {
    let transform = |y: f64| if log_y { (y > 0.0).then(|| y.log10()) } else { Some(y) };
    let pts: Vec<Vec<(f64, f64)>> = p
        .series
        .iter()
        .map(|s| s.points.iter().filter_map(|&(x, y)| Some((x, transform(y)?))).collect())
        .collect();
    let xs = bounds(pts.iter().flatten().map(|p| p.0));
    let mut ys = bounds(pts.iter().flatten().map(|p| p.1));
    if log_y {
        ys = ys.map(|(lo, hi)| (lo.floor(), hi.ceil().max(lo.floor() + 1.0)));
    }
    let (left, top) = (x0 + MARGIN_L, MARGIN_T);
    let (w, h) = (PANEL_W - MARGIN_L - MARGIN_R, PANEL_H - MARGIN_T - MARGIN_B);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="18" text-anchor="middle" font-size="13">{}</text>"#,
        left + w / 2.0,
        p.title
    );
    let _ = writeln!(
        out,
        r#"<rect x="{left:.1}" y="{top:.1}" width="{w:.1}" height="{h:.1}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="11">{}</text>"#,
        left + w / 2.0,
        top + h + 32.0,
        p.x_label
    );
    let (Some((xlo, xhi)), Some((ylo, yhi))) = (xs, ys) else {
        return;
    };
    let sx = |x: f64| left + (x - xlo) / (xhi - xlo) * w;
    let sy = |y: f64| top + h - (y - ylo) / (yhi - ylo) * h;
    for i in 0..=4 {
        let fx = xlo + (xhi - xlo) * i as f64 / 4.0;
        let fy = ylo + (yhi - ylo) * i as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"#,
            sx(fx),
            top + h + 14.0,
            (fx * 10.0).round() / 10.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-size="10">{}</text>"#,
            left - 4.0,
            sy(fy) + 3.0,
            tick(fy, log_y)
        );
        let _ = writeln!(
            out,
            r##"<line x1="{left:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/>"##,
            left + w,
            y = sy(fy)
        );
    }
    for (i, (s, points)) in p.series.iter().zip(&pts).enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" fill="{colour}">{}</text>"#,
            left + w - 70.0,
            top + 14.0 + 12.0 * i as f64,
            s.label
        );
    }
}

pub fn render(panels: &[Panel], log_y: bool) -> String {
    let width = PANEL_W * panels.len() as f64;
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL_H}" viewBox="0 0 {width} {PANEL_H}" font-family="sans-serif">"#
    );
    out.push('\n');
    out += r#"<rect width="100%" height="100%" fill="white"/>"#;
    out.push('\n');
    for (i, p) in panels.iter().enumerate() {
        panel(&mut out, p, PANEL_W * i as f64, log_y);
    }
    out += "</svg>\n";
    out
}
