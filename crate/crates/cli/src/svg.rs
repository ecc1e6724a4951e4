//! Plain static SVG line charts. Coordinates are printed with fixed
//! precision so identical data gives identical files.

use std::fmt::Write;

pub struct Series {
    pub name: String,
    pub color: &'static str,
    pub dashed: bool,
    pub points: Vec<(f64, f64)>,
}

/// Shaded region between two curves sampled at the same x.
pub struct Band {
    pub name: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64, f64)>,
}

pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub bands: Vec<Band>,
    pub series: Vec<Series>,
}

const PANEL_W: f64 = 560.0;
const PANEL_H: f64 = 340.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = lo.abs().max(1.0) * 0.05;
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

impl Chart {
    fn x_extent(&self) -> (f64, f64) {
        let xs = self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
        let bx = self.bands.iter().flat_map(|b| b.points.iter().map(|p| p.0));
        let (lo, hi) = extent(xs.chain(bx));
        (lo, hi)
    }

    fn y_extent(&self) -> (f64, f64) {
        let ys = self.series.iter().flat_map(|s| s.points.iter().map(|p| p.1));
        let by = self.bands.iter().flat_map(|b| b.points.iter().flat_map(|p| [p.1, p.2]));
        extent(ys.chain(by))
    }

    fn draw(&self, out: &mut String, dy: f64) {
        let (x0, x1) = self.x_extent();
        let (y0, y1) = self.y_extent();
        let w = PANEL_W - LEFT - RIGHT;
        let h = PANEL_H - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * w;
        let sy = |y: f64| dy + TOP + h - (y - y0) / (y1 - y0) * h;
        let _ = writeln!(out, r#"<g font-family="sans-serif" font-size="11">"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
            LEFT + w / 2.0,
            dy + TOP - 15.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r##"<rect x="{LEFT:.2}" y="{:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#444"/>"##,
            dy + TOP
        );
        for t in ticks(x0, x1) {
            let x = sx(t);
            let _ = writeln!(
                out,
                r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                dy + TOP,
                dy + TOP + h,
                dy + TOP + h + 15.0,
                tick_label(t)
            );
        }
        for t in ticks(y0, y1) {
            let y = sy(t);
            let _ = writeln!(
                out,
                r##"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                LEFT + w,
                LEFT - 5.0,
                y + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + w / 2.0,
            dy + PANEL_H - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">{}</text>"#,
            dy + TOP + h / 2.0,
            dy + TOP + h / 2.0,
            escape(&self.y_label)
        );
        let mut legend = Vec::new();
        for b in &self.bands {
            let mut d = String::new();
            for (i, p) in b.points.iter().enumerate() {
                let _ = write!(d, "{}{:.2},{:.2} ", if i == 0 { "M" } else { "L" }, sx(p.0), sy(p.2));
            }
            for p in b.points.iter().rev() {
                let _ = write!(d, "L{:.2},{:.2} ", sx(p.0), sy(p.1));
            }
            let _ = writeln!(out, r#"<path d="{}Z" fill="{}" fill-opacity="0.25" stroke="none"/>"#, d, b.color);
            legend.push((b.name.as_str(), b.color, false, true));
        }
        for s in &self.series {
            let pts: Vec<String> = s.points.iter().map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1))).collect();
            let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#,
                pts.join(" "),
                s.color
            );
            legend.push((s.name.as_str(), s.color, s.dashed, false));
        }
        for (i, (name, color, dashed, band)) in legend.into_iter().enumerate() {
            let y = dy + TOP + 10.0 + 18.0 * i as f64;
            let x = LEFT + w + 12.0;
            if band {
                let _ = writeln!(out, r#"<rect x="{x:.2}" y="{:.2}" width="20" height="10" fill="{color}" fill-opacity="0.25"/>"#, y - 5.0);
            } else {
                let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
                let _ = writeln!(
                    out,
                    r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="1.5"{dash}/>"#,
                    x + 20.0
                );
            }
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 26.0, y + 4.0, escape(name));
        }
        let _ = writeln!(out, "</g>");
    }
}

/// Charts stacked vertically in one document.
pub fn render(charts: &[Chart]) -> String {
    let height = PANEL_H * charts.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PANEL_W:.0}" height="{height:.0}" viewBox="0 0 {PANEL_W:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, c) in charts.iter().enumerate() {
        c.draw(&mut out, PANEL_H * i as f64);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_cover_the_range() {
        let t = ticks(0.0, 400.0);
        assert_eq!(t.first(), Some(&0.0));
        assert_eq!(t.last(), Some(&400.0));
        assert_eq!(tick_label(-0.0), "0");
        assert_eq!(tick_label(2.5), "2.5");
    }

    #[test]
    fn render_is_well_formed() {
        let c = Chart {
            title: "a < b".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            bands: vec![Band { name: "band".into(), color: "blue", points: vec![(0.0, 0.0, 1.0), (1.0, 0.5, 1.5)] }],
            series: vec![Series { name: "s".into(), color: "red", dashed: true, points: vec![(0.0, 0.5), (1.0, 1.0)] }],
        };
        let s = render(&[c]);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains("a &lt; b"));
        assert!(!s.contains("NaN"));
    }
}
