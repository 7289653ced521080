//! CSV and SVG writers for point sets.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use fixcircle_core::Window;

use crate::run::Cloud;

/// Writes `x1[,x2...],residual` rows in the cloud's order. The header is
/// written even when the cloud is empty; `dim` fixes the column count then.
pub fn write_csv<W: Write>(cloud: &Cloud, dim: usize, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    header.push("residual".into());
    w.write_record(&header)?;
    for (p, r) in cloud.points.iter().zip(&cloud.residuals) {
        let mut row: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
        row.push(r.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(cloud: &Cloud, dim: usize, path: &Path) -> io::Result<()> {
    let mut buf = Vec::new();
    write_csv(cloud, dim, &mut buf)?;
    write_file(path, &buf)
}

/// A point set drawn with its own colour and a legend entry.
#[derive(Debug, Clone, Copy)]
pub struct Layer<'a> {
    pub label: &'a str,
    pub cloud: &'a Cloud,
}

const PALETTE: [&str; 6] = ["#1f5fa8", "#c0392b", "#2e8b57", "#8e44ad", "#d68910", "#34495e"];
const PLOT_WIDTH: f64 = 480.0;
const MARGIN: f64 = 40.0;

/// Renders a scatter plot of `layers` over `window` as a standalone SVG 1.1
/// document. One-dimensional windows are drawn as a strip along the x axis.
/// The output depends only on the inputs, so identical calls give identical
/// bytes.
pub fn render_svg(layers: &[Layer<'_>], window: &Window, title: &str) -> String {
    let (x_lo, x_hi) = (window.lo[0], window.hi[0]);
    let (y_lo, y_hi) = if window.dim() >= 2 { (window.lo[1], window.hi[1]) } else { (-1.0, 1.0) };
    let scale = PLOT_WIDTH / (x_hi - x_lo);
    let plot_h = if window.dim() >= 2 { (y_hi - y_lo) * scale } else { 80.0 };
    let y_scale = plot_h / (y_hi - y_lo);
    let width = PLOT_WIDTH + 2.0 * MARGIN;
    let legend_h = 18.0 * layers.len() as f64;
    let height = plot_h + 2.0 * MARGIN + legend_h;
    let px = |x: f64| MARGIN + (x - x_lo) * scale;
    let py = |y: f64| MARGIN + (y_hi - y) * y_scale;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, num(width), num(height));
    let _ = writeln!(
        s,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#999999" stroke-width="1"/>"##,
        num(MARGIN),
        num(MARGIN),
        num(PLOT_WIDTH),
        num(plot_h)
    );

    // Axes through the origin when it is inside the window.
    let _ = writeln!(s, r##"<g stroke="#555555" stroke-width="1">"##);
    if y_lo <= 0.0 && 0.0 <= y_hi {
        let _ =
            writeln!(s, r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}"/>"#, num(px(x_lo)), num(px(x_hi)), y = num(py(0.0)));
    }
    if x_lo <= 0.0 && 0.0 <= x_hi {
        let _ =
            writeln!(s, r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}"/>"#, num(py(y_hi)), num(py(y_lo)), x = num(px(0.0)));
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g font-family="sans-serif" font-size="11" fill="#333333">"##);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="start">{}</text>"#,
        num(px(x_lo)),
        num(py(y_lo) + 14.0),
        num(x_lo)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        num(px(x_hi)),
        num(py(y_lo) + 14.0),
        num(x_hi)
    );
    if window.dim() >= 2 {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            num(MARGIN - 4.0),
            num(py(y_lo)),
            num(y_lo)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            num(MARGIN - 4.0),
            num(py(y_hi) + 8.0),
            num(y_hi)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
        num(width / 2.0),
        num(MARGIN / 2.0),
        escape(title)
    );
    let _ = writeln!(s, "</g>");

    for (i, layer) in layers.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let _ = writeln!(s, r#"<g fill="{colour}" stroke="none">"#);
        for p in &layer.cloud.points {
            let c = p.coords();
            let y = c.get(1).copied().unwrap_or(0.0);
            let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="1.5"/>"#, num(px(c[0])), num(py(y)));
        }
        let _ = writeln!(s, "</g>");
        let ly = MARGIN + plot_h + 24.0 + 18.0 * i as f64;
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="4" fill="{colour}"/>"#, num(MARGIN + 4.0), num(ly - 4.0));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{} ({} points)</text>"#,
            num(MARGIN + 14.0),
            num(ly),
            escape(layer.label),
            layer.cloud.points.len()
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg(layers: &[Layer<'_>], window: &Window, title: &str, path: &Path) -> io::Result<()> {
    write_file(path, render_svg(layers, window, title).as_bytes())
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, bytes)
}

/// Fixed three-decimal rendering keeps files stable and compact.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use fixcircle_core::Point;

    #[test]
    fn csv_rows_and_header() {
        let cloud = Cloud { points: vec![Point::scalar(-1.0), Point::scalar(1.0)], residuals: vec![0.0, 0.0] };
        let mut buf = Vec::new();
        write_csv(&cloud, 1, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x1,residual\n-1,0\n1,0\n");

        let mut buf = Vec::new();
        write_csv(&Cloud::default(), 2, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x1,x2,residual\n");
    }

    #[test]
    fn numbers() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-0.0001), "0");
        assert_eq!(num(2.5), "2.5");
        assert_eq!(num(1.23456), "1.235");
    }

    #[test]
    fn empty_svg_has_axes_only() {
        let w = Window::square(-1.0, 1.0).unwrap();
        let empty = Cloud::default();
        let svg = render_svg(&[Layer { label: "none", cloud: &empty }], &w, "empty");
        assert!(svg.contains("<line"));
        assert!(!svg.contains(r#"r="1.5""#));
        assert_eq!(svg, render_svg(&[Layer { label: "none", cloud: &empty }], &w, "empty"));
    }

    #[test]
    fn y_axis_points_up() {
        let w = Window::square(-1.0, 1.0).unwrap();
        let cloud = Cloud { points: vec![Point::xy(0.0, 1.0)], residuals: vec![0.0] };
        let svg = render_svg(&[Layer { label: "top", cloud: &cloud }], &w, "t");
        assert!(svg.contains(r#"<circle cx="280" cy="40" r="1.5"/>"#), "{svg}");
    }
}
