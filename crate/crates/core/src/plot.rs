//! Line plots with optional error bars, written as self-contained SVG plus a
//! CSV of the plotted numbers. Output bytes depend only on the input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub y: Vec<f64>,
    /// Half-height of the error bar at each point.
    pub err: Option<Vec<f64>>,
    pub dashed: bool,
}

impl Series {
    pub fn new(name: impl Into<String>, y: Vec<f64>) -> Self {
        Series { name: name.into(), y, err: None, dashed: false }
    }

    pub fn with_err(mut self, err: Vec<f64>) -> Self {
        self.err = Some(err);
        self
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Figure {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x: Vec<f64>,
    pub series: Vec<Series>,
}

impl Figure {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>, x: Vec<f64>) -> Self {
        Figure { title: title.into(), x_label: x_label.into(), y_label: y_label.into(), x, series: Vec::new() }
    }

    pub fn with_series(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.x.is_empty() || self.series.is_empty() {
            return Err(Error::invalid("cannot plot an empty table"));
        }
        for s in &self.series {
            if s.y.len() != self.x.len() || s.err.as_ref().is_some_and(|e| e.len() != self.x.len()) {
                return Err(Error::invalid(format!("series `{}` does not match the x column", s.name)));
            }
        }
        if self.x.iter().chain(self.series.iter().flat_map(|s| &s.y)).any(|v| !v.is_finite()) {
            return Err(Error::invalid("plot values must be finite"));
        }
        Ok(())
    }

    /// Columns `x_label`, then each series and, where present, `<name>_err`.
    pub fn to_csv(&self) -> Result<String> {
        self.validate()?;
        let mut out = String::new();
        out.push_str(&csv_cell(&self.x_label));
        for s in &self.series {
            out.push(',');
            out.push_str(&csv_cell(&s.name));
            if s.err.is_some() {
                out.push(',');
                out.push_str(&csv_cell(&format!("{}_err", s.name)));
            }
        }
        out.push('\n');
        for (i, x) in self.x.iter().enumerate() {
            write!(out, "{x}").unwrap();
            for s in &self.series {
                write!(out, ",{}", s.y[i]).unwrap();
                if let Some(e) = &s.err {
                    write!(out, ",{}", e[i]).unwrap();
                }
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn to_svg(&self) -> Result<String> {
        self.validate()?;
        let (x0, x1) = padded_range(self.x.iter().copied());
        let (y0, y1) = padded_range(self.series.iter().flat_map(|s| {
            s.y.iter().enumerate().flat_map(move |(i, &y)| {
                let e = s.err.as_ref().map_or(0.0, |e| e[i].abs());
                [y - e, y + e]
            })
        }));
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

        let mut svg = String::new();
        writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
        writeln!(svg, r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#, LEFT + plot_w / 2.0, xml(&self.title)).unwrap();
        writeln!(
            svg,
            r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
        )
        .unwrap();
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            let (px, py) = (sx(xv), sy(yv));
            writeln!(svg, r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, TOP + plot_h, TOP + plot_h + 5.0).unwrap();
            writeln!(svg, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP + plot_h + 18.0, tick(xv)).unwrap();
            writeln!(svg, r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/>"#, LEFT - 5.0).unwrap();
            writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 8.0, py + 4.0, tick(yv)).unwrap();
        }
        writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, LEFT + plot_w / 2.0, HEIGHT - 15.0, xml(&self.x_label)).unwrap();
        writeln!(
            svg,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            TOP + plot_h / 2.0,
            TOP + plot_h / 2.0,
            xml(&self.y_label)
        )
        .unwrap();

        for (k, s) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
            let pts: Vec<String> = self.x.iter().zip(&s.y).map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#, pts.join(" ")).unwrap();
            for (i, (&x, &y)) in self.x.iter().zip(&s.y).enumerate() {
                writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, sx(x), sy(y)).unwrap();
                if let Some(e) = &s.err {
                    let (px, lo, hi) = (sx(x), sy(y - e[i].abs()), sy(y + e[i].abs()));
                    writeln!(svg, r#"<line x1="{px:.2}" y1="{lo:.2}" x2="{px:.2}" y2="{hi:.2}" stroke="{color}"/>"#).unwrap();
                    for cap in [lo, hi] {
                        writeln!(svg, r#"<line x1="{:.2}" y1="{cap:.2}" x2="{:.2}" y2="{cap:.2}" stroke="{color}"/>"#, px - 3.0, px + 3.0).unwrap();
                    }
                }
            }
            let ly = TOP + 10.0 + 18.0 * k as f64;
            let lx = WIDTH - RIGHT + 12.0;
            writeln!(svg, r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"{dash}/>"#, lx + 20.0).unwrap();
            writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 26.0, ly + 4.0, xml(&s.name)).unwrap();
        }
        svg.push_str("</svg>\n");
        Ok(svg)
    }
}

/// Data range widened by 5% on each side; a degenerate range is widened to
/// one unit around its value.
fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi - lo <= 1e-12 * lo.abs().max(1.0) {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

fn xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes `<stem>.svg` and `<stem>.csv`; returns both paths.
pub fn emit_plot(figure: &Figure, stem: &Path) -> Result<(PathBuf, PathBuf)> {
    let svg = figure.to_svg()?;
    let csv = figure.to_csv()?;
    let svg_path = stem.with_extension("svg");
    let csv_path = stem.with_extension("csv");
    if let Some(dir) = stem.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(&svg_path, svg)?;
    std::fs::write(&csv_path, csv)?;
    Ok((svg_path, csv_path))
}
