//! Polygon files, tabular reports, plots and polyline exports.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{AnalysisReport, DivergenceReport};
use crate::curvature::{CurvatureSeries, Estimator};
use crate::error::{Error, Result};
use crate::polygon::{GeodesicPolygon, PlanarPolygon, Point2};
use crate::sphere::UnitVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointFormat {
    UnitXyz,
    LonLatDegrees,
    PlanarXy,
}

/// On-disk polygon document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub format: PointFormat,
    pub closed: bool,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedPolygon {
    Spherical(GeodesicPolygon),
    Planar(PlanarPolygon),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonInput {
    pub name: Option<String>,
    pub polygon: ParsedPolygon,
}

impl PolygonInput {
    pub fn spherical(self) -> Result<GeodesicPolygon> {
        match self.polygon {
            ParsedPolygon::Spherical(p) => Ok(p),
            ParsedPolygon::Planar(_) => Err(Error::InvalidInput("expected a spherical polygon, got planar-xy".into())),
        }
    }

    pub fn planar(self) -> Result<PlanarPolygon> {
        match self.polygon {
            ParsedPolygon::Planar(p) => Ok(p),
            ParsedPolygon::Spherical(_) => Err(Error::InvalidInput("expected a planar-xy polygon".into())),
        }
    }
}

fn point_error(index: usize, message: impl Into<String>) -> Error {
    Error::Parse { context: format!("point {index}"), message: message.into() }
}

fn coords<const N: usize>(index: usize, raw: &[f64]) -> Result<[f64; N]> {
    let c: [f64; N] =
        raw.try_into().map_err(|_| point_error(index, format!("expected {N} coordinates, got {}", raw.len())))?;
    if c.iter().any(|x| !x.is_finite()) {
        return Err(point_error(index, "non-finite coordinate"));
    }
    Ok(c)
}

fn to_unit(index: usize, format: PointFormat, raw: &[f64]) -> Result<UnitVector> {
    let built = match format {
        PointFormat::UnitXyz => {
            let [x, y, z] = coords::<3>(index, raw)?;
            UnitVector::new(x, y, z)
        }
        PointFormat::LonLatDegrees => {
            let [lon, lat] = coords::<2>(index, raw)?;
            UnitVector::from_lon_lat_degrees(lon, lat)
        }
        PointFormat::PlanarXy => unreachable!("planar points are not unit vectors"),
    };
    built.map_err(|e| point_error(index, e.to_string()))
}

fn polygon_error(e: Error) -> Error {
    Error::Parse { context: "points".into(), message: e.to_string() }
}

/// Parses and validates a polygon document.
pub fn parse_polygon(bytes: &[u8]) -> Result<PolygonInput> {
    let file: PolygonFile = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        context: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let polygon = match file.format {
        PointFormat::PlanarXy => {
            let pts = file
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| coords::<2>(i, p).map(|[x, y]| Point2::new(x, y)))
                .collect::<Result<Vec<_>>>()?;
            ParsedPolygon::Planar(PlanarPolygon::new(pts, file.closed).map_err(polygon_error)?)
        }
        format => {
            let pts = file.points.iter().enumerate().map(|(i, p)| to_unit(i, format, p)).collect::<Result<Vec<_>>>()?;
            ParsedPolygon::Spherical(GeodesicPolygon::new(pts, file.closed).map_err(polygon_error)?)
        }
    };
    Ok(PolygonInput { name: file.name, polygon })
}

/// Serializes as a `unit-xyz` document; values round-trip exactly.
pub fn emit_polygon_json(polygon: &GeodesicPolygon, name: Option<&str>) -> Vec<u8> {
    let points = polygon.vertices().iter().map(|v| vec![v.x(), v.y(), v.z()]).collect();
    document_bytes(PolygonFile {
        name: name.map(str::to_owned),
        format: PointFormat::UnitXyz,
        closed: polygon.closed(),
        points,
    })
}

pub fn emit_planar_polygon_json(polygon: &PlanarPolygon, name: Option<&str>) -> Vec<u8> {
    let points = polygon.vertices().iter().map(|v| vec![v.x, v.y]).collect();
    document_bytes(PolygonFile {
        name: name.map(str::to_owned),
        format: PointFormat::PlanarXy,
        closed: polygon.closed(),
        points,
    })
}

fn document_bytes(file: PolygonFile) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&file).expect("polygon documents serialize");
    out.push(b'\n');
    out
}

/// Twelve significant digits in scientific notation.
pub fn format_real(x: f64) -> String {
    format!("{x:.11e}")
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Anything that renders as one CSV table.
pub trait CsvTable {
    fn to_csv(&self) -> Vec<u8>;
}

impl CsvTable for CurvatureSeries {
    fn to_csv(&self) -> Vec<u8> {
        csv_bytes(&["s", "kappa"], self.samples.iter().map(|c| vec![format_real(c.s), format_real(c.kappa)]))
    }
}

impl CsvTable for AnalysisReport {
    /// Ratio columns at row `j` hold `x^{j+1}/x^j` (or `x^{j+2}/x^j`), empty
    /// past the end of the run or when the denominator vanishes.
    fn to_csv(&self) -> Vec<u8> {
        let header = [
            "iteration",
            "sup_defect",
            "sup_edge",
            "sup_area",
            "max_curv_diff",
            "defect_ratio",
            "two_step_defect_ratio",
            "curvature_ratio",
        ];
        let rows = self.metrics.iter().enumerate().map(|(j, m)| {
            vec![
                j.to_string(),
                format_real(m.sup_defect),
                format_real(m.sup_edge),
                format_real(m.sup_area),
                format_real(m.max_curv_diff),
                format_opt(self.defect_ratios.get(j).copied().flatten()),
                format_opt(self.two_step_defect_ratios.get(j).copied().flatten()),
                format_opt(self.curvature_ratios.get(j).copied().flatten()),
            ]
        });
        csv_bytes(&header, rows)
    }
}

impl CsvTable for DivergenceReport {
    fn to_csv(&self) -> Vec<u8> {
        let header = ["iteration", "kappa", "predicted_planar_kappa", "defect", "edge", "area"];
        let rows = (0..self.center_curvature.len()).map(|j| {
            vec![
                j.to_string(),
                format_real(self.center_curvature[j]),
                format_real(self.predicted_curvature[j]),
                format_real(self.center_defect[j]),
                format_real(self.center_edge[j]),
                format_real(self.center_area[j]),
            ]
        });
        csv_bytes(&header, rows)
    }
}

pub fn emit_csv<T: CsvTable + ?Sized>(table: &T) -> Vec<u8> {
    table.to_csv()
}

/// One curve of a plot.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub label: String,
    pub color: String,
    pub points: Vec<(f64, f64)>,
}

impl PlotSeries {
    /// Curvature against arc length, coloured by estimator: red for the
    /// defect curvature, black for the circumcircle.
    pub fn from_curvature(series: &CurvatureSeries, estimator: Estimator) -> Self {
        let color = match estimator {
            Estimator::Defect => "red",
            Estimator::Circumcircle => "black",
            Estimator::Chord => "steelblue",
        };
        PlotSeries {
            label: estimator.name().to_owned(),
            color: color.to_owned(),
            points: series.samples.iter().map(|c| (c.s, c.kappa)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotStyle {
    pub width: f64,
    pub height: f64,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

impl Default for PlotStyle {
    fn default() -> Self {
        PlotStyle {
            width: 640.0,
            height: 400.0,
            title: String::new(),
            x_label: "arc length".into(),
            y_label: "curvature".into(),
        }
    }
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { lo.abs().max(1.0) * 0.5 };
    (lo - pad, hi + pad)
}

/// Standalone SVG line plot with axes and a legend.
pub fn emit_svg_plot(series: &[PlotSeries], style: &PlotStyle) -> Result<Vec<u8>> {
    if series.is_empty() {
        return Err(Error::InvalidInput("plot needs at least one series".into()));
    }
    let (w, h) = (style.width, style.height);
    let (left, right, top, bottom) = (70.0, 20.0, 40.0, 50.0);
    let all = || series.iter().flat_map(|s| s.points.iter());
    let (x0, x1) = padded_range(all().map(|p| p.0));
    let (y0, y1) = padded_range(all().map(|p| p.1));
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
    let sy = |y: f64| h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    if !style.title.is_empty() {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
            w / 2.0,
            escape_xml(&style.title)
        );
    }
    // axes with min/max tick labels
    let _ = writeln!(
        svg,
        r#"<g class="axes" stroke="gray" fill="none"><line x1="{left}" y1="{yb}" x2="{xr}" y2="{yb}"/><line x1="{left}" y1="{top}" x2="{left}" y2="{yb}"/></g>"#,
        yb = h - bottom,
        xr = w - right
    );
    for (x, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="{anchor}">{x:.4}</text>"#,
            sx(x),
            h - bottom + 16.0
        );
    }
    for y in [y0, y1] {
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{y:.4}</text>"#, left - 6.0, sy(y) + 4.0);
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (left + w - right) / 2.0,
        h - 10.0,
        escape_xml(&style.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        (top + h - bottom) / 2.0,
        (top + h - bottom) / 2.0,
        escape_xml(&style.y_label)
    );
    for s in series {
        let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="series" fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            escape_xml(&s.color),
            pts.join(" ")
        );
    }
    let _ = writeln!(svg, r#"<g class="legend">"#);
    for (k, s) in series.iter().enumerate() {
        let y = top + 10.0 + 18.0 * k as f64;
        let x = w - right - 130.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            x + 24.0,
            escape_xml(&s.color),
            x + 30.0,
            y + 4.0,
            escape_xml(&s.label)
        );
    }
    let _ = writeln!(svg, "</g>\n</svg>");
    Ok(svg.into_bytes())
}

/// OBJ-style `v`/`l` records of the polyline, indices 1-based.
pub fn emit_polyline3d(polygon: &GeodesicPolygon) -> Vec<u8> {
    let mut out = String::new();
    for v in polygon.vertices() {
        let _ = writeln!(out, "v {} {} {}", format_real(v.x()), format_real(v.y()), format_real(v.z()));
    }
    for i in 0..polygon.edge_count() {
        let _ = writeln!(out, "l {} {}", i + 1, (i + 1) % polygon.len() + 1);
    }
    out.into_bytes()
}

/// Writes to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
