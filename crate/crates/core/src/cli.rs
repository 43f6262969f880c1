//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for bad input or usage, 3 when a numeric or
//! degeneracy failure stops the computation.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{divergence_experiment, summability_diagnostic, AnalysisReport, DivergenceCriteria, Surface};
use crate::curvature::{polygon_curvature_series, Estimator};
use crate::error::Error;
use crate::fixtures::fixture;
use crate::io::{
    emit_csv, emit_planar_polygon_json, emit_polygon_json, emit_polyline3d, emit_svg_plot, parse_polygon, write_atomic,
    ParsedPolygon, PlotSeries, PlotStyle, PolygonInput,
};
use crate::schemes::{subdivide, subdivide_planar, Boundary, GeodesicPolygon, SchemeConfig, SchemeKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "geosub", version, about = "Geometric subdivision of spherical and planar polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Refine a polygon and write the final level.
    Subdivide {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Directory receiving `subdivided.json` (and `subdivided.obj` on the sphere).
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Also write every intermediate level as `level-JJ.json`.
        #[arg(long)]
        all_levels: bool,
    },
    /// Evaluate discrete curvature along a polygon.
    Curvature {
        #[command(flatten)]
        input: InputArgs,
        /// Estimators to evaluate; the CSV holds the first one.
        #[arg(long, value_delimiter = ',', default_value = "defect")]
        estimator: Vec<Estimator>,
        /// Refine with the chosen scheme before measuring.
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Per-iteration defect, edge, area and curvature-difference report.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// CSV report path; the table is printed either way.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Tail ratios must stay below `1 - epsilon` for a geometric-decay verdict.
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
    },
    /// Curvature blow-up at the centre of a symmetric five-point polygon.
    Diverge {
        #[arg(long, allow_hyphen_values = true)]
        delta0: f64,
        #[arg(long, allow_hyphen_values = true)]
        delta1: f64,
        #[arg(long, default_value_t = 0.1)]
        edge: f64,
        #[arg(long, default_value_t = 30)]
        iterations: usize,
        #[arg(long, conflicts_with = "spherical")]
        planar: bool,
        /// The default surface.
        #[arg(long)]
        spherical: bool,
        #[arg(long, default_value_t = 10.0)]
        growth_factor: f64,
        #[arg(long, default_value_t = 5)]
        increases: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Polygon JSON document.
    #[arg(long = "in", value_name = "FILE")]
    path: Option<PathBuf>,
    /// Built-in polygon: m-like, s-like, t-like or star.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Debug, Args)]
struct SchemeArgs {
    #[arg(long, default_value = "angle4")]
    scheme: SchemeKind,
    #[arg(long, default_value_t = 0)]
    iterations: usize,
    #[arg(long, default_value = "fixed-endpoints")]
    boundary: Boundary,
    /// Leading angle-based steps of the curvature scheme.
    #[arg(long, default_value_t = 2)]
    presmooth: usize,
    /// Solvability margin of the curvature scheme.
    #[arg(long, default_value_t = 0.01)]
    margin: f64,
}

impl SchemeArgs {
    fn config(&self) -> SchemeConfig {
        SchemeConfig {
            scheme: self.scheme,
            iterations: self.iterations,
            boundary: self.boundary,
            presmooth_iterations: self.presmooth,
            solvability_margin: self.margin,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(e) if e.is_numeric() => EXIT_NUMERIC,
            _ => EXIT_INPUT,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read_input(args: &InputArgs) -> CliResult<PolygonInput> {
    match (&args.path, &args.fixture) {
        (Some(path), _) => {
            let bytes = std::fs::read(path).map_err(|source| Failure::Io { path: path.clone(), source })?;
            Ok(parse_polygon(&bytes)?)
        }
        (None, Some(name)) => Ok(fixture(name)?),
        (None, None) => unreachable!("clap enforces one input source"),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    write_atomic(path, bytes).map_err(|source| Failure::Io { path: path.to_owned(), source })
}

fn spherical_levels(input: PolygonInput, cfg: &SchemeConfig) -> CliResult<Vec<GeodesicPolygon>> {
    Ok(subdivide(&input.spherical()?, cfg)?)
}

fn cmd_subdivide(
    input: PolygonInput,
    cfg: &SchemeConfig,
    out_dir: &Path,
    all_levels: bool,
    out: &mut dyn Write,
) -> CliResult<()> {
    std::fs::create_dir_all(out_dir).map_err(|source| Failure::Io { path: out_dir.to_owned(), source })?;
    let name = input.name.clone();
    let name = name.as_deref();
    let mut docs: Vec<Vec<u8>> = Vec::new();
    let mut obj = None;
    match input.polygon {
        ParsedPolygon::Planar(p) => {
            for level in subdivide_planar(&p, cfg)? {
                docs.push(emit_planar_polygon_json(&level, name));
            }
        }
        ParsedPolygon::Spherical(p) => {
            let levels = subdivide(&p, cfg)?;
            obj = levels.last().map(emit_polyline3d);
            docs.extend(levels.iter().map(|l| emit_polygon_json(l, name)));
        }
    }
    if all_levels {
        for (j, doc) in docs.iter().enumerate() {
            write_file(&out_dir.join(format!("level-{j:02}.json")), doc)?;
        }
    }
    write_file(&out_dir.join("subdivided.json"), docs.last().expect("P⁰ present"))?;
    if let Some(obj) = obj {
        write_file(&out_dir.join("subdivided.obj"), &obj)?;
    }
    let _ = writeln!(out, "{} level(s) written to {}", docs.len(), out_dir.display());
    Ok(())
}

fn cmd_curvature(
    input: PolygonInput,
    estimators: &[Estimator],
    cfg: &SchemeConfig,
    csv: Option<&Path>,
    svg: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let levels = spherical_levels(input, cfg)?;
    let polygon = levels.last().expect("P⁰ present");
    let mut all = Vec::with_capacity(estimators.len());
    for &est in estimators {
        let series = polygon_curvature_series(polygon, est)?;
        if series.has_warnings() {
            let _ = writeln!(out, "warning: {}: skipped degenerate vertices {:?}", est.name(), series.skipped);
        }
        let _ = writeln!(out, "{}: {} samples, max |kappa| = {:.6}", est.name(), series.len(), series.max_abs());
        all.push((est, series));
    }
    let (_, first) = &all[0];
    match csv {
        Some(path) => write_file(path, &emit_csv(first))?,
        None if svg.is_none() => {
            let _ = out.write_all(&emit_csv(first));
        }
        None => {}
    }
    if let Some(path) = svg {
        let plots: Vec<PlotSeries> = all.iter().map(|(e, s)| PlotSeries::from_curvature(s, *e)).collect();
        let style =
            PlotStyle { title: format!("discrete curvature, {} vertices", polygon.len()), ..Default::default() };
        write_file(path, &emit_svg_plot(&plots, &style)?)?;
    }
    Ok(())
}

fn ratio(x: Option<&Option<f64>>) -> String {
    match x {
        Some(Some(r)) => format!("{r:.6}"),
        _ => "-".into(),
    }
}

fn cmd_analyze(
    input: PolygonInput,
    cfg: &SchemeConfig,
    report_path: Option<&Path>,
    epsilon: f64,
    out: &mut dyn Write,
) -> CliResult<()> {
    let levels = spherical_levels(input, cfg)?;
    let report = AnalysisReport::from_levels(&levels)?;
    let _ = writeln!(
        out,
        "{:>4} {:>14} {:>14} {:>14} {:>14} {:>10} {:>10} {:>10}",
        "j", "sup_defect", "sup_edge", "sup_area", "max_curv_diff", "d1/d0", "d2/d0", "k1/k0"
    );
    for (j, m) in report.metrics.iter().enumerate() {
        let _ = writeln!(
            out,
            "{j:>4} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>10} {:>10} {:>10}",
            m.sup_defect,
            m.sup_edge,
            m.sup_area,
            m.max_curv_diff,
            ratio(report.defect_ratios.get(j)),
            ratio(report.two_step_defect_ratios.get(j)),
            ratio(report.curvature_ratios.get(j)),
        );
    }
    match summability_diagnostic(&report.metrics, epsilon) {
        Ok(d) => {
            let _ = writeln!(out, "summability: {}", d.verdict.name());
        }
        Err(_) => {
            let _ = writeln!(out, "summability: needs at least 2 iterations");
        }
    }
    if let Some(path) = report_path {
        write_file(path, &emit_csv(&report))?;
    }
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Subdivide { input, scheme, out_dir, all_levels } => {
            let cfg = scheme.config();
            cmd_subdivide(read_input(&input)?, &cfg, &out_dir, all_levels, out)
        }
        Command::Curvature { input, estimator, scheme, csv, svg } => {
            cmd_curvature(read_input(&input)?, &estimator, &scheme.config(), csv.as_deref(), svg.as_deref(), out)
        }
        Command::Analyze { input, scheme, report, epsilon } => {
            cmd_analyze(read_input(&input)?, &scheme.config(), report.as_deref(), epsilon, out)
        }
        Command::Diverge { delta0, delta1, edge, iterations, planar, spherical: _, growth_factor, increases, csv } => {
            let surface = if planar { Surface::Planar } else { Surface::Spherical };
            let criteria = DivergenceCriteria { growth_factor, consecutive_increases: increases };
            let report = divergence_experiment(delta0, delta1, edge, iterations, surface, &criteria)?;
            let k = &report.center_curvature;
            let _ = writeln!(out, "kappa_0 at j=0: {:.9e}", k[0]);
            let _ = writeln!(out, "kappa_0 at j={iterations}: {:.9e}", k[k.len() - 1]);
            let _ = writeln!(out, "verdict: {}", report.verdict.name());
            if let Some(path) = csv {
                write_file(&path, &emit_csv(&report))?;
            }
            Ok(())
        }
    }
}

/// Parses `args` (program name first) and runs one command.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { EXIT_OK } else { EXIT_INPUT };
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
