use std::path::Path;
use std::process::{Command, Output};

use geosub::curvature::{polygon_curvature_series, Estimator};
use geosub::fixtures::{fixture, fixture_source};
use geosub::io::parse_polygon;
use geosub::schemes::{subdivide, SchemeConfig, SchemeKind};

fn geosub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geosub")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_fixture(dir: &Path, name: &str) -> String {
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, fixture_source(name).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn unknown_flag_is_an_input_error() {
    let o = geosub(&["subdivide", "--fixture", "star", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"format\": \"unit-xyz\", \"closed\": true, \"points\": [[1, 0]]}").unwrap();
    let o = geosub(&["analyze", "--in", path.to_str().unwrap(), "--iterations", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unsolvable_curvature_step_is_a_numeric_error() {
    let o = geosub(&[
        "analyze",
        "--fixture",
        "star",
        "--scheme",
        "curvature6",
        "--iterations",
        "3",
        "--presmooth",
        "0",
        "--margin",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn zero_iterations_copies_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let src = write_fixture(dir.path(), "s-like");
    let out = dir.path().join("out");
    let o = geosub(&["subdivide", "--in", &src, "--iterations", "0", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let original = parse_polygon(std::fs::read(&src).unwrap().as_slice()).unwrap().spherical().unwrap();
    let copy =
        parse_polygon(std::fs::read(out.join("subdivided.json")).unwrap().as_slice()).unwrap().spherical().unwrap();
    assert_eq!(original.closed(), copy.closed());
    assert_eq!(original.len(), copy.len());
    for (a, b) in original.vertices().iter().zip(copy.vertices()) {
        assert!((a.as_vector() - b.as_vector()).norm() < 1e-11);
    }
}

#[test]
fn all_levels_and_obj_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = geosub(&["subdivide", "--fixture", "star", "--iterations", "3", "--out-dir", out, "--all-levels"]);
    assert_eq!(o.status.code(), Some(0));
    for j in 0..=3 {
        assert!(dir.path().join(format!("level-{j:02}.json")).exists());
    }
    let obj = std::fs::read_to_string(dir.path().join("subdivided.obj")).unwrap();
    let vertices: Vec<Vec<f64>> = obj
        .lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect();
    // closed star: 5·2³ vertices, one segment per edge
    assert_eq!(vertices.len(), 40);
    assert_eq!(obj.lines().filter(|l| l.starts_with("l ")).count(), 40);
    for v in &vertices {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-10);
    }
}

#[test]
fn equal_defects_do_not_diverge() {
    let o = geosub(&["diverge", "--delta0", "0.2", "--delta1", "0.2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: bounded"), "{}", stdout(&o));
}

#[test]
fn unequal_defects_diverge_in_the_plane() {
    let o = geosub(&["diverge", "--delta0", "-0.3", "--delta1", "0.1", "--planar"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: divergent (-inf)"), "{}", stdout(&o));
}

#[test]
fn star_analysis_contracts() {
    let o = geosub(&["analyze", "--fixture", "star", "--iterations", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).take(9).map(|l| l.split_whitespace().collect()).collect();
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r[6].parse().ok()).collect();
    assert_eq!(ratios.len(), 7);
    assert!(ratios.iter().all(|&r| r <= 0.875), "{ratios:?}");
    assert!(text.contains("summability: geometric-decay"));
}

#[test]
fn curvature_csv_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("k.csv");
    let o = geosub(&[
        "curvature",
        "--fixture",
        "m-like",
        "--iterations",
        "2",
        "--estimator",
        "chord",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["s", "kappa"]);
    let rows: Vec<(f64, f64)> = reader.deserialize().map(|r| r.unwrap()).collect();
    // open polygon of 9·4 − 3 vertices, endpoints excluded
    assert_eq!(rows.len(), 31);
    assert!(rows.windows(2).all(|w| w[1].0 > w[0].0));

    let m = fixture("m-like").unwrap().spherical().unwrap();
    let levels = subdivide(&m, &SchemeConfig::new(SchemeKind::SphericalAngle4, 2)).unwrap();
    let series = polygon_curvature_series(&levels[2], Estimator::Chord).unwrap();
    for (row, sample) in rows.iter().zip(&series.samples) {
        assert!((row.1 - sample.kappa).abs() <= 1e-11 * sample.kappa.abs().max(1.0));
    }
}

#[test]
fn svg_plot_is_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("k.svg");
    let o = geosub(&[
        "curvature",
        "--fixture",
        "t-like",
        "--iterations",
        "3",
        "--estimator",
        "defect,chord,circumcircle",
        "--svg",
        svg_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg_path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let polylines = doc.descendants().filter(|n| n.has_tag_name("polyline") && n.attribute("class") == Some("series"));
    assert_eq!(polylines.count(), 3);
    let legend = doc.descendants().find(|n| n.has_tag_name("g") && n.attribute("class") == Some("legend")).unwrap();
    assert_eq!(legend.descendants().filter(|n| n.has_tag_name("text")).count(), 3);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let out = dir.path().join(tag);
        let csv = out.join("report.csv");
        std::fs::create_dir_all(&out).unwrap();
        let a = geosub(&["subdivide", "--fixture", "s-like", "--iterations", "4", "--out-dir", out.to_str().unwrap()]);
        let b = geosub(&["analyze", "--fixture", "s-like", "--iterations", "4", "--report", csv.to_str().unwrap()]);
        assert_eq!((a.status.code(), b.status.code()), (Some(0), Some(0)));
        (std::fs::read(out.join("subdivided.obj")).unwrap(), std::fs::read(csv).unwrap(), b.stdout)
    };
    assert_eq!(run("first"), run("second"));
}
