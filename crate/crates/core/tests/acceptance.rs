//! End-to-end acceptance checks, one pass/fail line per criterion.

mod common;

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use geosub::analysis::{
    closed_form_alpha, closed_form_defects, divergence_experiment, legendre_residual, planar_base_angle,
    planar_defect_triple, planar_divergence_window, AnalysisReport, DivergenceCriteria, DivergenceVerdict, Surface,
};
use geosub::curvature::{planar_vline_curvature, polygon_curvature_series, AnalyticCurve, Estimator};
use geosub::fixtures::fixture;
use geosub::schemes::{
    planar_angle4_step, sbigs_insert, sbigs_insert_from_end, subdivide, Boundary, GeodesicPolygon, PlanarPolygon,
    SchemeConfig, SchemeKind,
};
use geosub::sphere::{geodesic_distance, log_map, TangentVector, UnitVector, Vec3};
use geosub::triangle::{area_from_sides, darboux_residual, frame_at_vertex};
use nalgebra::Vector2;
use rand::Rng;

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn ac1_contraction() -> Outcome {
    let t = Instant::now();
    let mut rng = rng(1);
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let n = 5 + k % 8;
        let p = random_closed_polygon(&mut rng, n, 0.6);
        let levels = subdivide(&p, &SchemeConfig::new(SchemeKind::SphericalAngle4, 10)).unwrap();
        let report = AnalysisReport::from_levels(&levels).unwrap();
        for r in report.two_step_defect_ratios.iter().flatten() {
            worst = worst.max(*r);
        }
    }
    let dt = t.elapsed();
    outcome(
        worst <= 0.875 + 1e-9 && within(dt, 5.0),
        format!("max two-step ratio {worst:.6} over 20 polygons ({:.2?})", dt),
    )
}

fn ac2_circle_convergence() -> Outcome {
    let t = Instant::now();
    let curve = AnalyticCurve::SmallCircle { radius: 0.5 };
    let exact = curve.curvature();
    let hs = [0.1, 0.05, 0.025, 0.0125];
    let mut ok = true;
    let mut parts = Vec::new();
    for est in Estimator::ALL {
        let errs: Vec<f64> = hs
            .iter()
            .map(|&h| {
                let (a, b, c) = curve.sphere_vline(0.7, h).unwrap();
                (est.evaluate(a, b, c).unwrap() - exact).abs()
            })
            .collect();
        // the circumcircle estimator is exact, so its errors sit at the rounding floor
        let monotone = errs.windows(2).all(|w| w[1] < w[0] || w[1] <= 1e-12);
        ok &= monotone && errs[3] < 1e-3;
        parts.push(format!("{} {:.2e}", est.name(), errs[3]));
    }
    let dt = t.elapsed();
    outcome(ok && within(dt, 1.0), format!("errors at h=0.0125: {} ({:.2?})", parts.join(", "), dt))
}

/// Coordinates of `v` in an oriented orthonormal basis of the tangent plane at `p`.
fn tangent_coords(p: UnitVector, v: &Vec3) -> Vector2<f64> {
    let n = p.as_vector();
    let seed = if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let a = (seed - n * n.dot(&seed)).normalize();
    let b = n.cross(&a);
    Vector2::new(v.dot(&a), v.dot(&b))
}

fn ac3_tangent_plane_reduction() -> Outcome {
    let mut rng = rng(3);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let p = random_unit(&mut rng);
        let t = random_tangent(&mut rng, p);
        let p1 = offset(p, &t, 0.0, rng.gen_range(0.05..1.5));
        let p2 = offset(p, &t, PI + rng.gen_range(-2.5..2.5), rng.gen_range(0.05..1.5));
        let Ok(k) = Estimator::Defect.evaluate(p1, p, p2) else { continue };
        let q1 = tangent_coords(p, &log_map(p, p1).unwrap());
        let q2 = tangent_coords(p, &log_map(p, p2).unwrap());
        let kp = planar_vline_curvature(q1, Vector2::zeros(), q2).unwrap();
        worst = worst.max((k - kp).abs() / k.abs().max(1.0));
    }
    outcome(worst <= 1e-12, format!("max relative gap {worst:.2e} over 10^4 V-lines"))
}

fn ac4_triangle_identities() -> Outcome {
    let mut rng = rng(4);
    let (mut area_gap, mut darboux, mut dual): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..1000 {
        // isosceles configuration for the closed-form area
        let p = random_unit(&mut rng);
        let t = random_tangent(&mut rng, p);
        let e = rng.gen_range(0.05..1.2);
        let delta = rng.gen_range(-2.5..2.5);
        let f = frame_at_vertex(offset(p, &t, PI + delta, e), p, offset(p, &t, 0.0, e)).unwrap();
        let girard = f.alpha + f.beta - f.delta;
        area_gap = area_gap.max((girard - area_from_sides(e, f.delta, f.l_chord).unwrap()).abs());

        // general triangle for Delambre/Darboux
        let g = frame_at_vertex(
            offset(p, &t, PI + rng.gen_range(-2.8..2.8), rng.gen_range(0.05..1.3)),
            p,
            offset(p, &t, 0.0, rng.gen_range(0.05..1.3)),
        )
        .unwrap();
        darboux = darboux.max(darboux_residual(&g).abs());

        // both insertion constructions of one triangle
        let a = random_unit(&mut rng);
        let b = offset(a, &random_tangent(&mut rng, a), 0.0, rng.gen_range(0.05..2.0));
        let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let (alpha, beta) = (s * rng.gen_range(0.01..1.4), s * rng.gen_range(0.01..1.4));
        let u = TangentVector::towards(a, b).unwrap();
        let v = TangentVector::towards(b, a).unwrap().reversed();
        let x = sbigs_insert(a, b, &u, alpha, beta).unwrap();
        let y = sbigs_insert_from_end(a, b, &v, alpha, beta).unwrap();
        dual = dual.max(geodesic_distance(x, y));
    }
    let oct = frame_at_vertex(UnitVector::unit_x(), UnitVector::unit_y(), UnitVector::unit_z()).unwrap();
    let octant = (oct.area.abs() - PI / 2.0).abs();
    outcome(
        area_gap <= 1e-9 && darboux <= 1e-12 && dual <= 1e-9 && octant <= 1e-12,
        format!("area {area_gap:.1e}, darboux {darboux:.1e}, dual {dual:.1e}, octant {octant:.1e}"),
    )
}

fn ac5_legendre_scaling() -> Outcome {
    let p = UnitVector::unit_z();
    let t = TangentVector::new(p, Vec3::x()).unwrap();
    let residual = |l: f64| {
        let f = frame_at_vertex(offset(p, &t, PI - 1.2, l), p, offset(p, &t, 0.0, 1.3 * l)).unwrap();
        legendre_residual(&f)
    };
    let r: Vec<f64> = [0.2, 0.1, 0.05, 0.025].iter().map(|&l| residual(l)).collect();
    let ok = r.windows(2).all(|w| w[1] <= w[0] / 12.0);
    let ratios: Vec<String> = r.windows(2).map(|w| format!("{:.1}", w[0] / w[1])).collect();
    outcome(ok, format!("R(l)/R(l/2) = {}", ratios.join(", ")))
}

fn ac6_closed_forms() -> Outcome {
    let (d0, d1, e) = (0.3, 0.1, 0.2);
    let mut w = planar_divergence_window(d0, d1, e).unwrap().to_vec();
    let (mut defect_gap, mut alpha_gap): (f64, f64) = (0.0, 0.0);
    for j in 0..=20 {
        let poly = PlanarPolygon::new(w.clone(), false).unwrap();
        let (m, c, p) = planar_defect_triple(&poly, 2).unwrap();
        let (em, ec, ep) = closed_form_defects(d1, d0, d1, j);
        defect_gap = defect_gap.max((m - em).abs()).max((c - ec).abs()).max((p - ep).abs());
        if j > 0 {
            alpha_gap = alpha_gap.max((planar_base_angle(&poly, 2).unwrap() - closed_form_alpha(d0, d1, j)).abs());
        }
        // keep the centre five vertices; doubling about the centre is exact
        let next = planar_angle4_step(&poly, Boundary::FixedEndpoints).unwrap();
        w = next.vertices()[2..7].iter().map(|q| 2.0 * q).collect();
    }
    outcome(
        defect_gap <= 1e-10 && alpha_gap <= 1e-10,
        format!("defects {defect_gap:.1e}, alpha {alpha_gap:.1e} for j ≤ 20"),
    )
}

fn ac7_divergence() -> Outcome {
    let t = Instant::now();
    let c = DivergenceCriteria::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for surface in [Surface::Planar, Surface::Spherical] {
        let up = divergence_experiment(0.3, 0.1, 0.1, 30, surface, &c).unwrap();
        let k = &up.center_curvature;
        let increasing = (5..30).all(|j| k[j + 1].abs() > k[j].abs());
        let grown = k[30].abs() > 10.0 * k[0].abs();
        let down = divergence_experiment(0.1, 0.3, 0.1, 30, surface, &c).unwrap();
        let flipped =
            k[30] > 0.0 && down.center_curvature[30] < 0.0 && down.verdict == DivergenceVerdict::DivergentNegative;
        ok &= increasing && grown && flipped && up.verdict == DivergenceVerdict::DivergentPositive;
        if surface == Surface::Planar {
            let rel = (0..=20)
                .map(|j| ((k[j] - up.predicted_curvature[j]) / up.predicted_curvature[j]).abs())
                .fold(0.0, f64::max);
            ok &= rel < 0.01;
            parts.push(format!("planar |k30/k0| {:.2}, prediction gap {rel:.1e}", k[30] / k[0]));
        } else {
            parts.push(format!("spherical |k30/k0| {:.2}", k[30] / k[0]));
        }
    }
    let dt = t.elapsed();
    outcome(ok && within(dt, 2.0), format!("{} ({:.2?})", parts.join("; "), dt))
}

fn curvature6_config() -> SchemeConfig {
    SchemeConfig { scheme: SchemeKind::SphericalCurvature6, iterations: 10, ..Default::default() }
}

fn ac8_six_point() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["m-like", "s-like", "t-like"] {
        let p = fixture(name).unwrap().spherical().unwrap();
        let levels = subdivide(&p, &curvature6_config()).unwrap();
        let report = AnalysisReport::from_levels(&levels).unwrap();
        let worst_ratio = (3..=9).map(|j| report.curvature_ratios[j].unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
        let series = polygon_curvature_series(&levels[9], Estimator::Defect).unwrap();
        let jump = series.samples.windows(2).map(|w| (w[1].kappa - w[0].kappa).abs()).fold(0.0, f64::max);
        let rel_jump = jump / series.max_abs();
        ok &= worst_ratio < 1.0 && rel_jump < 0.05;
        parts.push(format!("{name} ratio ≤ {worst_ratio:.3}, jump {rel_jump:.3}"));
    }
    let dt = t.elapsed();
    outcome(ok && within(dt, 30.0), format!("{} ({:.2?})", parts.join("; "), dt))
}

fn ac9_invariants() -> Outcome {
    let mut rng = rng(9);
    let mut runs: Vec<(GeodesicPolygon, SchemeConfig)> = Vec::new();
    let mut r1 = common::rng(1);
    for k in 0..20 {
        runs.push((random_closed_polygon(&mut r1, 5 + k % 8, 0.6), SchemeConfig::new(SchemeKind::SphericalAngle4, 10)));
    }
    for name in ["m-like", "s-like", "t-like"] {
        runs.push((fixture(name).unwrap().spherical().unwrap(), curvature6_config()));
    }
    runs.push((fixture("star").unwrap().spherical().unwrap(), SchemeConfig::new(SchemeKind::SphericalAngle4, 8)));
    let (mut interp, mut equiv): (f64, f64) = (0.0, 0.0);
    for (p, cfg) in &runs {
        let levels = subdivide(p, cfg).unwrap();
        interp = interp.max(interpolation_gap(&levels));
        let q = random_rotation(&mut rng);
        let rotated = subdivide(&p.rotated(&q), cfg).unwrap();
        equiv = equiv.max(max_vertex_gap(&levels.last().unwrap().rotated(&q), rotated.last().unwrap()));
    }
    outcome(
        interp <= 1e-15 && equiv <= 1e-10,
        format!("interpolation {interp:.1e}, equivariance {equiv:.1e} over {} runs", runs.len()),
    )
}

fn ac10_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str| {
        let path = dir.path().join(out);
        let status = Command::new(env!("CARGO_BIN_EXE_geosub"))
            .args(["analyze", "--fixture", "m-like", "--scheme", "curvature6", "--iterations", "6", "--report"])
            .arg(&path)
            .output()
            .unwrap()
            .status;
        (status.success(), std::fs::read(&path).unwrap_or_default())
    };
    let (ok1, a) = run("first.csv");
    let (ok2, b) = run("second.csv");
    outcome(ok1 && ok2 && !a.is_empty() && a == b, format!("{} bytes, identical: {}", a.len(), a == b))
}

/// Identifier, description and check.
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn main() {
    let checks: [Criterion; 10] = [
        ("AC1", "two-step defect contraction", ac1_contraction),
        ("AC2", "small-circle curvature convergence", ac2_circle_convergence),
        ("AC3", "tangent-plane reduction", ac3_tangent_plane_reduction),
        ("AC4", "triangle identities", ac4_triangle_identities),
        ("AC5", "Legendre scaling", ac5_legendre_scaling),
        ("AC6", "planar closed forms", ac6_closed_forms),
        ("AC7", "centre curvature blow-up", ac7_divergence),
        ("AC8", "six-point curvature continuity", ac8_six_point),
        ("AC9", "interpolation and equivariance", ac9_invariants),
        ("AC10", "deterministic CLI reports", ac10_determinism),
    ];
    let mut failed = 0;
    for (id, name, check) in checks {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("[{}] {id} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
