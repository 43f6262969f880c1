//! Interpolatory subdivision engines.
//!
//! All schemes keep the old vertices (`p_{2i}^{j+1} = p_i^j`) and insert one
//! new vertex per edge. The spherical schemes place it with the bisector
//! construction: seen from both endpoints of the edge under the same base
//! angle, at the geodesic distance given by the ASA formulas.

use std::f64::consts::PI;

use nalgebra::Rotation2;

pub use crate::polygon::{GeodesicPolygon, PlanarPolygon, Point2};

use crate::curvature::chord_curvature_of;
use crate::error::{Error, Result};
use crate::sphere::{geodesic_distance, geodesic_point, rotate_about_axis, TangentVector, UnitVector};
use crate::triangle::{asa_new_edges, right_triangle_alpha};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    SphericalAngle4,
    SphericalCurvature6,
    PlanarAngle4,
}

impl SchemeKind {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::SphericalAngle4 => "angle4",
            SchemeKind::SphericalCurvature6 => "curvature6",
            SchemeKind::PlanarAngle4 => "planar-angle4",
        }
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "angle4" | "spherical-angle-4pt" => Ok(SchemeKind::SphericalAngle4),
            "curvature6" | "spherical-curvature-6pt" => Ok(SchemeKind::SphericalCurvature6),
            "planar-angle4" | "planar-angle-4pt" => Ok(SchemeKind::PlanarAngle4),
            other => Err(Error::InvalidInput(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Defects assigned to the endpoints of an open polygon, where the
/// four-point stencil runs off the data. Endpoints never move either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    /// Endpoint defect copies its neighbour's (`δ₀ := δ₁`).
    #[default]
    FixedEndpoints,
    /// Defects are extended antisymmetrically past the endpoint, which
    /// pins the endpoint defect to zero.
    MirrorDefects,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed-endpoints" => Ok(Boundary::FixedEndpoints),
            "mirror-defects" => Ok(Boundary::MirrorDefects),
            other => Err(Error::InvalidInput(format!("unknown boundary policy '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub scheme: SchemeKind,
    pub iterations: usize,
    pub boundary: Boundary,
    /// Leading angle-based steps of the curvature scheme, counted within `iterations`.
    pub presmooth_iterations: usize,
    /// Insertions of the curvature scheme need `|sin δ| ≤ 1 − margin`.
    pub solvability_margin: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            scheme: SchemeKind::SphericalAngle4,
            iterations: 1,
            boundary: Boundary::FixedEndpoints,
            presmooth_iterations: 2,
            solvability_margin: 0.01,
        }
    }
}

impl SchemeConfig {
    pub fn new(scheme: SchemeKind, iterations: usize) -> Self {
        SchemeConfig { scheme, iterations, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.solvability_margin) {
            return Err(Error::InvalidInput(format!("solvability margin {} outside [0, 1)", self.solvability_margin)));
        }
        Ok(())
    }
}

/// New vertex seen from `p_i` under the angle `alpha` away from `u_i`, at the
/// distance the ASA formulas give for the triangle over `p_i p_{i+1}`.
pub fn sbigs_insert(
    p_i: UnitVector,
    p_ip1: UnitVector,
    u_i: &TangentVector,
    alpha: f64,
    beta: f64,
) -> Result<UnitVector> {
    if u_i.base() != p_i {
        return Err(Error::InvalidInput("tangent vector is not based at p_i".into()));
    }
    let l = geodesic_distance(p_i, p_ip1);
    let (e_even, _) = asa_new_edges(l, alpha, beta)?;
    let w = u_i.rotated(alpha);
    let axis = p_i.as_vector().cross(w.dir());
    let axis = axis / axis.norm();
    UnitVector::normalize(rotate_about_axis(p_i.as_vector(), &axis, e_even)?)
}

/// The same vertex built from the other endpoint, with `v_ip1` the incoming
/// tangent at `p_{i+1}`.
pub fn sbigs_insert_from_end(
    p_i: UnitVector,
    p_ip1: UnitVector,
    v_ip1: &TangentVector,
    alpha: f64,
    beta: f64,
) -> Result<UnitVector> {
    if v_ip1.base() != p_ip1 {
        return Err(Error::InvalidInput("tangent vector is not based at p_{i+1}".into()));
    }
    let l = geodesic_distance(p_i, p_ip1);
    let (_, e_odd) = asa_new_edges(l, alpha, beta)?;
    let w = v_ip1.rotated(PI - beta);
    let axis = p_ip1.as_vector().cross(w.dir());
    let axis = axis / axis.norm();
    UnitVector::normalize(rotate_about_axis(p_ip1.as_vector(), &axis, e_odd)?)
}

/// Base angle of the angle-based four-point rule.
pub fn angle4_new_angles(delta_i: f64, delta_ip1: f64) -> f64 {
    (delta_i + delta_ip1) / 8.0
}

/// Defects at every vertex, endpoints filled in by `boundary`.
fn extended_defects(interior: &[f64], n: usize, closed: bool, boundary: Boundary) -> Vec<f64> {
    if closed {
        return interior.to_vec();
    }
    let (first, last) = match boundary {
        Boundary::FixedEndpoints => (interior[0], interior[interior.len() - 1]),
        Boundary::MirrorDefects => (0.0, 0.0),
    };
    let mut all = Vec::with_capacity(n);
    all.push(first);
    all.extend_from_slice(interior);
    all.push(last);
    all
}

fn check_stencil_size(n: usize, closed: bool) -> Result<()> {
    let min = if closed { 3 } else { 4 };
    if n < min {
        return Err(Error::InvalidInput(format!("four-point step needs at least {min} vertices, got {n}")));
    }
    Ok(())
}

/// Inserts the bisector vertex over edge `(a, b)` with base angle `alpha`;
/// a zero angle yields the geodesic midpoint.
fn insert_bisector(a: UnitVector, b: UnitVector, alpha: f64) -> Result<UnitVector> {
    if alpha == 0.0 {
        return geodesic_point(a, b, 0.5);
    }
    let u = TangentVector::towards(a, b)?;
    sbigs_insert(a, b, &u, alpha, alpha)
}

fn interleave<T: Copy>(old: &[T], new: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(old.len() + new.len());
    for (i, p) in old.iter().enumerate() {
        out.push(*p);
        if let Some(x) = new.get(i) {
            out.push(*x);
        }
    }
    out
}

/// One step of the spherical angle-based four-point scheme.
pub fn angle4_step(polygon: &GeodesicPolygon, boundary: Boundary) -> Result<GeodesicPolygon> {
    let n = polygon.len();
    check_stencil_size(n, polygon.closed())?;
    let defects = extended_defects(&polygon.defects()?, n, polygon.closed(), boundary);
    let inserted = (0..polygon.edge_count())
        .map(|i| {
            let (a, b) = polygon.edge(i);
            let alpha = angle4_new_angles(defects[i], defects[(i + 1) % n]);
            insert_bisector(a, b, alpha).map_err(|e| e.at_vertex(2 * i + 1))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GeodesicPolygon::from_parts_unchecked(interleave(polygon.vertices(), &inserted), polygon.closed()))
}

/// The affine mask `(−3, 19, 19, −3)/32` on four consecutive curvatures.
pub fn curvature6_new_kappa(k_im1: f64, k_i: f64, k_ip1: f64, k_ip2: f64) -> f64 {
    (-3.0 * k_im1 + 19.0 * k_i + 19.0 * k_ip1 - 3.0 * k_ip2) / 32.0
}

/// Curvature prescribed for the vertex inserted on each edge.
fn curvature6_targets(polygon: &GeodesicPolygon) -> Result<Vec<f64>> {
    let n = polygon.len();
    let closed = polygon.closed();
    // chord curvature at every vertex that has two neighbours
    let mut kappa = vec![None; n];
    for i in polygon.interior_indices() {
        kappa[i] = Some(chord_curvature_of(&polygon.frame(i)?));
    }
    let at = |k: isize| -> Option<f64> {
        if closed {
            kappa[k.rem_euclid(n as isize) as usize]
        } else if k >= 0 && (k as usize) < n {
            kappa[k as usize]
        } else {
            None
        }
    };
    (0..polygon.edge_count())
        .map(|i| {
            let i = i as isize;
            match (at(i - 1), at(i), at(i + 1), at(i + 2)) {
                (Some(a), Some(b), Some(c), Some(d)) => Ok(curvature6_new_kappa(a, b, c, d)),
                (_, Some(b), Some(c), _) => Ok(0.5 * (b + c)),
                (_, Some(b), None, _) | (_, None, Some(b), _) => Ok(b),
                _ => Err(Error::InvalidInput("curvature step needs at least one interior vertex".into())),
            }
        })
        .collect()
}

/// One step of the curvature-based six-point scheme.
pub fn curvature6_step(polygon: &GeodesicPolygon, margin: f64) -> Result<GeodesicPolygon> {
    if polygon.len() < 3 {
        return Err(Error::InvalidInput("curvature step needs at least 3 vertices".into()));
    }
    let limit = 1.0 - margin;
    let targets = curvature6_targets(polygon)?;
    let inserted = targets
        .iter()
        .enumerate()
        .map(|(i, &kappa)| {
            let (a, b) = polygon.edge(i);
            let d = geodesic_distance(a, b);
            let s = kappa * d / 2.0;
            if s.is_nan() || s.abs() > limit {
                return Err(Error::Unsolvable { edge: i, value: s.abs(), limit });
            }
            let delta = s.asin();
            let alpha = right_triangle_alpha(delta, d / 2.0).map_err(|e| e.at_vertex(2 * i + 1))?;
            if alpha == 0.0 {
                return geodesic_point(a, b, 0.5);
            }
            let v = TangentVector::towards(b, a)?.reversed();
            sbigs_insert_from_end(a, b, &v, alpha, alpha).map_err(|e| e.at_vertex(2 * i + 1))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GeodesicPolygon::from_parts_unchecked(interleave(polygon.vertices(), &inserted), polygon.closed()))
}

/// One step of the planar angle-based four-point scheme.
pub fn planar_angle4_step(polygon: &PlanarPolygon, boundary: Boundary) -> Result<PlanarPolygon> {
    let n = polygon.len();
    check_stencil_size(n, polygon.closed())?;
    let interior = polygon.interior_indices().map(|i| polygon.defect(i)).collect::<Result<Vec<_>>>()?;
    let defects = extended_defects(&interior, n, polygon.closed(), boundary);
    let inserted = (0..polygon.edge_count())
        .map(|i| {
            let (a, b) = polygon.edge(i);
            let alpha = angle4_new_angles(defects[i], defects[(i + 1) % n]);
            if alpha.abs() >= PI / 2.0 {
                return Err(Error::Degenerate(format!("base angle {alpha} has |α| ≥ π/2")).at_vertex(2 * i + 1));
            }
            Ok(a + Rotation2::new(alpha) * (b - a) / (2.0 * alpha.cos()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PlanarPolygon::from_parts_unchecked(interleave(polygon.vertices(), &inserted), polygon.closed()))
}

/// Runs a spherical scheme, returning `P⁰, P¹, …, P^iterations`.
///
/// The curvature scheme spends its first `presmooth_iterations` steps on
/// the angle-based rule and fails, rather than smoothing further, when an
/// insertion is still unsolvable afterwards.
pub fn subdivide(polygon: &GeodesicPolygon, cfg: &SchemeConfig) -> Result<Vec<GeodesicPolygon>> {
    cfg.validate()?;
    let mut levels = Vec::with_capacity(cfg.iterations + 1);
    levels.push(polygon.clone());
    for j in 1..=cfg.iterations {
        let current = levels.last().expect("P⁰ present");
        let next = match cfg.scheme {
            SchemeKind::SphericalAngle4 => angle4_step(current, cfg.boundary),
            SchemeKind::SphericalCurvature6 if j <= cfg.presmooth_iterations => angle4_step(current, cfg.boundary),
            SchemeKind::SphericalCurvature6 => curvature6_step(current, cfg.solvability_margin),
            SchemeKind::PlanarAngle4 => {
                return Err(Error::InvalidInput("planar scheme needs a planar polygon".into()));
            }
        }
        .map_err(|e| e.at_iteration(j))?;
        levels.push(next);
    }
    Ok(levels)
}

/// Planar counterpart of [`subdivide`]; only `PlanarAngle4` applies.
pub fn subdivide_planar(polygon: &PlanarPolygon, cfg: &SchemeConfig) -> Result<Vec<PlanarPolygon>> {
    cfg.validate()?;
    if cfg.scheme != SchemeKind::PlanarAngle4 {
        return Err(Error::InvalidInput(format!("scheme {} needs a spherical polygon", cfg.scheme.name())));
    }
    let mut levels = Vec::with_capacity(cfg.iterations + 1);
    levels.push(polygon.clone());
    for j in 1..=cfg.iterations {
        let next =
            planar_angle4_step(levels.last().expect("P⁰ present"), cfg.boundary).map_err(|e| e.at_iteration(j))?;
        levels.push(next);
    }
    Ok(levels)
}
