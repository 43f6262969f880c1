//! Discrete curvature of planar V-lines and discrete geodesic curvature of
//! geodesic V-lines on the sphere.
//!
//! Every estimator is signed by the angular defect of the V-line, so a
//! clockwise turn (seen from outside the sphere, or from above the plane)
//! yields positive curvature. [`AnalyticCurve`] parametrizes its circles
//! clockwise so that their closed-form curvature carries the same sign.

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::polygon::{cross2, planar_defect, GeodesicPolygon, Point2};
use crate::sphere::{geodesic_distance, UnitVector, Vec3};
use crate::triangle::{frame_at_vertex, TriangleFrame};

/// Three consecutive points of a geodesic polygon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicVLine {
    pub p1: UnitVector,
    pub p: UnitVector,
    pub p2: UnitVector,
    pub l1: f64,
    pub l2: f64,
    pub defect: f64,
}

impl GeodesicVLine {
    pub fn new(p1: UnitVector, p: UnitVector, p2: UnitVector) -> Result<Self> {
        Ok(Self::from_frame(&frame_at_vertex(p1, p, p2)?))
    }

    pub fn from_frame(f: &TriangleFrame) -> Self {
        GeodesicVLine { p1: f.prev, p: f.vertex, p2: f.next, l1: f.l_prev, l2: f.l_next, defect: f.delta }
    }

    /// `2 δ / (l₁ + l₂)`
    pub fn curvature(&self) -> f64 {
        2.0 * self.defect / (self.l1 + self.l2)
    }
}

/// Three consecutive points of a planar polygon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarVLine {
    pub q1: Point2,
    pub q: Point2,
    pub q2: Point2,
    pub l1: f64,
    pub l2: f64,
    pub defect: f64,
}

impl PlanarVLine {
    pub fn new(q1: Point2, q: Point2, q2: Point2) -> Result<Self> {
        let defect = planar_defect(q1, q, q2)?;
        Ok(PlanarVLine { q1, q, q2, l1: (q - q1).norm(), l2: (q2 - q).norm(), defect })
    }

    pub fn curvature(&self) -> f64 {
        2.0 * self.defect / (self.l1 + self.l2)
    }

    /// Signed angles at `q₁` (chord to edge) and at `q₂` (edge to chord);
    /// they sum to the defect.
    pub fn base_angles(&self) -> (f64, f64) {
        let chord = self.q2 - self.q1;
        let alpha = crate::polygon::planar_angle(&chord, &(self.q - self.q1));
        let beta = crate::polygon::planar_angle(&(self.q2 - self.q), &chord);
        (alpha, beta)
    }
}

/// `κ_d = 2 δ̃ / (|q q₁| + |q q₂|)`.
pub fn planar_vline_curvature(q1: Point2, q: Point2, q2: Point2) -> Result<f64> {
    Ok(PlanarVLine::new(q1, q, q2)?.curvature())
}

/// `κ_g = 2 δ / (l₁ + l₂)` with `δ` the geodesic angular defect.
pub fn geodesic_vline_curvature(p1: UnitVector, p: UnitVector, p2: UnitVector) -> Result<f64> {
    Ok(GeodesicVLine::new(p1, p, p2)?.curvature())
}

/// `2 sin δ / d(p₁, p₂)`.
pub fn chord_curvature(p1: UnitVector, p: UnitVector, p2: UnitVector) -> Result<f64> {
    let f = frame_at_vertex(p1, p, p2)?;
    Ok(chord_curvature_of(&f))
}

pub(crate) fn chord_curvature_of(f: &TriangleFrame) -> f64 {
    2.0 * f.delta.sin() / f.l_chord
}

/// Signed inverse circumradius of three planar points; zero when collinear.
pub fn circumcircle_curvature_planar(q1: Point2, q: Point2, q2: Point2) -> Result<f64> {
    let incoming = q - q1;
    let outgoing = q2 - q;
    let chord = q2 - q1;
    let denom = incoming.norm() * outgoing.norm() * chord.norm();
    if denom == 0.0 {
        return Err(Error::Degenerate("coincident planar points".into()));
    }
    // sign of cross(out, in) is the sign of the defect
    Ok(2.0 * cross2(&outgoing, &incoming) / denom)
}

/// Spherical center (within `π/2` of `p`) of the small circle through
/// three points, or `None` when they lie on a great circle.
pub(crate) fn circumcircle_center(p1: UnitVector, p: UnitVector, p2: UnitVector) -> Result<Option<Vec3>> {
    let (a, b, c) = (p1.as_vector(), p.as_vector(), p2.as_vector());
    let n = (b - a).cross(&(c - b));
    let len = n.norm();
    if len == 0.0 || !len.is_finite() {
        return Err(Error::Degenerate("three points do not span a plane".into()));
    }
    let n = n / len;
    let h = n.dot(b);
    if h == 0.0 {
        return Ok(None);
    }
    Ok(Some(if h > 0.0 { n } else { -n }))
}

/// Geodesic curvature `cot ρ` of the small circle through the three points,
/// `ρ` its spherical radius; zero for great-circle triples.
pub fn spherical_circumcircle_curvature(p1: UnitVector, p: UnitVector, p2: UnitVector) -> Result<f64> {
    let f = frame_at_vertex(p1, p, p2)?;
    spherical_circumcircle_curvature_of(&f)
}

pub(crate) fn spherical_circumcircle_curvature_of(f: &TriangleFrame) -> Result<f64> {
    if f.delta == 0.0 {
        return Ok(0.0);
    }
    let Some(center) = circumcircle_center(f.prev, f.vertex, f.next)? else {
        return Ok(0.0);
    };
    let b = f.vertex.as_vector();
    let cot = center.dot(b) / center.cross(b).norm();
    Ok(cot.copysign(f.delta))
}

/// Which discrete curvature to evaluate along a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    /// `2δ / (e₋ + e₊)`
    Defect,
    /// `2 sin δ / d(p₋, p₊)`
    Chord,
    /// Curvature of the small circle through three consecutive vertices.
    Circumcircle,
}

impl Estimator {
    pub const ALL: [Estimator; 3] = [Estimator::Defect, Estimator::Chord, Estimator::Circumcircle];

    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Defect => "defect",
            Estimator::Chord => "chord",
            Estimator::Circumcircle => "circumcircle",
        }
    }

    pub fn evaluate(&self, p1: UnitVector, p: UnitVector, p2: UnitVector) -> Result<f64> {
        let f = frame_at_vertex(p1, p, p2)?;
        self.evaluate_frame(&f)
    }

    pub fn evaluate_frame(&self, f: &TriangleFrame) -> Result<f64> {
        match self {
            Estimator::Defect => Ok(GeodesicVLine::from_frame(f).curvature()),
            Estimator::Chord => Ok(chord_curvature_of(f)),
            Estimator::Circumcircle => spherical_circumcircle_curvature_of(f),
        }
    }
}

impl std::str::FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "defect" => Ok(Estimator::Defect),
            "chord" => Ok(Estimator::Chord),
            "circumcircle" => Ok(Estimator::Circumcircle),
            other => Err(Error::InvalidInput(format!("unknown estimator '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    /// Cumulative geodesic arc length from vertex 0.
    pub s: f64,
    pub kappa: f64,
}

/// Curvature samples along a polygon, ordered by arc length.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurvatureSeries {
    pub samples: Vec<CurvatureSample>,
    /// Vertices whose V-line was degenerate and therefore left out.
    pub skipped: Vec<usize>,
}

impl CurvatureSeries {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn has_warnings(&self) -> bool {
        !self.skipped.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|c| c.kappa.abs()).fold(0.0, f64::max)
    }
}

/// Evaluates `estimator` at every interior vertex (every vertex if closed).
pub fn polygon_curvature_series(polygon: &GeodesicPolygon, estimator: Estimator) -> Result<CurvatureSeries> {
    if polygon.len() < 3 {
        return Err(Error::InvalidInput("curvature series needs at least 3 vertices".into()));
    }
    let mut arc = Vec::with_capacity(polygon.len());
    let mut s = 0.0;
    for (i, v) in polygon.vertices().iter().enumerate() {
        if i > 0 {
            s += geodesic_distance(polygon.vertices()[i - 1], *v);
        }
        arc.push(s);
    }
    let mut series = CurvatureSeries::default();
    for i in polygon.interior_indices() {
        match polygon.frame(i).and_then(|f| estimator.evaluate_frame(&f)) {
            Ok(kappa) => series.samples.push(CurvatureSample { s: arc[i], kappa }),
            Err(_) => series.skipped.push(i),
        }
    }
    Ok(series)
}

/// A discrete normal attached to a polygon vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteNormal {
    pub point: UnitVector,
    /// Tangent at `point`; zero where the curvature vanishes.
    pub direction: Vec3,
}

/// Normals at interior vertices: perpendicular to the averaged edge
/// direction, pointing to the center of the local circumscribed small
/// circle, with length `scale · |κ|` (defect curvature).
pub fn discrete_normals(polygon: &GeodesicPolygon, scale: f64) -> Result<Vec<DiscreteNormal>> {
    if polygon.len() < 3 {
        return Err(Error::InvalidInput("discrete normals need at least 3 vertices".into()));
    }
    polygon
        .interior_indices()
        .map(|i| {
            let f = polygon.frame(i)?;
            let point = f.vertex;
            let kappa = GeodesicVLine::from_frame(&f).curvature();
            let center = circumcircle_center(f.prev, f.vertex, f.next).map_err(|e| e.at_vertex(i))?;
            let direction = match center {
                Some(c) if kappa != 0.0 => {
                    let tangent = (f.u.dir() + f.v.dir()).normalize();
                    let mut normal = point.as_vector().cross(&tangent);
                    if normal.dot(&c) < 0.0 {
                        normal = -normal;
                    }
                    normal * (scale * kappa.abs())
                }
                _ => Vec3::zeros(),
            };
            Ok(DiscreteNormal { point, direction })
        })
        .collect()
}

/// Reference curves with closed-form curvature, parametrized by arc length
/// and traversed clockwise about their center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticCurve {
    /// The equator.
    GreatCircle,
    /// Circle of spherical radius `radius` about the north pole.
    SmallCircle { radius: f64 },
    /// Planar circle of radius `radius` about the origin.
    PlanarCircle { radius: f64 },
}

impl AnalyticCurve {
    /// Geodesic curvature (planar curvature for `PlanarCircle`).
    pub fn curvature(&self) -> f64 {
        match *self {
            AnalyticCurve::GreatCircle => 0.0,
            AnalyticCurve::SmallCircle { radius } => 1.0 / radius.tan(),
            AnalyticCurve::PlanarCircle { radius } => 1.0 / radius,
        }
    }

    pub fn sphere_point(&self, s: f64) -> Option<UnitVector> {
        let v = match *self {
            AnalyticCurve::GreatCircle => Vec3::new(s.cos(), -s.sin(), 0.0),
            AnalyticCurve::SmallCircle { radius } => {
                let t = s / radius.sin();
                Vec3::new(radius.sin() * t.cos(), -radius.sin() * t.sin(), radius.cos())
            }
            AnalyticCurve::PlanarCircle { .. } => return None,
        };
        UnitVector::normalize(v).ok()
    }

    pub fn plane_point(&self, s: f64) -> Option<Point2> {
        match *self {
            AnalyticCurve::PlanarCircle { radius } => {
                let t = s / radius;
                Some(Vector2::new(radius * t.cos(), -radius * t.sin()))
            }
            _ => None,
        }
    }

    /// Spherical inscribed V-line at arc length `s` with half-spacing `h`.
    pub fn sphere_vline(&self, s: f64, h: f64) -> Option<(UnitVector, UnitVector, UnitVector)> {
        Some((self.sphere_point(s - h)?, self.sphere_point(s)?, self.sphere_point(s + h)?))
    }
}
