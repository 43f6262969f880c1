//! Polygon containers for the spherical and planar schemes.

use std::f64::consts::PI;

use nalgebra::{Rotation3, Vector2};

use crate::error::{Error, Result};
use crate::sphere::{geodesic_distance, UnitVector};
use crate::tolerance::{degeneracy_eps, ANTIPODAL_MARGIN};
use crate::triangle::{frame_at_vertex, TriangleFrame};

pub type Point2 = Vector2<f64>;

/// Ordered vertices of a geodesic polygon on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPolygon {
    vertices: Vec<UnitVector>,
    closed: bool,
}

fn check_counts(n: usize, closed: bool) -> Result<()> {
    let min = if closed { 3 } else { 2 };
    if n < min {
        return Err(Error::InvalidInput(format!(
            "{} polygon needs at least {min} vertices, got {n}",
            if closed { "closed" } else { "open" }
        )));
    }
    Ok(())
}

impl GeodesicPolygon {
    /// Consecutive vertices (including the wrap-around pair when closed)
    /// must be distinct and not antipodal.
    pub fn new(vertices: Vec<UnitVector>, closed: bool) -> Result<Self> {
        check_counts(vertices.len(), closed)?;
        let polygon = GeodesicPolygon { vertices, closed };
        for (i, l) in polygon.edge_lengths().into_iter().enumerate() {
            if l <= degeneracy_eps() {
                return Err(Error::InvalidInput(format!("edge {i} joins coincident vertices")));
            }
            if l > PI - ANTIPODAL_MARGIN {
                return Err(Error::InvalidInput(format!("edge {i} joins antipodal vertices")));
            }
        }
        Ok(polygon)
    }

    pub(crate) fn from_parts_unchecked(vertices: Vec<UnitVector>, closed: bool) -> Self {
        GeodesicPolygon { vertices, closed }
    }

    pub fn vertices(&self) -> &[UnitVector] {
        &self.vertices
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        if self.closed {
            self.len()
        } else {
            self.len() - 1
        }
    }

    /// Edge `i` joins vertex `i` and vertex `i + 1` (mod n when closed).
    pub fn edge(&self, i: usize) -> (UnitVector, UnitVector) {
        (self.vertices[i], self.vertices[(i + 1) % self.len()])
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        (0..self.edge_count())
            .map(|i| {
                let (a, b) = self.edge(i);
                geodesic_distance(a, b)
            })
            .collect()
    }

    /// Indices of vertices with two neighbours: all of them when closed.
    pub fn interior_indices(&self) -> std::ops::Range<usize> {
        if self.closed {
            0..self.len()
        } else {
            1..self.len().saturating_sub(1)
        }
    }

    /// Previous and next vertex of `i`, if it has both.
    pub fn neighbors(&self, i: usize) -> Option<(UnitVector, UnitVector)> {
        let n = self.len();
        if self.closed {
            Some((self.vertices[(i + n - 1) % n], self.vertices[(i + 1) % n]))
        } else if i >= 1 && i + 1 < n {
            Some((self.vertices[i - 1], self.vertices[i + 1]))
        } else {
            None
        }
    }

    /// Triangle frame at an interior vertex.
    pub fn frame(&self, i: usize) -> Result<TriangleFrame> {
        let (prev, next) =
            self.neighbors(i).ok_or_else(|| Error::InvalidInput(format!("vertex {i} is an endpoint")))?;
        frame_at_vertex(prev, self.vertices[i], next).map_err(|e| e.at_vertex(i))
    }

    /// Signed defects of all interior vertices, in index order.
    pub fn defects(&self) -> Result<Vec<f64>> {
        self.interior_indices().map(|i| Ok(self.frame(i)?.delta)).collect()
    }

    pub fn rotated(&self, rotation: &Rotation3<f64>) -> Self {
        let vertices = self
            .vertices
            .iter()
            .map(|v| UnitVector::normalize(rotation * v.as_vector()).expect("rotation keeps unit norm"))
            .collect();
        GeodesicPolygon { vertices, closed: self.closed }
    }
}

/// Ordered vertices of a polygon in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarPolygon {
    vertices: Vec<Point2>,
    closed: bool,
}

impl PlanarPolygon {
    pub fn new(vertices: Vec<Point2>, closed: bool) -> Result<Self> {
        check_counts(vertices.len(), closed)?;
        if vertices.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(Error::InvalidInput("non-finite planar coordinates".into()));
        }
        let polygon = PlanarPolygon { vertices, closed };
        for (i, l) in polygon.edge_lengths().into_iter().enumerate() {
            if l <= degeneracy_eps() * polygon.scale() {
                return Err(Error::InvalidInput(format!("edge {i} joins coincident vertices")));
            }
        }
        Ok(polygon)
    }

    pub(crate) fn from_parts_unchecked(vertices: Vec<Point2>, closed: bool) -> Self {
        PlanarPolygon { vertices, closed }
    }

    fn scale(&self) -> f64 {
        self.vertices.iter().map(|p| p.norm()).fold(1.0, f64::max)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        if self.closed {
            self.len()
        } else {
            self.len() - 1
        }
    }

    pub fn edge(&self, i: usize) -> (Point2, Point2) {
        (self.vertices[i], self.vertices[(i + 1) % self.len()])
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        (0..self.edge_count())
            .map(|i| {
                let (a, b) = self.edge(i);
                (b - a).norm()
            })
            .collect()
    }

    pub fn interior_indices(&self) -> std::ops::Range<usize> {
        if self.closed {
            0..self.len()
        } else {
            1..self.len().saturating_sub(1)
        }
    }

    pub fn neighbors(&self, i: usize) -> Option<(Point2, Point2)> {
        let n = self.len();
        if self.closed {
            Some((self.vertices[(i + n - 1) % n], self.vertices[(i + 1) % n]))
        } else if i >= 1 && i + 1 < n {
            Some((self.vertices[i - 1], self.vertices[i + 1]))
        } else {
            None
        }
    }

    /// Signed planar defect at an interior vertex.
    pub fn defect(&self, i: usize) -> Result<f64> {
        let (prev, next) =
            self.neighbors(i).ok_or_else(|| Error::InvalidInput(format!("vertex {i} is an endpoint")))?;
        planar_defect(prev, self.vertices[i], next).map_err(|e| e.at_vertex(i))
    }
}

#[inline]
pub(crate) fn cross2(a: &Point2, b: &Point2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Signed angle from `a` to `b`, counterclockwise positive, in `(-π, π]`.
#[inline]
pub(crate) fn planar_angle(a: &Point2, b: &Point2) -> f64 {
    let t = cross2(a, b).atan2(a.dot(b));
    if t == -PI {
        PI
    } else {
        t
    }
}

/// Planar defect at `q`: the signed angle from the outgoing edge `q q₂` to
/// the incoming edge `q₁ q`, the same orientation rule as on the sphere.
pub fn planar_defect(q1: Point2, q: Point2, q2: Point2) -> Result<f64> {
    let incoming = q - q1;
    let outgoing = q2 - q;
    let eps = degeneracy_eps() * q.norm().max(1.0);
    if incoming.norm() <= eps || outgoing.norm() <= eps {
        return Err(Error::Degenerate("coincident planar points".into()));
    }
    Ok(planar_angle(&outgoing, &incoming))
}

/// Interior angles of the Euclidean triangle with sides `a = |BC|`, `b = |CA|`,
/// `c = |AB|`, returned as the angles at `A`, `B`, `C`.
pub fn planar_angles_from_sides(a: f64, b: f64, c: f64) -> Result<[f64; 3]> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) || a >= b + c || b >= a + c || c >= a + b {
        return Err(Error::Degenerate(format!("sides ({a}, {b}, {c}) violate the triangle inequality")));
    }
    let angle =
        |opp: f64, s1: f64, s2: f64| ((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2)).clamp(-1.0, 1.0).acos();
    Ok([angle(a, b, c), angle(b, c, a), angle(c, a, b)])
}
