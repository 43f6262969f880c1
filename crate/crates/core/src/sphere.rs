//! Geometry on the unit sphere, oriented by its outward normal.
//!
//! Every point is a [`UnitVector`]; at a point `p` the outward normal is `p`
//! itself, so a positive signed angle in `T_p S²` is a counterclockwise turn
//! seen from outside the sphere.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::tolerance::{ANTIPODAL_MARGIN, AXIS_SLACK, TANGENT_SLACK, UNIT_NORM_SLACK};

pub type Vec3 = Vector3<f64>;

/// A point on the unit sphere.
#[derive(Clone, Copy, PartialEq)]
pub struct UnitVector(Vec3);

impl UnitVector {
    /// Builds a unit vector from coordinates within `1e-6` of unit norm,
    /// renormalizing them unless they are unit to rounding.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::try_from_vector(Vec3::new(x, y, z))
    }

    pub fn try_from_vector(v: Vec3) -> Result<Self> {
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite coordinates {v:?}")));
        }
        let n = v.norm();
        if (n - 1.0).abs() > UNIT_NORM_SLACK {
            return Err(Error::InvalidInput(format!("norm {n} is not within {UNIT_NORM_SLACK} of 1")));
        }
        // already-unit input is kept bit for bit
        if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(UnitVector(v));
        }
        Ok(UnitVector(v / n))
    }

    /// Projects any nonzero finite vector onto the sphere.
    pub fn normalize(v: Vec3) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::Degenerate(format!("cannot normalize {v:?}")));
        }
        Ok(UnitVector(v / n))
    }

    /// Longitude 0, latitude 0 maps to `(1, 0, 0)`; latitude 90 to `(0, 0, 1)`.
    pub fn from_lon_lat_degrees(lon: f64, lat: f64) -> Result<Self> {
        if !(lon.is_finite() && lat.is_finite()) {
            return Err(Error::InvalidInput("non-finite longitude/latitude".into()));
        }
        if !(-180.0..=180.0).contains(&lon) || !(-90.0..=90.0).contains(&lat) {
            return Err(Error::InvalidInput(format!("longitude {lon} / latitude {lat} out of range")));
        }
        let (lon, lat) = (lon.to_radians(), lat.to_radians());
        Self::normalize(Vec3::new(lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()))
    }

    pub const fn unit_x() -> Self {
        UnitVector(Vec3::new(1.0, 0.0, 0.0))
    }

    pub const fn unit_y() -> Self {
        UnitVector(Vec3::new(0.0, 1.0, 0.0))
    }

    pub const fn unit_z() -> Self {
        UnitVector(Vec3::new(0.0, 0.0, 1.0))
    }

    #[inline]
    pub fn as_vector(&self) -> &Vec3 {
        &self.0
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.0.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.0.y
    }

    #[inline]
    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn antipode(&self) -> Self {
        UnitVector(-self.0)
    }
}

impl fmt::Debug for UnitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitVector({}, {}, {})", self.0.x, self.0.y, self.0.z)
    }
}

impl From<UnitVector> for Vec3 {
    fn from(u: UnitVector) -> Vec3 {
        u.0
    }
}

/// A unit tangent direction attached to a point of the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    base: UnitVector,
    dir: Vec3,
}

impl TangentVector {
    /// Accepts `dir` when it is tangent at `base` up to `1e-10`; the small
    /// normal component is projected out and the result normalized.
    pub fn new(base: UnitVector, dir: Vec3) -> Result<Self> {
        let n = dir.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::InvalidInput("zero or non-finite tangent direction".into()));
        }
        let normal = base.0.dot(&dir);
        if normal.abs() > TANGENT_SLACK * n.max(1.0) {
            return Err(Error::InvalidInput(format!("direction is not tangent at base (<base, dir> = {normal:e})")));
        }
        let projected = dir - base.0 * normal;
        Ok(TangentVector { base, dir: projected / projected.norm() })
    }

    /// Unit direction at `from` of the minimal geodesic towards `to`.
    pub fn towards(from: UnitVector, to: UnitVector) -> Result<Self> {
        let v = log_map(from, to)?;
        if v.norm() == 0.0 {
            return Err(Error::Degenerate("coincident points have no connecting direction".into()));
        }
        Ok(TangentVector { base: from, dir: v / v.norm() })
    }

    pub fn base(&self) -> UnitVector {
        self.base
    }

    pub fn dir(&self) -> &Vec3 {
        &self.dir
    }

    pub fn reversed(&self) -> Self {
        TangentVector { base: self.base, dir: -self.dir }
    }

    /// Rotates the direction about the base point's normal.
    pub fn rotated(&self, angle: f64) -> Self {
        let dir = rodrigues(&self.dir, &self.base.0, angle);
        let dir = dir - self.base.0 * self.base.0.dot(&dir);
        TangentVector { base: self.base, dir: dir / dir.norm() }
    }
}

/// Great-circle distance in `[0, π]`.
pub fn geodesic_distance(p: UnitVector, q: UnitVector) -> f64 {
    p.0.cross(&q.0).norm().atan2(p.0.dot(&q.0))
}

#[inline]
fn rodrigues(v: &Vec3, k: &Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c))
}

/// Rotates `v` by `angle` about the unit `axis` (right-hand rule).
pub fn rotate_about_axis(v: &Vec3, axis: &Vec3, angle: f64) -> Result<Vec3> {
    let n = axis.norm();
    if !n.is_finite() || (n - 1.0).abs() > AXIS_SLACK {
        return Err(Error::InvalidInput(format!("rotation axis has norm {n}")));
    }
    Ok(rodrigues(v, axis, angle))
}

/// `exp_p(v) = cos|v| p + sin|v| v/|v|`.
pub fn exp_map(p: UnitVector, v: &Vec3) -> Result<UnitVector> {
    let theta = v.norm();
    if !theta.is_finite() {
        return Err(Error::InvalidInput("non-finite tangent vector".into()));
    }
    let normal = p.0.dot(v);
    if normal.abs() > TANGENT_SLACK * theta.max(1.0) {
        return Err(Error::InvalidInput(format!("vector is not tangent at p (<p, v> = {normal:e})")));
    }
    if theta == 0.0 {
        return Ok(p);
    }
    let (s, c) = theta.sin_cos();
    UnitVector::normalize(p.0 * c + v * (s / theta))
}

/// Inverse of [`exp_map`] on the open ball of radius `π`.
pub fn log_map(p: UnitVector, q: UnitVector) -> Result<Vec3> {
    let c = p.0.cross(&q.0);
    let s = c.norm();
    let d = s.atan2(p.0.dot(&q.0));
    if d > PI - ANTIPODAL_MARGIN {
        return Err(Error::Domain("log map undefined at the cut locus (antipodal points)".into()));
    }
    if s == 0.0 {
        return Ok(Vec3::zeros());
    }
    // c × p is tangent at p, points towards q and has norm s.
    Ok(c.cross(&p.0) * (d / s))
}

/// Angle in `(-π, π]` from `u` to `v`, positive counterclockwise about the base.
pub fn signed_angle(u: &TangentVector, v: &TangentVector) -> Result<f64> {
    if (u.base.0 - v.base.0).norm() > 1e-12 {
        return Err(Error::InvalidInput("tangent vectors have different base points".into()));
    }
    Ok(angle_about(&u.base.0, &u.dir, &v.dir))
}

/// Signed angle from `u` to `v` about `normal`, in `(-π, π]`.
#[inline]
pub(crate) fn angle_about(normal: &Vec3, u: &Vec3, v: &Vec3) -> f64 {
    let a = normal.dot(&u.cross(v)).atan2(u.dot(v));
    if a == -PI {
        PI
    } else {
        a
    }
}

/// Point at fraction `t` of the minimal geodesic from `p` to `q`.
pub fn geodesic_point(p: UnitVector, q: UnitVector, t: f64) -> Result<UnitVector> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!("interpolation parameter {t} outside [0, 1]")));
    }
    let d = geodesic_distance(p, q);
    if d > PI - ANTIPODAL_MARGIN {
        return Err(Error::Domain("geodesic between antipodal points is not unique".into()));
    }
    if t == 0.0 {
        return Ok(p);
    }
    if t == 1.0 {
        return Ok(q);
    }
    if d < 1e-9 {
        return UnitVector::normalize(p.0 * (1.0 - t) + q.0 * t);
    }
    let s = d.sin();
    UnitVector::normalize(p.0 * (((1.0 - t) * d).sin() / s) + q.0 * ((t * d).sin() / s))
}
