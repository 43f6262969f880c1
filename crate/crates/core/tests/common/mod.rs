#![allow(dead_code)]

use std::f64::consts::PI;

use geosub::schemes::GeodesicPolygon;
use geosub::sphere::{exp_map, TangentVector, UnitVector, Vec3};
use nalgebra::{Rotation3, Unit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_unit(rng: &mut impl Rng) -> UnitVector {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return UnitVector::normalize(v).unwrap();
        }
    }
}

pub fn random_tangent(rng: &mut impl Rng, p: UnitVector) -> TangentVector {
    loop {
        let v = random_unit(rng);
        let t = v.as_vector() - p.as_vector() * p.as_vector().dot(v.as_vector());
        if t.norm() > 0.1 {
            return TangentVector::new(p, t).unwrap();
        }
    }
}

pub fn random_rotation(rng: &mut impl Rng) -> Rotation3<f64> {
    let axis = Unit::new_normalize(*random_unit(rng).as_vector());
    Rotation3::from_axis_angle(&axis, rng.gen_range(-PI..PI))
}

/// Point at distance `d` from `p` in direction `t` turned by `angle`.
pub fn offset(p: UnitVector, t: &TangentVector, angle: f64, d: f64) -> UnitVector {
    exp_map(p, &(t.rotated(angle).dir() * d)).unwrap()
}

/// Closed polygon winding once around a random centre, all defects at most
/// `max_defect` in magnitude.
pub fn random_closed_polygon(rng: &mut impl Rng, n: usize, max_defect: f64) -> GeodesicPolygon {
    loop {
        let c = random_unit(rng);
        let t = random_tangent(rng, c);
        let radius = rng.gen_range(0.6..1.45);
        let step = 2.0 * PI / n as f64;
        let pts: Vec<UnitVector> = (0..n)
            .map(|k| {
                let theta = step * (k as f64 + rng.gen_range(-0.3..0.3));
                offset(c, &t, theta, radius * rng.gen_range(0.88..1.12))
            })
            .collect();
        let Ok(p) = GeodesicPolygon::new(pts, true) else { continue };
        let Ok(d) = p.defects() else { continue };
        if d.iter().all(|x| x.abs() <= max_defect) {
            return p;
        }
    }
}

pub fn max_vertex_gap(a: &GeodesicPolygon, b: &GeodesicPolygon) -> f64 {
    assert_eq!(a.len(), b.len());
    a.vertices().iter().zip(b.vertices()).map(|(x, y)| (x.as_vector() - y.as_vector()).norm()).fold(0.0, f64::max)
}

/// Largest distance between a vertex of a level and its copy in the next one.
pub fn interpolation_gap(levels: &[GeodesicPolygon]) -> f64 {
    levels
        .windows(2)
        .flat_map(|w| {
            w[0].vertices()
                .iter()
                .enumerate()
                .map(move |(i, v)| (v.as_vector() - w[1].vertices()[2 * i].as_vector()).norm())
        })
        .fold(0.0, f64::max)
}
