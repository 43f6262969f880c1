//! Spherical triangle quantities attached to a polygon vertex and the
//! closed-form relations between them.
//!
//! Sign conventions: the defect at `p₀` is the signed angle from the
//! outgoing tangent `U` to the incoming tangent `V`, so a turn to the right
//! (clockwise seen from outside) has positive defect. The base angles
//! `alpha`, `beta` and the signed area share that sign.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sphere::{geodesic_distance, signed_angle, TangentVector, UnitVector};
use crate::tolerance::{degeneracy_eps, ANTIPODAL_MARGIN};

/// The spherical triangle `p₋ p₀ p₊` seen from its middle vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleFrame {
    pub prev: UnitVector,
    pub vertex: UnitVector,
    pub next: UnitVector,
    /// `d(p₋, p₀)`
    pub l_prev: f64,
    /// `d(p₀, p₊)`
    pub l_next: f64,
    /// `d(p₋, p₊)`
    pub l_chord: f64,
    /// Outgoing unit tangent at `p₀`, towards `p₊`.
    pub u: TangentVector,
    /// Incoming unit tangent at `p₀`, the arriving direction of the geodesic from `p₋`.
    pub v: TangentVector,
    /// Signed angle at `p₋` from the chord to the edge `p₋ p₀`.
    pub alpha: f64,
    /// Signed angle at `p₊` from the arriving edge `p₀ p₊` to the arriving chord.
    pub beta: f64,
    /// Signed angular defect at `p₀`.
    pub delta: f64,
    /// Signed spherical area, computed from the vertex positions alone.
    pub area: f64,
}

fn check_length(name: &str, l: f64) -> Result<()> {
    if l <= degeneracy_eps() {
        return Err(Error::Degenerate(format!("{name} vanishes (coincident points)")));
    }
    if l > PI - ANTIPODAL_MARGIN {
        return Err(Error::Degenerate(format!("{name} joins antipodal points")));
    }
    Ok(())
}

/// Builds the frame of the triple `p₋, p₀, p₊`.
pub fn frame_at_vertex(prev: UnitVector, vertex: UnitVector, next: UnitVector) -> Result<TriangleFrame> {
    let l_prev = geodesic_distance(prev, vertex);
    let l_next = geodesic_distance(vertex, next);
    let l_chord = geodesic_distance(prev, next);
    check_length("edge p₋p₀", l_prev)?;
    check_length("edge p₀p₊", l_next)?;
    check_length("chord p₋p₊", l_chord)?;

    let u = TangentVector::towards(vertex, next)?;
    let v = TangentVector::towards(vertex, prev)?.reversed();
    let delta = signed_angle(&u, &v)?;

    let chord_out = TangentVector::towards(prev, next)?;
    let edge_out = TangentVector::towards(prev, vertex)?;
    let alpha = signed_angle(&chord_out, &edge_out)?;

    let edge_in = TangentVector::towards(next, vertex)?.reversed();
    let chord_in = TangentVector::towards(next, prev)?.reversed();
    let beta = signed_angle(&edge_in, &chord_in)?;

    // Van Oosterom–Strackee: tan(E/2) = det / (1 + a·b + b·c + c·a); a
    // counterclockwise triangle has det > 0 and negative defect.
    let (a, b, c) = (prev.as_vector(), vertex.as_vector(), next.as_vector());
    let det = a.dot(&b.cross(c));
    let denom = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    let area = -2.0 * det.atan2(denom);

    Ok(TriangleFrame { prev, vertex, next, l_prev, l_next, l_chord, u, v, alpha, beta, delta, area })
}

impl TriangleFrame {
    /// `area - (alpha + beta - delta)`; Girard's theorem makes this vanish.
    pub fn girard_residual(&self) -> f64 {
        self.area - (self.alpha + self.beta - self.delta)
    }

    /// Unsigned interior angles at `p₋`, `p₀`, `p₊`.
    pub fn interior_angles(&self) -> [f64; 3] {
        [self.alpha.abs(), PI - self.delta.abs(), self.beta.abs()]
    }
}

/// New edge lengths `(d(pᵢ, x), d(x, pᵢ₊₁))` of the triangle over a base of
/// length `l` with base angles `alpha` at `pᵢ` and `beta` at `pᵢ₊₁`.
///
/// Both angles must be nonzero and of the same sign; the result does not
/// depend on that sign.
pub fn asa_new_edges(l: f64, alpha: f64, beta: f64) -> Result<(f64, f64)> {
    if !(l > 0.0 && l < PI) {
        return Err(Error::Degenerate(format!("base length {l} outside (0, π)")));
    }
    if alpha == 0.0 || beta == 0.0 || alpha.signum() != beta.signum() {
        return Err(Error::Degenerate(format!("base angles ({alpha}, {beta}) must be nonzero and of equal sign")));
    }
    let (a, b) = (alpha.abs(), beta.abs());
    if a + b >= PI {
        return Err(Error::Degenerate(format!("base angles sum to {} ≥ π", a + b)));
    }
    let half = 0.5 * l;
    let (cot, tan) = (1.0 / half.tan(), half.tan());
    // atan2 keeps obtuse sides: numerators are positive, so results lie in (0, π).
    let e_even = (2.0 * b.sin()).atan2(cot * (a + b).sin() + tan * (a - b).sin());
    let e_odd = (2.0 * a.sin()).atan2(cot * (a + b).sin() + tan * (b - a).sin());
    if !(e_even.is_finite() && e_odd.is_finite()) || e_even <= 0.0 || e_odd <= 0.0 {
        return Err(Error::Degenerate("ASA formulas produced no valid triangle".into()));
    }
    Ok((e_even, e_odd))
}

/// Leg length of the isosceles triangle over a base `l` with base angles `alpha`.
pub fn bisector_edge(l: f64, alpha: f64) -> Result<f64> {
    if !(l > 0.0 && l < PI) {
        return Err(Error::Domain(format!("base length {l} outside (0, π)")));
    }
    if alpha.abs() >= PI / 2.0 {
        return Err(Error::Domain(format!("base angle {alpha} has |α| ≥ π/2")));
    }
    let half = 0.5 * l;
    Ok(half.sin().atan2(half.cos() * alpha.cos()))
}

/// Residual of Delambre's analogy `cos((α−β)/2)/sin(γ/2) = sin((a+b)/2)/sin(c/2)`
/// where `γ = π − δ` is the interior angle at the middle vertex.
pub fn darboux_residual(frame: &TriangleFrame) -> f64 {
    let gamma = PI - frame.delta;
    ((frame.alpha - frame.beta) / 2.0).cos() / (gamma / 2.0).sin()
        - ((frame.l_prev + frame.l_next) / 2.0).sin() / (frame.l_chord / 2.0).sin()
}

/// Area of the isosceles triangle with legs `e`, apex defect `delta` and base
/// `chord`, from `sin(A/2) = sin²(e/2) sin(δ) / cos(chord/2)`.
pub fn area_from_sides(e: f64, delta: f64, chord: f64) -> Result<f64> {
    let c = (chord / 2.0).cos();
    if chord >= PI || c <= 0.0 {
        return Err(Error::Domain("chord of length π has no area formula".into()));
    }
    let s = (e / 2.0).sin().powi(2) * delta.sin() / c;
    if s.abs() > 1.0 {
        return Err(Error::Domain(format!("inconsistent isosceles data (sin(A/2) = {s})")));
    }
    Ok(2.0 * s.asin())
}

/// Legendre's flattening: each interior angle minus a third of the
/// area, in the order `p₋, p₀, p₊`.
pub fn legendre_flatten(frame: &TriangleFrame) -> [f64; 3] {
    let third = frame.area.abs() / 3.0;
    frame.interior_angles().map(|a| a - third)
}

/// Base angle of the isosceles insertion triangle whose apex defect is
/// `delta_new`, over an edge of half-length `half_edge`:
/// `sin α = cos((π − δ)/2) / cos(half_edge)`.
pub fn right_triangle_alpha(delta_new: f64, half_edge: f64) -> Result<f64> {
    if !(half_edge > 0.0 && half_edge < PI / 2.0) {
        return Err(Error::Domain(format!("half edge {half_edge} outside (0, π/2)")));
    }
    // cos((π − δ)/2) written as sin(δ/2), exact at δ = 0
    let s = (delta_new / 2.0).sin() / half_edge.cos();
    if !(-1.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("defect {delta_new} too large for half edge {half_edge} (sin α = {s})")));
    }
    Ok(s.asin())
}
