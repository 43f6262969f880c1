//! Convergence and continuity diagnostics for subdivision runs.

use std::f64::consts::PI;

use nalgebra::Rotation2;
use serde::Serialize;

use crate::curvature::PlanarVLine;
use crate::error::{Error, Result};
use crate::polygon::{planar_defect, GeodesicPolygon, PlanarPolygon, Point2};
use crate::schemes::{angle4_new_angles, sbigs_insert};
use crate::sphere::{exp_map, geodesic_point, TangentVector, UnitVector, Vec3};
use crate::tolerance::degeneracy_eps;
use crate::triangle::{bisector_edge, frame_at_vertex, legendre_flatten, TriangleFrame};

/// Sup-norm quantities of one subdivision level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationMetrics {
    pub sup_defect: f64,
    pub sup_edge: f64,
    pub sup_area: f64,
    /// Largest jump of the defect curvature `2δ/(e₋ + e₊)` between
    /// neighbouring vertices.
    pub max_curv_diff: f64,
}

pub fn iteration_metrics(polygon: &GeodesicPolygon) -> Result<IterationMetrics> {
    let frames = polygon.interior_indices().map(|i| polygon.frame(i)).collect::<Result<Vec<_>>>()?;
    let sup = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0, f64::max);
    let kappa: Vec<f64> = frames.iter().map(|f| 2.0 * f.delta / (f.l_prev + f.l_next)).collect();
    let mut diffs: Vec<f64> = kappa.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    if polygon.closed() && kappa.len() > 1 {
        diffs.push((kappa[0] - kappa[kappa.len() - 1]).abs());
    }
    Ok(IterationMetrics {
        sup_defect: sup(&mut frames.iter().map(|f| f.delta.abs())),
        sup_edge: sup(&mut polygon.edge_lengths().into_iter()),
        sup_area: sup(&mut frames.iter().map(|f| f.area.abs())),
        max_curv_diff: sup(&mut diffs.into_iter()),
    })
}

fn ratios(values: &[f64], step: usize) -> Vec<Option<f64>> {
    values.iter().zip(values.iter().skip(step)).map(|(a, b)| (*a > 0.0).then(|| b / a)).collect()
}

/// Metrics of every level of a run with their decay ratios.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub metrics: Vec<IterationMetrics>,
    /// `δ^{j+1}/δ^j`, `None` where `δ^j = 0`.
    pub defect_ratios: Vec<Option<f64>>,
    /// `δ^{j+2}/δ^j`.
    pub two_step_defect_ratios: Vec<Option<f64>>,
    /// `∇κ^{j+1}/∇κ^j`.
    pub curvature_ratios: Vec<Option<f64>>,
}

impl AnalysisReport {
    pub fn from_levels(levels: &[GeodesicPolygon]) -> Result<Self> {
        let metrics = levels
            .iter()
            .enumerate()
            .map(|(j, p)| iteration_metrics(p).map_err(|e| e.at_iteration(j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_metrics(metrics))
    }

    pub fn from_metrics(metrics: Vec<IterationMetrics>) -> Self {
        let defects: Vec<f64> = metrics.iter().map(|m| m.sup_defect).collect();
        let curv: Vec<f64> = metrics.iter().map(|m| m.max_curv_diff).collect();
        AnalysisReport {
            defect_ratios: ratios(&defects, 1),
            two_step_defect_ratios: ratios(&defects, 2),
            curvature_ratios: ratios(&curv, 1),
            metrics,
        }
    }

    pub fn iterations(&self) -> usize {
        self.metrics.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SummabilityVerdict {
    /// Tail ratios stay below `1 − ε`: numeric evidence only.
    GeometricDecay,
    ExactlyGeodesic,
    Inconclusive,
}

impl SummabilityVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            SummabilityVerdict::GeometricDecay => "geometric-decay",
            SummabilityVerdict::ExactlyGeodesic => "exactly-geodesic",
            SummabilityVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummabilityDiagnostic {
    pub ratios: Vec<Option<f64>>,
    pub verdict: SummabilityVerdict,
}

/// Judges the sup-defect sequence by its tail, the second half of the
/// one-step ratios.
pub fn summability_diagnostic(metrics: &[IterationMetrics], epsilon: f64) -> Result<SummabilityDiagnostic> {
    if metrics.len() < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 levels, got {}", metrics.len())));
    }
    let defects: Vec<f64> = metrics.iter().map(|m| m.sup_defect).collect();
    let ratios = ratios(&defects, 1);
    let verdict = if defects.iter().all(|d| *d <= 1e-14) {
        SummabilityVerdict::ExactlyGeodesic
    } else {
        let tail = &ratios[ratios.len() / 2..];
        if tail.iter().all(|r| matches!(r, Some(r) if *r < 1.0 - epsilon)) {
            SummabilityVerdict::GeometricDecay
        } else {
            SummabilityVerdict::Inconclusive
        }
    };
    Ok(SummabilityDiagnostic { ratios, verdict })
}

fn pow2(k: usize) -> f64 {
    2f64.powi(k as i32)
}

/// Defects `(δ₋₁^j, δ₀^j, δ₁^j)` of the planar four-point scheme around a
/// vertex, solved in closed form from `(A/8)^j` with
/// `A = [[2, 2, 0], [−1, 6, −1], [0, 2, 2]]`.
pub fn closed_form_defects(delta_m1_0: f64, delta_0_0: f64, delta_1_0: f64, j: usize) -> (f64, f64, f64) {
    let jf = j as f64;
    let a = -jf / pow2(j + 2) + 1.0 / pow2(j + 1);
    let b = 1.0 / pow2(2 * j + 1);
    let side = jf / pow2(j + 1);
    let m1 = (a + b) * delta_m1_0 + side * delta_0_0 + (a - b) * delta_1_0;
    let p1 = (a - b) * delta_m1_0 + side * delta_0_0 + (a + b) * delta_1_0;
    let c = -jf / pow2(j + 2) * (delta_m1_0 + delta_1_0) + (jf + 2.0) / pow2(j + 1) * delta_0_0;
    (m1, c, p1)
}

/// Closed form `(δ₀^j, δ₁^j)` under `δ₋₁⁰ = δ₁⁰`.
pub fn closed_form_defects_symmetric(delta_0_0: f64, delta_1_0: f64, j: usize) -> (f64, f64) {
    let jf = j as f64;
    let s = pow2(j + 1);
    ((2.0 + jf) / s * delta_0_0 - jf / s * delta_1_0, jf / s * delta_0_0 + (2.0 - jf) / s * delta_1_0)
}

/// Base angle `α₁^j` inserted next to the centre vertex under `δ₋₁⁰ = δ₁⁰`.
pub fn closed_form_alpha(delta_0_0: f64, delta_1_0: f64, j: usize) -> f64 {
    (j as f64 * (delta_0_0 - delta_1_0) + 2.0 * delta_1_0) / pow2(j + 2)
}

/// `Π_{k=1..j} 1/cos α₁^k`, the edge growth factor at the centre.
pub fn edge_growth_product(delta_0_0: f64, delta_1_0: f64, j: usize) -> f64 {
    (1..=j).map(|k| 1.0 / closed_form_alpha(delta_0_0, delta_1_0, k).cos()).product()
}

/// Planar centre curvature `δ₀^j / e₀^j` predicted by the closed forms.
pub fn predicted_center_curvature(delta_0_0: f64, delta_1_0: f64, edge: f64, j: usize) -> f64 {
    (j as f64 * (delta_0_0 - delta_1_0) + 2.0 * delta_0_0) / (2.0 * edge * edge_growth_product(delta_0_0, delta_1_0, j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Surface {
    Planar,
    Spherical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DivergenceVerdict {
    #[serde(rename = "divergent (+inf)")]
    DivergentPositive,
    #[serde(rename = "divergent (-inf)")]
    DivergentNegative,
    #[serde(rename = "bounded")]
    Bounded,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl DivergenceVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            DivergenceVerdict::DivergentPositive => "divergent (+inf)",
            DivergenceVerdict::DivergentNegative => "divergent (-inf)",
            DivergenceVerdict::Bounded => "bounded",
            DivergenceVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Finite-iteration stand-in for an unbounded limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceCriteria {
    /// Final `|κ₀|` must exceed `growth_factor · |κ₀⁰|`.
    pub growth_factor: f64,
    /// Number of trailing steps over which `|κ₀|` must strictly increase.
    pub consecutive_increases: usize,
}

impl Default for DivergenceCriteria {
    fn default() -> Self {
        DivergenceCriteria { growth_factor: 10.0, consecutive_increases: 5 }
    }
}

impl DivergenceCriteria {
    pub fn judge(&self, kappa: &[f64]) -> DivergenceVerdict {
        let (Some(first), Some(last)) = (kappa.first(), kappa.last()) else {
            return DivergenceVerdict::Inconclusive;
        };
        let scale = first.abs().max(f64::MIN_POSITIVE);
        let n = self.consecutive_increases;
        let increasing = kappa.len() > n && kappa[kappa.len() - n - 1..].windows(2).all(|w| w[1].abs() > w[0].abs());
        if increasing && last.abs() > self.growth_factor * scale {
            if *last > 0.0 {
                DivergenceVerdict::DivergentPositive
            } else {
                DivergenceVerdict::DivergentNegative
            }
        } else if kappa.iter().all(|k| k.abs() <= self.growth_factor * scale) {
            DivergenceVerdict::Bounded
        } else {
            DivergenceVerdict::Inconclusive
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub surface: Surface,
    /// `κ₀^j = 2δ₀^j/(e₋₁^j + e₀^j)` at the centre vertex, `j = 0..=iterations`.
    pub center_curvature: Vec<f64>,
    pub center_defect: Vec<f64>,
    pub center_edge: Vec<f64>,
    /// Signed area of the centre triangle; zero in the plane.
    pub center_area: Vec<f64>,
    /// Planar closed-form prediction of `κ₀^j`.
    pub predicted_curvature: Vec<f64>,
    pub verdict: DivergenceVerdict,
}

/// Five consecutive vertices `w₀..w₄` around the centre `w₂`.
type Window<T> = [T; 5];

fn check_divergence_input(delta_0_0: f64, delta_1_0: f64, edge: f64) -> Result<()> {
    if !(delta_0_0.abs() < PI / 2.0 && delta_1_0.abs() < PI / 2.0) {
        return Err(Error::Domain(format!("defects ({delta_0_0}, {delta_1_0}) need |δ| < π/2")));
    }
    if !(edge > 0.0 && edge < PI / 4.0) {
        return Err(Error::Domain(format!("edge {edge} outside (0, π/4)")));
    }
    Ok(())
}

/// Symmetric planar window with equal edges and defects `(δ₁, δ₀, δ₁)`.
pub fn planar_divergence_window(delta_0_0: f64, delta_1_0: f64, edge: f64) -> Result<Window<Point2>> {
    check_divergence_input(delta_0_0, delta_1_0, edge)?;
    let p = Point2::zeros();
    // incoming direction rotated by δ₀/2, outgoing by −δ₀/2 about +x
    let v0 = Rotation2::new(delta_0_0 / 2.0) * Point2::x();
    let u0 = Rotation2::new(-delta_0_0 / 2.0) * Point2::x();
    let p1 = p + edge * u0;
    let pm1 = p - edge * v0;
    let p2 = p1 + edge * (Rotation2::new(-delta_1_0) * u0);
    let pm2 = pm1 - edge * (Rotation2::new(delta_1_0) * v0);
    Ok([pm2, pm1, p, p1, p2])
}

/// Spherical counterpart of [`planar_divergence_window`], centred at the
/// north pole and laid out with the exponential map.
pub fn spherical_divergence_window(delta_0_0: f64, delta_1_0: f64, edge: f64) -> Result<Window<UnitVector>> {
    check_divergence_input(delta_0_0, delta_1_0, edge)?;
    let p = UnitVector::unit_z();
    let along = TangentVector::new(p, Vec3::x())?;
    let v0 = along.rotated(delta_0_0 / 2.0);
    let u0 = along.rotated(-delta_0_0 / 2.0);
    let p1 = exp_map(p, &(u0.dir() * edge))?;
    let pm1 = exp_map(p, &(v0.dir() * -edge))?;
    let v1 = TangentVector::towards(p1, p)?.reversed();
    let p2 = exp_map(p1, &(v1.rotated(-delta_1_0).dir() * edge))?;
    let um1 = TangentVector::towards(pm1, p)?;
    let pm2 = exp_map(pm1, &(um1.rotated(delta_1_0).dir() * -edge))?;
    Ok([pm2, pm1, p, p1, p2])
}

/// Refines the two centre edges of a window; the result is again a window
/// around the same centre, as in the full scheme applied to a longer polygon.
fn planar_window_step(w: &Window<Point2>) -> Result<Window<Point2>> {
    let d: Vec<f64> = (1..4).map(|i| planar_defect(w[i - 1], w[i], w[i + 1])).collect::<Result<_>>()?;
    let insert = |a: Point2, b: Point2, alpha: f64| a + Rotation2::new(alpha) * (b - a) / (2.0 * alpha.cos());
    Ok([
        w[1],
        insert(w[1], w[2], angle4_new_angles(d[0], d[1])),
        w[2],
        insert(w[2], w[3], angle4_new_angles(d[1], d[2])),
        w[3],
    ])
}

/// Spherical counterpart of [`planar_window_step`].
pub fn spherical_window_step(w: &Window<UnitVector>) -> Result<Window<UnitVector>> {
    let d: Vec<f64> = (1..4).map(|i| Ok(frame_at_vertex(w[i - 1], w[i], w[i + 1])?.delta)).collect::<Result<_>>()?;
    let insert = |a: UnitVector, b: UnitVector, alpha: f64| -> Result<UnitVector> {
        if alpha == 0.0 {
            return geodesic_point(a, b, 0.5);
        }
        sbigs_insert(a, b, &TangentVector::towards(a, b)?, alpha, alpha)
    };
    Ok([
        w[1],
        insert(w[1], w[2], angle4_new_angles(d[0], d[1]))?,
        w[2],
        insert(w[2], w[3], angle4_new_angles(d[1], d[2]))?,
        w[3],
    ])
}

/// Intrinsic description of the three centre vertices of a spherical window:
/// their defects and the two edges at the centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterState {
    pub delta_m1: f64,
    pub delta_0: f64,
    pub delta_1: f64,
    pub edge_m: f64,
    pub edge_p: f64,
}

/// Signed area of the spherical triangle with sides `a`, `b` enclosing `angle`.
fn sas_area(a: f64, b: f64, angle: f64) -> f64 {
    let t = (a / 2.0).tan() * (b / 2.0).tan();
    2.0 * (t * angle.sin()).atan2(1.0 + t * angle.cos())
}

impl CenterState {
    pub fn measure(w: &Window<UnitVector>) -> Result<Self> {
        let f = frame_at_vertex(w[1], w[2], w[3])?;
        Ok(CenterState {
            delta_m1: frame_at_vertex(w[0], w[1], w[2])?.delta,
            delta_0: f.delta,
            delta_1: frame_at_vertex(w[2], w[3], w[4])?.delta,
            edge_m: f.l_prev,
            edge_p: f.l_next,
        })
    }

    /// One four-point step in triangle quantities alone. The centre loses
    /// both base angles, and an inserted vertex over a base `l` with base
    /// angles `α` gets the defect `2α − A` by Girard.
    pub fn step(&self) -> Result<Self> {
        let a_m = angle4_new_angles(self.delta_m1, self.delta_0);
        let a_p = angle4_new_angles(self.delta_0, self.delta_1);
        let e_m = bisector_edge(self.edge_m, a_m)?;
        let e_p = bisector_edge(self.edge_p, a_p)?;
        Ok(CenterState {
            delta_m1: 2.0 * a_m - sas_area(self.edge_m, e_m, a_m),
            delta_0: self.delta_0 - a_m - a_p,
            delta_1: 2.0 * a_p - sas_area(self.edge_p, e_p, a_p),
            edge_m: e_m,
            edge_p: e_p,
        })
    }

    pub fn curvature(&self) -> f64 {
        2.0 * self.delta_0 / (self.edge_m + self.edge_p)
    }

    /// Signed area of the centre triangle.
    pub fn area(&self) -> f64 {
        sas_area(self.edge_m, self.edge_p, PI - self.delta_0.abs()).copysign(self.delta_0)
    }
}

/// Below this centre edge, coordinates no longer resolve the defects and the
/// spherical experiment continues intrinsically.
const GEOMETRIC_EDGE_FLOOR: f64 = 1e-4;

/// Tracks the curvature at the centre of a symmetric five-point polygon
/// under the angle-based four-point scheme.
pub fn divergence_experiment(
    delta_0_0: f64,
    delta_1_0: f64,
    edge: f64,
    iterations: usize,
    surface: Surface,
    criteria: &DivergenceCriteria,
) -> Result<DivergenceReport> {
    // (defect, edge before, edge after, area) at the centre per level
    let mut samples = Vec::with_capacity(iterations + 1);
    match surface {
        Surface::Planar => {
            // each step halves the window; doubling it back is exact
            let mut w = planar_divergence_window(delta_0_0, delta_1_0, edge)?;
            let mut scale = 1.0;
            for j in 0..=iterations {
                let delta = planar_defect(w[1], w[2], w[3])?;
                samples.push((delta, (w[2] - w[1]).norm() * scale, (w[3] - w[2]).norm() * scale, 0.0));
                if j < iterations {
                    w = planar_window_step(&w).map_err(|e| e.at_iteration(j + 1))?.map(|q| 2.0 * q);
                    scale /= 2.0;
                }
            }
        }
        Surface::Spherical => {
            let mut w = Some(spherical_divergence_window(delta_0_0, delta_1_0, edge)?);
            let mut state = CenterState::measure(w.as_ref().expect("window"))?;
            for j in 0..=iterations {
                samples.push((state.delta_0, state.edge_m, state.edge_p, state.area()));
                if j == iterations {
                    break;
                }
                let next = match w {
                    Some(ref win) if state.edge_m.min(state.edge_p) > GEOMETRIC_EDGE_FLOOR => {
                        let refined = spherical_window_step(win).map_err(|e| e.at_iteration(j + 1))?;
                        let s = CenterState::measure(&refined).map_err(|e| e.at_iteration(j + 1))?;
                        w = Some(refined);
                        s
                    }
                    _ => {
                        w = None;
                        state.step().map_err(|e| e.at_iteration(j + 1))?
                    }
                };
                state = next;
            }
        }
    }
    let center_curvature: Vec<f64> = samples.iter().map(|(d, a, b, _)| 2.0 * d / (a + b)).collect();
    let verdict = criteria.judge(&center_curvature);
    Ok(DivergenceReport {
        surface,
        center_defect: samples.iter().map(|s| s.0).collect(),
        center_edge: samples.iter().map(|s| s.1).collect(),
        center_area: samples.iter().map(|s| s.3).collect(),
        predicted_curvature: (0..=iterations)
            .map(|j| predicted_center_curvature(delta_0_0, delta_1_0, edge, j))
            .collect(),
        center_curvature,
        verdict,
    })
}

/// Largest deviation between a spherical triangle's angles reduced by a
/// third of its area and the angles of the plane triangle with the same
/// side lengths.
pub fn legendre_residual(frame: &TriangleFrame) -> f64 {
    let flat = legendre_flatten(frame);
    let exact = euclidean_angles(frame.l_prev, frame.l_next, frame.l_chord);
    flat.iter().zip(exact.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Angles at the chord start, the vertex and the chord end of the plane
/// triangle with sides `l_prev`, `l_next` and chord, by the half-angle
/// formula; collinear input yields `(0, π, 0)`.
fn euclidean_angles(l_prev: f64, l_next: f64, chord: f64) -> [f64; 3] {
    let s = (l_prev + l_next + chord) / 2.0;
    let excess = |x: f64| (s - x).max(0.0);
    let angle = |opp: f64, s1: f64, s2: f64| 2.0 * (excess(s1) * excess(s2)).sqrt().atan2((s * excess(opp)).sqrt());
    [angle(l_next, l_prev, chord), angle(chord, l_prev, l_next), angle(l_prev, l_next, chord)]
}

/// Max over interior vertices of `|δ̃ − (δ + A/3)|`, where `δ̃` is the
/// defect of the plane V-line with the same three side lengths.
pub fn legendre_transfer_check(polygon: &GeodesicPolygon) -> Result<f64> {
    polygon.interior_indices().try_fold(0.0, |acc: f64, i| {
        let f = polygon.frame(i)?;
        let [_, at_vertex, _] = euclidean_angles(f.l_prev, f.l_next, f.l_chord);
        // straight vertices have a degenerate plane triangle
        let flat_defect = if f.delta.abs() <= degeneracy_eps() { 0.0 } else { (PI - at_vertex).copysign(f.delta) };
        Ok(acc.max((flat_defect - (f.delta + f.area / 3.0)).abs()))
    })
}

/// Measured `(δ₋₁, δ₀, δ₁)` around vertex `c` of a planar polygon.
pub fn planar_defect_triple(polygon: &PlanarPolygon, c: usize) -> Result<(f64, f64, f64)> {
    Ok((polygon.defect(c - 1)?, polygon.defect(c)?, polygon.defect(c + 1)?))
}

/// Base angle at vertex `c` of the triangle inserted towards `c + 2`.
pub fn planar_base_angle(polygon: &PlanarPolygon, c: usize) -> Result<f64> {
    let v = polygon.vertices();
    Ok(PlanarVLine::new(v[c], v[c + 1], v[c + 2])?.base_angles().0)
}
