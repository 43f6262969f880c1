//! Numerical thresholds shared across the crate.

use std::sync::OnceLock;

/// Coordinates within this distance of unit norm are renormalized on
/// construction; anything further away is rejected.
pub const UNIT_NORM_SLACK: f64 = 1e-6;

/// Pairs closer than `π - ANTIPODAL_MARGIN` to antipodal are rejected by
/// `log_map` and `geodesic_point`.
pub const ANTIPODAL_MARGIN: f64 = 1e-8;

/// Maximum `|<base, v>|` (relative to `max(1, |v|)`) accepted for a tangent vector.
pub const TANGENT_SLACK: f64 = 1e-10;

/// Maximum deviation from unit length accepted for rotation axes.
pub const AXIS_SLACK: f64 = 1e-9;

const DEFAULT_DEGENERACY_EPS: f64 = 1e-12;

/// Distance below which two points count as coincident.
///
/// Read once from `GEOSUB_EPS` when set to a positive finite number,
/// otherwise `1e-12`.
pub fn degeneracy_eps() -> f64 {
    static EPS: OnceLock<f64> = OnceLock::new();
    *EPS.get_or_init(|| {
        std::env::var("GEOSUB_EPS")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
            .unwrap_or(DEFAULT_DEGENERACY_EPS)
    })
}
