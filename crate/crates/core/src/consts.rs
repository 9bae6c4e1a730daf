//! Dimensional constants and the centralized tolerance set.

use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// Slack on half-space constraints for membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-12;
/// Slack used when checking that one body is contained in another.
pub const NESTING_TOL: f64 = 1e-9;
/// Relative target for deterministic volume quadrature.
pub const VOLUME_QUAD_TOL: f64 = 1e-8;
/// Tolerance on unit normals.
pub const UNIT_TOL: f64 = 1e-12;

/// Lebesgue measure of the unit ball of R^k (omega_0 = 1, omega_1 = 2, omega_2 = pi).
pub fn unit_ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => PI.powf(k as f64 / 2.0) / gamma(k as f64 / 2.0 + 1.0),
    }
}

/// Measure of the unit sphere S^{n-1}, equal to n * omega_n.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}
