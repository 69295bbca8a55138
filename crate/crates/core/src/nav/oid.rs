//! Object-identification (OID) reacquisition legs.
//!
//! A target is imaged by a star of `K` straight passes. Each leg sits at a
//! viewing angle `theta` on the grid `{2*pi*i/K}` measured from a per-target
//! reference bearing (the direction of first contact). The leg midpoint lies
//! at bearing `ref_bearing + theta` from the target at standoff `R`, and the
//! leg heading is that bearing plus 90 degrees, so the target sits exactly
//! abeam (port side) at closest approach.

use super::{normalize_angle, NavError, Pose2D, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// One straight reacquisition pass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OidLeg {
    /// Viewing angle on the K-grid, radians relative to the reference.
    pub theta: f64,
    pub entry: Pose2D,
    pub exit: Pose2D,
    pub pass_length: f64,
    /// Closest-approach standoff from the target, meters.
    pub standoff: f64,
}

impl OidLeg {
    pub fn midpoint(&self) -> [f64; 2] {
        [
            (self.entry.x + self.exit.x) / 2.0,
            (self.entry.y + self.exit.y) / 2.0,
        ]
    }

    /// The same line traversed in the opposite direction. The view aspect is
    /// unchanged; the target appears on starboard instead of port.
    pub fn reversed(&self) -> OidLeg {
        OidLeg {
            theta: self.theta,
            entry: Pose2D::new(self.exit.x, self.exit.y, self.exit.heading + std::f64::consts::PI),
            exit: Pose2D::new(self.entry.x, self.entry.y, self.entry.heading + std::f64::consts::PI),
            pass_length: self.pass_length,
            standoff: self.standoff,
        }
    }

    /// Perpendicular distance from the leg line to a point.
    pub fn distance_to(&self, p: [f64; 2]) -> f64 {
        let h = self.entry.heading;
        let (s, c) = h.sin_cos();
        let dx = p[0] - self.entry.x;
        let dy = p[1] - self.entry.y;
        (-dx * s + dy * c).abs()
    }
}

/// The K grid angles `{2*pi*i/K}`.
pub fn oid_leg_angles(k: usize) -> Vec<f64> {
    (0..k).map(|i| TAU * i as f64 / k as f64).collect()
}

/// Plans the straight OID leg at viewing angle `theta` around `target`.
///
/// `ref_bearing` is the world bearing of the `theta = 0` leg midpoint (the
/// first-contact direction for the target); `theta` must lie on the K-grid.
pub fn plan_oid_leg(
    target: [f64; 2],
    ref_bearing: f64,
    theta: f64,
    pass_length: f64,
    standoff: f64,
    k: usize,
) -> Result<OidLeg> {
    if !(pass_length > 0.0 && standoff > 0.0 && k >= 1) {
        return Err(NavError::InvalidParameter(format!(
            "pass length {pass_length}, standoff {standoff}, k {k} must be positive"
        )));
    }
    let on_grid = (0..k).any(|i| {
        let grid = TAU * i as f64 / k as f64;
        normalize_angle(theta - grid).abs() < 1e-9
    });
    if !on_grid {
        return Err(NavError::InvalidParameter(format!(
            "theta {theta} is not on the {k}-angle grid"
        )));
    }
    let bearing = ref_bearing + theta;
    let (sb, cb) = bearing.sin_cos();
    let mid = [target[0] + standoff * cb, target[1] + standoff * sb];
    let heading = normalize_angle(bearing + std::f64::consts::FRAC_PI_2);
    let (sh, ch) = heading.sin_cos();
    let half = pass_length / 2.0;
    let entry = Pose2D::new(mid[0] - half * ch, mid[1] - half * sh, heading);
    let exit = Pose2D::new(mid[0] + half * ch, mid[1] + half * sh, heading);
    Ok(OidLeg {
        theta: normalize_angle(theta),
        entry,
        exit,
        pass_length,
        standoff,
    })
}
