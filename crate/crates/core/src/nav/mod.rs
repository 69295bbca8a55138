//! Trajectory geometry and time accounting.
//!
//! Dubins shortest paths between posed waypoints, serpentine lawnmower
//! coverage plans, and the straight reacquisition legs of the
//! object-identification (OID) star pattern. All functions are pure.

mod dubins;
mod lawnmower;
mod oid;

pub use dubins::{dubins_shortest, DubinsPath, DubinsSegment, SegmentKind};
pub use lawnmower::{plan_lawnmower, LawnmowerPlan, TrackSegment};
pub use oid::{oid_leg_angles, plan_oid_leg, OidLeg};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NavError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("coverage infeasible: spacing {spacing} m exceeds twice the sensor range {range} m")]
    InfeasibleCoverage { spacing: f64, range: f64 },
}

pub type Result<T> = std::result::Result<T, NavError>;

/// Normalizes an angle to the principal branch (-pi, pi].
pub fn normalize_angle(theta: f64) -> f64 {
    let wrapped = theta.sin().atan2(theta.cos());
    // atan2 returns [-pi, pi]; fold the open end onto +pi.
    if wrapped == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        wrapped
    }
}

/// A planar pose: position in meters, heading in radians in (-pi, pi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose2D {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl Pose2D {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self {
            x,
            y,
            heading: normalize_angle(heading),
        }
    }

    pub fn position(&self) -> [f64; 2] {
        [self.x, self.y]
    }

    pub fn distance_to(&self, other: &Pose2D) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }

    /// Pose after moving `dist` meters straight ahead.
    pub fn advance(&self, dist: f64) -> Pose2D {
        Pose2D::new(
            self.x + dist * self.heading.cos(),
            self.y + dist * self.heading.sin(),
            self.heading,
        )
    }
}

/// Anything with a traversal length, for time accounting.
pub trait PathLength {
    fn length(&self) -> f64;
}

impl PathLength for DubinsPath {
    fn length(&self) -> f64 {
        self.total_length
    }
}

impl PathLength for TrackSegment {
    fn length(&self) -> f64 {
        TrackSegment::length(self)
    }
}

impl PathLength for OidLeg {
    fn length(&self) -> f64 {
        self.pass_length
    }
}

impl PathLength for f64 {
    fn length(&self) -> f64 {
        *self
    }
}

/// Total traversal time in hours for a sequence of path pieces.
pub fn transit_time<'a, I, P>(paths: I, speed_mps: f64) -> f64
where
    I: IntoIterator<Item = &'a P>,
    P: PathLength + 'a,
{
    assert!(speed_mps > 0.0, "speed must be positive");
    let total: f64 = paths.into_iter().map(|p| p.length()).sum();
    total / speed_mps / 3600.0
}
