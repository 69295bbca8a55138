//! Serpentine lawnmower coverage plans over a rectangular region.

use super::{NavError, Pose2D, Result};
use serde::{Deserialize, Serialize};

/// One straight survey track with a fixed heading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackSegment {
    pub start: [f64; 2],
    pub end: [f64; 2],
}

impl TrackSegment {
    pub fn length(&self) -> f64 {
        let dx = self.end[0] - self.start[0];
        let dy = self.end[1] - self.start[1];
        (dx * dx + dy * dy).sqrt()
    }

    pub fn heading(&self) -> f64 {
        (self.end[1] - self.start[1]).atan2(self.end[0] - self.start[0])
    }

    pub fn start_pose(&self) -> Pose2D {
        Pose2D::new(self.start[0], self.start[1], self.heading())
    }

    /// Signed perpendicular offset and along-track coordinate of a point.
    /// Positive offsets lie to the left of the travel direction.
    pub fn project(&self, p: [f64; 2]) -> (f64, f64) {
        let h = self.heading();
        let (s, c) = h.sin_cos();
        let dx = p[0] - self.start[0];
        let dy = p[1] - self.start[1];
        let along = dx * c + dy * s;
        let offset = -dx * s + dy * c;
        (along, offset)
    }
}

/// A serpentine coverage plan: parallel tracks at uniform spacing, with
/// alternating travel direction so consecutive track ends are adjacent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LawnmowerPlan {
    pub tracks: Vec<TrackSegment>,
    pub track_spacing: f64,
    pub sensor_range: f64,
    pub hfb: f64,
}

impl LawnmowerPlan {
    /// Waypoints in traversal order (track starts and ends).
    pub fn waypoints(&self) -> Vec<[f64; 2]> {
        let mut wps = Vec::with_capacity(self.tracks.len() * 2);
        for t in &self.tracks {
            wps.push(t.start);
            wps.push(t.end);
        }
        wps
    }

    pub fn total_track_length(&self) -> f64 {
        self.tracks.iter().map(|t| t.length()).sum()
    }

    /// Distance from a point to the nearest track (as infinite swath lines
    /// clipped to the track extent).
    pub fn distance_to_nearest_track(&self, p: [f64; 2]) -> f64 {
        self.tracks
            .iter()
            .map(|t| {
                let (along, offset) = t.project(p);
                let along_clamped = along.clamp(0.0, t.length());
                let d_along = along - along_clamped;
                (d_along * d_along + offset * offset).sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Plans a serpentine lawnmower over a `width x height` meters region with
/// tracks parallel to the longer side, offset half a spacing from the
/// boundary. Every point of the region ends within `sensor_range` of a
/// track, which requires `spacing <= 2 * sensor_range`.
pub fn plan_lawnmower(
    width: f64,
    height: f64,
    spacing: f64,
    sensor_range: f64,
    hfb: f64,
) -> Result<LawnmowerPlan> {
    if !(width > 0.0 && height > 0.0 && spacing > 0.0 && sensor_range > 0.0) {
        return Err(NavError::InvalidParameter(format!(
            "region {width}x{height}, spacing {spacing}, range {sensor_range} must all be positive"
        )));
    }
    if spacing > 2.0 * sensor_range {
        return Err(NavError::InfeasibleCoverage {
            spacing,
            range: sensor_range,
        });
    }
    // Tracks run along the longer axis; ties go to x.
    let along_x = width >= height;
    let (track_len, cross_extent) = if along_x {
        (width, height)
    } else {
        (height, width)
    };

    let n_tracks = (cross_extent / spacing).ceil().max(1.0) as usize;
    let mut tracks = Vec::with_capacity(n_tracks);
    for i in 0..n_tracks {
        let cross = if n_tracks == 1 {
            cross_extent / 2.0
        } else {
            (spacing / 2.0 + i as f64 * spacing).min(cross_extent - spacing / 2.0)
        };
        // Serpentine: alternate travel direction per track.
        let (a, b) = if i % 2 == 0 {
            (0.0, track_len)
        } else {
            (track_len, 0.0)
        };
        let (start, end) = if along_x {
            ([a, cross], [b, cross])
        } else {
            ([cross, a], [cross, b])
        };
        tracks.push(TrackSegment { start, end });
    }
    Ok(LawnmowerPlan {
        tracks,
        track_spacing: spacing,
        sensor_range,
        hfb,
    })
}
