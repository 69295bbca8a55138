//! Shortest Dubins paths between planar poses.
//!
//! Closed-form evaluation of the six Dubins words (LSL, RSR, LSR, RSL,
//! RLR, LRL) in the canonical frame, keeping the shortest feasible one.
//! A Dubins path always exists for a positive turning radius.

use super::{normalize_angle, NavError, Pose2D, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentKind {
    Left,
    Straight,
    Right,
}

/// One segment of a Dubins path; `length` is in meters and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DubinsSegment {
    pub kind: SegmentKind,
    pub length: f64,
}

/// A three-segment Dubins path from `start` with turning radius `radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DubinsPath {
    pub start: Pose2D,
    pub radius: f64,
    pub segments: [DubinsSegment; 3],
    pub total_length: f64,
}

impl DubinsPath {
    /// Pose after traversing `s` meters along the path (clamped to the end).
    pub fn sample(&self, s: f64) -> Pose2D {
        let mut pose = self.start;
        let mut remaining = s.clamp(0.0, self.total_length);
        for seg in &self.segments {
            let step = remaining.min(seg.length);
            pose = advance_segment(pose, seg.kind, step, self.radius);
            remaining -= step;
            if remaining <= 0.0 {
                break;
            }
        }
        pose
    }

    /// End pose of the path.
    pub fn end(&self) -> Pose2D {
        self.sample(self.total_length)
    }

    /// Polyline sampled every `step` meters (always includes both ends).
    pub fn polyline(&self, step: f64) -> Vec<Pose2D> {
        let n = (self.total_length / step).ceil().max(1.0) as usize;
        (0..=n)
            .map(|i| self.sample(self.total_length * i as f64 / n as f64))
            .collect()
    }
}

fn advance_segment(pose: Pose2D, kind: SegmentKind, dist: f64, radius: f64) -> Pose2D {
    match kind {
        SegmentKind::Straight => pose.advance(dist),
        SegmentKind::Left => {
            let dtheta = dist / radius;
            let h = pose.heading;
            Pose2D::new(
                pose.x + radius * ((h + dtheta).sin() - h.sin()),
                pose.y - radius * ((h + dtheta).cos() - h.cos()),
                h + dtheta,
            )
        }
        SegmentKind::Right => {
            let dtheta = dist / radius;
            let h = pose.heading;
            Pose2D::new(
                pose.x - radius * ((h - dtheta).sin() - h.sin()),
                pose.y + radius * ((h - dtheta).cos() - h.cos()),
                h - dtheta,
            )
        }
    }
}

fn mod2pi(theta: f64) -> f64 {
    let m = theta % TAU;
    if m < 0.0 {
        m + TAU
    } else {
        m
    }
}

/// Candidate word: three normalized segment lengths (in radius units for
/// arcs) or None when the word is infeasible for this geometry.
type Word = Option<[f64; 3]>;

fn lsl(alpha: f64, beta: f64, d: f64) -> Word {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let c_ab = (alpha - beta).cos();
    let p_sq = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sa - sb);
    if p_sq < 0.0 {
        return None;
    }
    let tmp = (cb - ca).atan2(d + sa - sb);
    Some([mod2pi(-alpha + tmp), p_sq.sqrt(), mod2pi(beta - tmp)])
}

fn rsr(alpha: f64, beta: f64, d: f64) -> Word {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let c_ab = (alpha - beta).cos();
    let p_sq = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sb - sa);
    if p_sq < 0.0 {
        return None;
    }
    let tmp = (ca - cb).atan2(d - sa + sb);
    Some([mod2pi(alpha - tmp), p_sq.sqrt(), mod2pi(-beta + tmp)])
}

fn lsr(alpha: f64, beta: f64, d: f64) -> Word {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let c_ab = (alpha - beta).cos();
    let p_sq = -2.0 + d * d + 2.0 * c_ab + 2.0 * d * (sa + sb);
    if p_sq < 0.0 {
        return None;
    }
    let p = p_sq.sqrt();
    let tmp = (-ca - cb).atan2(d + sa + sb) - (-2.0f64).atan2(p);
    Some([mod2pi(-alpha + tmp), p, mod2pi(-mod2pi(beta) + tmp)])
}

fn rsl(alpha: f64, beta: f64, d: f64) -> Word {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let c_ab = (alpha - beta).cos();
    let p_sq = -2.0 + d * d + 2.0 * c_ab - 2.0 * d * (sa + sb);
    if p_sq < 0.0 {
        return None;
    }
    let p = p_sq.sqrt();
    let tmp = (ca + cb).atan2(d - sa - sb) - 2.0f64.atan2(p);
    Some([mod2pi(alpha - tmp), p, mod2pi(beta - tmp)])
}

fn rlr(alpha: f64, beta: f64, d: f64) -> Word {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let c_ab = (alpha - beta).cos();
    let tmp = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sa - sb)) / 8.0;
    if tmp.abs() > 1.0 {
        return None;
    }
    let p = mod2pi(TAU - tmp.acos());
    let t = mod2pi(alpha - (ca - cb).atan2(d - sa + sb) + mod2pi(p / 2.0));
    Some([t, p, mod2pi(alpha - beta - t + mod2pi(p))])
}

fn lrl(alpha: f64, beta: f64, d: f64) -> Word {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let c_ab = (alpha - beta).cos();
    let tmp = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sb - sa)) / 8.0;
    if tmp.abs() > 1.0 {
        return None;
    }
    let p = mod2pi(TAU - tmp.acos());
    let t = mod2pi(-alpha - (ca - cb).atan2(d + sa - sb) + p / 2.0);
    Some([t, p, mod2pi(mod2pi(beta) - alpha - t + mod2pi(p))])
}

const WORD_KINDS: [[SegmentKind; 3]; 6] = {
    use SegmentKind::{Left as L, Right as R, Straight as S};
    [
        [L, S, L],
        [R, S, R],
        [L, S, R],
        [R, S, L],
        [R, L, R],
        [L, R, L],
    ]
};

/// Shortest Dubins path from `from` to `to` with the given turning radius.
///
/// The returned length is never shorter than the straight-line distance.
pub fn dubins_shortest(from: Pose2D, to: Pose2D, radius: f64) -> Result<DubinsPath> {
    if !(radius > 0.0) {
        return Err(NavError::InvalidParameter(format!(
            "turning radius must be positive, got {radius}"
        )));
    }
    let dx = to.x - from.x;
    let dy = to.y - from.y;
    let dist = (dx * dx + dy * dy).sqrt();
    let d = dist / radius;
    let phi = if dist > 1e-12 { dy.atan2(dx) } else { 0.0 };
    let alpha = mod2pi(from.heading - phi);
    let beta = mod2pi(to.heading - phi);

    let words: [Word; 6] = [
        lsl(alpha, beta, d),
        rsr(alpha, beta, d),
        lsr(alpha, beta, d),
        rsl(alpha, beta, d),
        rlr(alpha, beta, d),
        lrl(alpha, beta, d),
    ];

    let mut best: Option<(f64, usize, [f64; 3])> = None;
    for (w, word) in words.iter().enumerate() {
        if let Some(lens) = word {
            let total = lens.iter().sum::<f64>();
            if best.map_or(true, |(bt, _, _)| total < bt) {
                best = Some((total, w, *lens));
            }
        }
    }
    let (total, w, lens) = best.expect("at least one Dubins word is always feasible");
    // Middle segment of CSC words is straight (already in meters after
    // scaling); arcs scale by the radius.
    let kinds = WORD_KINDS[w];
    let segments = [
        DubinsSegment {
            kind: kinds[0],
            length: lens[0] * radius,
        },
        DubinsSegment {
            kind: kinds[1],
            length: lens[1] * radius,
        },
        DubinsSegment {
            kind: kinds[2],
            length: lens[2] * radius,
        },
    ];
    Ok(DubinsPath {
        start: from,
        radius,
        segments,
        total_length: total * radius,
    })
}

/// Pose equality helper for endpoint checks.
pub(crate) fn pose_error(a: &Pose2D, b: &Pose2D) -> f64 {
    let pos = a.distance_to(b);
    let ang = normalize_angle(a.heading - b.heading).abs();
    pos + ang
}
