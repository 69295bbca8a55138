//! Independent Dubins-length oracle.
//!
//! Enumerates the six Dubins words by explicit circle-tangent geometry
//! (outer/inner tangent lines for CSC words, tangent-circle intersection for
//! CCC words) rather than the canonical-frame trigonometric formulas used by
//! the implementation. Every candidate is validated by densely sampling the
//! path and checking that it lands on the goal pose; the shortest validated
//! candidate is the oracle length.

use asr_core::nav::{normalize_angle, Pose2D};
use std::f64::consts::{FRAC_PI_2, TAU};

#[derive(Clone, Copy)]
enum Turn {
    Left,
    Right,
}

fn rot(v: [f64; 2], ang: f64) -> [f64; 2] {
    let (s, c) = ang.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

fn circle_center(p: &Pose2D, turn: Turn, rho: f64) -> [f64; 2] {
    let off = match turn {
        Turn::Left => rot([p.heading.cos(), p.heading.sin()], FRAC_PI_2),
        Turn::Right => rot([p.heading.cos(), p.heading.sin()], -FRAC_PI_2),
    };
    [p.x + rho * off[0], p.y + rho * off[1]]
}

fn mod2pi(a: f64) -> f64 {
    let m = a % TAU;
    if m < 0.0 {
        m + TAU
    } else {
        m
    }
}

/// Arc length from point `from` to point `to` on a circle at `c`, traversed
/// in the given rotation sense.
fn arc_len(c: [f64; 2], from: [f64; 2], to: [f64; 2], turn: Turn, rho: f64) -> f64 {
    let a0 = (from[1] - c[1]).atan2(from[0] - c[0]);
    let a1 = (to[1] - c[1]).atan2(to[0] - c[0]);
    let delta = match turn {
        Turn::Left => mod2pi(a1 - a0),
        Turn::Right => mod2pi(a0 - a1),
    };
    delta * rho
}

struct Candidate {
    segments: Vec<(Turn, [f64; 2], f64)>, // (sense, circle center, arc length)
    straight: Option<([f64; 2], [f64; 2])>,
    straight_after: usize, // straight inserted after this many arcs
    length: f64,
}

/// Rolls the candidate out with ~5 cm steps and checks goal closure.
fn validate(start: &Pose2D, goal: &Pose2D, cand: &Candidate, rho: f64) -> bool {
    let mut pose = *start;
    let mut advance_arc = |pose: &Pose2D, turn: Turn, len: f64| -> Pose2D {
        let steps = (len / 0.05).ceil().max(1.0) as usize;
        let mut p = *pose;
        for _ in 0..steps {
            let d = len / steps as f64;
            let sign = match turn {
                Turn::Left => 1.0,
                Turn::Right => -1.0,
            };
            // Exact arc step.
            let dtheta = sign * d / rho;
            let h = p.heading;
            p = Pose2D::new(
                p.x + rho * sign * ((h + dtheta).sin() - h.sin()),
                p.y - rho * sign * ((h + dtheta).cos() - h.cos()),
                h + dtheta,
            );
        }
        p
    };
    for (i, (turn, _c, len)) in cand.segments.iter().enumerate() {
        pose = advance_arc(&pose, *turn, *len);
        if i + 1 == cand.straight_after {
            if let Some((a, b)) = cand.straight {
                let d = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
                pose = pose.advance(d);
            }
        }
    }
    let pos_err = pose.distance_to(goal);
    let ang_err = normalize_angle(pose.heading - goal.heading).abs();
    pos_err < 1e-5 && ang_err < 1e-7
}

fn csc(start: &Pose2D, goal: &Pose2D, rho: f64, t1: Turn, t2: Turn) -> Option<Candidate> {
    let c1 = circle_center(start, t1, rho);
    let c2 = circle_center(goal, t2, rho);
    let dx = c2[0] - c1[0];
    let dy = c2[1] - c1[1];
    let dcc = (dx * dx + dy * dy).sqrt();
    let same_side = matches!(
        (t1, t2),
        (Turn::Left, Turn::Left) | (Turn::Right, Turn::Right)
    );
    let (tangent_dir, straight_len) = if same_side {
        if dcc < 1e-12 {
            // Concentric circles: pure arc, zero straight.
            ([start.heading.cos(), start.heading.sin()], 0.0)
        } else {
            ([dx / dcc, dy / dcc], dcc)
        }
    } else {
        if dcc < 2.0 * rho {
            return None;
        }
        let lambda = (dcc * dcc - 4.0 * rho * rho).sqrt();
        let gamma = (2.0 * rho).atan2(lambda);
        let dhat = [dx / dcc, dy / dcc];
        // Left-then-right crosses one way, right-then-left the other.
        let sign = match t1 {
            Turn::Left => 1.0,
            Turn::Right => -1.0,
        };
        (rot(dhat, sign * gamma), lambda)
    };
    // Tangent points: a Left circle is traversed ccw so the contact point is
    // the tangent direction rotated -90 deg from the center; Right is +90.
    let contact = |c: [f64; 2], turn: Turn| -> [f64; 2] {
        let off = match turn {
            Turn::Left => rot(tangent_dir, -FRAC_PI_2),
            Turn::Right => rot(tangent_dir, FRAC_PI_2),
        };
        [c[0] + rho * off[0], c[1] + rho * off[1]]
    };
    let p1 = contact(c1, t1);
    let p2 = contact(c2, t2);
    let arc1 = arc_len(c1, [start.x, start.y], p1, t1, rho);
    let arc2 = arc_len(c2, p2, [goal.x, goal.y], t2, rho);
    Some(Candidate {
        length: arc1 + straight_len + arc2,
        segments: vec![(t1, c1, arc1), (t2, c2, arc2)],
        straight: Some((p1, p2)),
        straight_after: 1,
    })
}

fn ccc(start: &Pose2D, goal: &Pose2D, rho: f64, outer: Turn) -> Vec<Candidate> {
    let inner = match outer {
        Turn::Left => Turn::Right,
        Turn::Right => Turn::Left,
    };
    let c1 = circle_center(start, outer, rho);
    let c2 = circle_center(goal, outer, rho);
    let dx = c2[0] - c1[0];
    let dy = c2[1] - c1[1];
    let dcc = (dx * dx + dy * dy).sqrt();
    if dcc > 4.0 * rho || dcc < 1e-12 {
        return Vec::new();
    }
    // Middle circle center: intersection of radius-2rho circles around c1, c2.
    let half = dcc / 2.0;
    let h = (4.0 * rho * rho - half * half).sqrt();
    let mid = [c1[0] + dx / 2.0, c1[1] + dy / 2.0];
    let perp = [-dy / dcc, dx / dcc];
    let mut out = Vec::new();
    for sign in [1.0, -1.0] {
        let c3 = [mid[0] + sign * h * perp[0], mid[1] + sign * h * perp[1]];
        let p1 = [(c1[0] + c3[0]) / 2.0, (c1[1] + c3[1]) / 2.0];
        let p2 = [(c2[0] + c3[0]) / 2.0, (c2[1] + c3[1]) / 2.0];
        let arc1 = arc_len(c1, [start.x, start.y], p1, outer, rho);
        let arc_mid = arc_len(c3, p1, p2, inner, rho);
        let arc2 = arc_len(c2, p2, [goal.x, goal.y], outer, rho);
        out.push(Candidate {
            length: arc1 + arc_mid + arc2,
            segments: vec![(outer, c1, arc1), (inner, c3, arc_mid), (outer, c2, arc2)],
            straight: None,
            straight_after: usize::MAX,
        });
    }
    out
}

/// Shortest validated length over all six Dubins words, or None when no
/// candidate validates (which would itself be an implementation bug since a
/// Dubins path always exists).
pub fn oracle_shortest(start: &Pose2D, goal: &Pose2D, rho: f64) -> Option<f64> {
    let mut candidates = Vec::new();
    for (t1, t2) in [
        (Turn::Left, Turn::Left),
        (Turn::Right, Turn::Right),
        (Turn::Left, Turn::Right),
        (Turn::Right, Turn::Left),
    ] {
        if let Some(c) = csc(start, goal, rho, t1, t2) {
            candidates.push(c);
        }
    }
    candidates.extend(ccc(start, goal, rho, Turn::Left));
    candidates.extend(ccc(start, goal, rho, Turn::Right));
    candidates
        .into_iter()
        .filter(|c| validate(start, goal, c, rho))
        .map(|c| c.length)
        .min_by(|a, b| a.partial_cmp(b).unwrap())
}
