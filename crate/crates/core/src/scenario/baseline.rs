//! Nominal-motion baselines the model predicts residuals against.

use super::{AgentState, LaneVector};

/// Yaw rates below this magnitude are integrated as straight-line motion.
pub const STRAIGHT_YAW_RATE: f64 = 1e-6;

fn ctrv_step(pos: [f64; 2], heading: f64, speed: f64, yaw_rate: f64, dt: f64) -> ([f64; 2], f64) {
    if yaw_rate.abs() < STRAIGHT_YAW_RATE {
        let (s, c) = heading.sin_cos();
        return ([pos[0] + speed * dt * c, pos[1] + speed * dt * s], heading);
    }
    let next = heading + yaw_rate * dt;
    let r = speed / yaw_rate;
    (
        [
            pos[0] + r * (next.sin() - heading.sin()),
            pos[1] + r * (heading.cos() - next.cos()),
        ],
        next,
    )
}

fn ctrv_rollout(
    mut pos: [f64; 2],
    mut heading: f64,
    speed: f64,
    yaw_rate: f64,
    steps: usize,
    dt: f64,
    out: &mut Vec<[f64; 2]>,
) {
    for _ in 0..steps {
        (pos, heading) = ctrv_step(pos, heading, speed, yaw_rate, dt);
        out.push(pos);
    }
}

/// Constant turn rate and velocity rollout from `s0` for `steps` steps of `dt`.
///
/// Each step integrates the circular arc exactly, so the points lie on the CTRV
/// circle of radius `speed / yaw_rate`.
pub fn kinematic_baseline(s0: &AgentState, speed: f64, yaw_rate: f64, steps: usize, dt: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(steps);
    ctrv_rollout(s0.position(), s0.heading, speed, yaw_rate, steps, dt, &mut out);
    out
}

/// Closest lane vector to `p` within `radius`, ties broken by input order.
pub fn nearest_lane(lanes: &[LaneVector], p: [f64; 2], radius: f64) -> Option<&LaneVector> {
    lanes
        .iter()
        .map(|l| ((l.position[0] - p[0]).hypot(l.position[1] - p[1]), l))
        .filter(|(d, _)| *d <= radius)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, l)| l)
}

/// Rolls the vehicle along the local lane direction at constant speed.
///
/// At every step the nearest lane vector to the simulated position sets the
/// travel direction. When no lane vector is in range mid-rollout, a turning
/// vehicle continues with CTRV and a straight one keeps its last direction.
pub fn lane_following_baseline(
    s0: &AgentState,
    lanes: &[LaneVector],
    speed: f64,
    yaw_rate: f64,
    steps: usize,
    dt: f64,
    radius: f64,
) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(steps);
    let mut pos = s0.position();
    let mut dir = [s0.heading.cos(), s0.heading.sin()];
    for step in 0..steps {
        match nearest_lane(lanes, pos, radius) {
            Some(l) => {
                dir = l.direction;
                pos = [pos[0] + speed * dt * dir[0], pos[1] + speed * dt * dir[1]];
                out.push(pos);
            }
            None => {
                let heading = dir[1].atan2(dir[0]);
                let rate = if yaw_rate.abs() >= STRAIGHT_YAW_RATE { yaw_rate } else { 0.0 };
                ctrv_rollout(pos, heading, speed, rate, steps - step, dt, &mut out);
                break;
            }
        }
    }
    out
}
