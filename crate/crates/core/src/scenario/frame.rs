use std::f64::consts::PI;

use super::{AgentState, LaneVector, Scenario};
use crate::error::{Error, Result};

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Reference yaw from the mean direction of lane vectors within `radius` of `s0`.
/// Falls back to `s0.heading` when none are in range or the mean cancels out.
pub fn lane_orientation(s0: &AgentState, lanes: &[LaneVector], radius: f64) -> f64 {
    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
    for l in lanes {
        let d = (l.position[0] - s0.x).hypot(l.position[1] - s0.y);
        if d <= radius {
            sx += l.direction[0];
            sy += l.direction[1];
            n += 1;
        }
    }
    if n == 0 || sx.hypot(sy) < 1e-12 {
        return s0.heading;
    }
    sy.atan2(sx)
}

/// Ego-centric lane-aligned frame: origin at `s_0`, x-axis along the lane yaw,
/// lengths divided by `scale` (meters per unit).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaneFrame {
    origin: [f64; 3],
    yaw: f64,
    scale: f64,
    cos: f64,
    sin: f64,
}

impl LaneFrame {
    pub fn new(s0: &AgentState, yaw: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::invalid_argument(format!("scale must be positive, got {scale}")));
        }
        let (sin, cos) = yaw.sin_cos();
        Ok(Self {
            origin: [s0.x, s0.y, s0.z],
            yaw,
            scale,
            cos,
            sin,
        })
    }

    pub fn yaw(&self) -> f64 {
        self.yaw
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    fn rotate_in(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.cos * v[0] + self.sin * v[1],
            -self.sin * v[0] + self.cos * v[1],
        ]
    }

    fn rotate_out(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.cos * v[0] - self.sin * v[1],
            self.sin * v[0] + self.cos * v[1],
        ]
    }

    pub fn point_to_lane(&self, p: [f64; 2]) -> [f64; 2] {
        let r = self.rotate_in([p[0] - self.origin[0], p[1] - self.origin[1]]);
        [r[0] / self.scale, r[1] / self.scale]
    }

    pub fn point_to_world(&self, q: [f64; 2]) -> [f64; 2] {
        let r = self.rotate_out([q[0] * self.scale, q[1] * self.scale]);
        [r[0] + self.origin[0], r[1] + self.origin[1]]
    }

    /// Velocities and other free vectors: rotated and scaled, not translated.
    pub fn vector_to_lane(&self, v: [f64; 2]) -> [f64; 2] {
        let r = self.rotate_in(v);
        [r[0] / self.scale, r[1] / self.scale]
    }

    pub fn vector_to_world(&self, v: [f64; 2]) -> [f64; 2] {
        self.rotate_out([v[0] * self.scale, v[1] * self.scale])
    }

    pub fn state_to_lane(&self, s: &AgentState) -> AgentState {
        let [x, y] = self.point_to_lane([s.x, s.y]);
        let [vx, vy] = self.vector_to_lane([s.vx, s.vy]);
        AgentState {
            x,
            y,
            z: (s.z - self.origin[2]) / self.scale,
            vx,
            vy,
            yaw_rate: s.yaw_rate,
            heading: wrap_angle(s.heading - self.yaw),
            length: s.length,
            width: s.width,
        }
    }

    pub fn state_to_world(&self, s: &AgentState) -> AgentState {
        let [x, y] = self.point_to_world([s.x, s.y]);
        let [vx, vy] = self.vector_to_world([s.vx, s.vy]);
        AgentState {
            x,
            y,
            z: s.z * self.scale + self.origin[2],
            vx,
            vy,
            yaw_rate: s.yaw_rate,
            heading: wrap_angle(s.heading + self.yaw),
            length: s.length,
            width: s.width,
        }
    }

    pub fn lane_vector_to_lane(&self, l: &LaneVector) -> LaneVector {
        LaneVector {
            position: self.point_to_lane(l.position),
            direction: self.rotate_in(l.direction),
        }
    }
}

/// Transforms a scenario's history and future into the lane frame anchored at `s_0`.
pub fn to_lane_frame(
    scenario: &Scenario,
    lane_yaw: f64,
    scale: f64,
) -> Result<(Vec<AgentState>, Vec<[f64; 2]>)> {
    let s0 = scenario
        .history
        .last()
        .ok_or_else(|| Error::invalid_input(format!("scenario {} has empty history", scenario.id)))?;
    let frame = LaneFrame::new(s0, lane_yaw, scale)?;
    let history = scenario.history.iter().map(|s| frame.state_to_lane(s)).collect();
    let future = scenario.future.iter().map(|&p| frame.point_to_lane(p)).collect();
    Ok((history, future))
}
