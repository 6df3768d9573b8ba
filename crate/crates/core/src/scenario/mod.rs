//! Scenario data model, lane-frame preprocessing and the scenario JSONL format.

mod baseline;
mod example;
mod frame;
mod io;
mod synth;

pub use baseline::{kinematic_baseline, lane_following_baseline, nearest_lane, STRAIGHT_YAW_RATE};
pub use example::{build_example, BaselineBranch, Example, PreprocessConfig};
pub use frame::{lane_orientation, to_lane_frame, wrap_angle, LaneFrame};
pub use io::{parse_jsonl, read_jsonl, scenario_from_json, scenario_to_json, write_jsonl, ScenarioRecord};
pub use synth::{synth_generate, synth_generate_labeled, Maneuver, SynthConfig};

use crate::error::{Error, Result};

/// History rows `s_{-10} .. s_0`.
pub const HISTORY_STEPS: usize = 11;
/// Ground-truth future positions `p_1 .. p_T`.
pub const FUTURE_STEPS: usize = 20;
/// Per-step features of an [`AgentState`].
pub const STATE_FEATURES: usize = 9;
/// Sampling interval in seconds (10 Hz).
pub const DT: f64 = 0.1;

/// Kinematic state of the ego vehicle at one time step.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AgentState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub vx: f64,
    pub vy: f64,
    pub yaw_rate: f64,
    pub heading: f64,
    pub length: f64,
    pub width: f64,
}

impl AgentState {
    pub fn from_row(r: [f64; STATE_FEATURES]) -> Self {
        Self {
            x: r[0],
            y: r[1],
            z: r[2],
            vx: r[3],
            vy: r[4],
            yaw_rate: r[5],
            heading: r[6],
            length: r[7],
            width: r[8],
        }
    }

    pub fn to_row(&self) -> [f64; STATE_FEATURES] {
        [
            self.x,
            self.y,
            self.z,
            self.vx,
            self.vy,
            self.yaw_rate,
            self.heading,
            self.length,
            self.width,
        ]
    }

    pub fn position(&self) -> [f64; 2] {
        [self.x, self.y]
    }

    pub fn speed(&self) -> f64 {
        self.vx.hypot(self.vy)
    }
}

/// Map sample: a point on a lane centerline and the unit travel direction there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaneVector {
    pub position: [f64; 2],
    pub direction: [f64; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub history: Vec<AgentState>,
    pub future: Vec<[f64; 2]>,
    pub lane_vectors: Vec<LaneVector>,
}

impl Scenario {
    /// Current state `s_0`.
    pub fn current(&self) -> &AgentState {
        self.history.last().expect("validated scenario has history")
    }

    /// Every violated format invariant, in a stable order. Empty means valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.history.len() != HISTORY_STEPS {
            out.push(format!(
                "history has {} states, expected {HISTORY_STEPS}",
                self.history.len()
            ));
        }
        if self.future.len() != FUTURE_STEPS {
            out.push(format!(
                "future has {} positions, expected {FUTURE_STEPS}",
                self.future.len()
            ));
        }
        for (i, s) in self.history.iter().enumerate() {
            if s.to_row().iter().any(|v| !v.is_finite()) {
                out.push(format!("history[{i}] has a non-finite field"));
            }
            if !(s.length > 0.0 && s.width > 0.0) {
                out.push(format!("history[{i}] has non-positive dimensions"));
            }
        }
        if self.future.iter().flatten().any(|v| !v.is_finite()) {
            out.push("future has a non-finite coordinate".to_string());
        }
        for (i, l) in self.lane_vectors.iter().enumerate() {
            if l.position.iter().chain(&l.direction).any(|v| !v.is_finite()) {
                out.push(format!("lane_vectors[{i}] has a non-finite value"));
                continue;
            }
            let norm = l.direction[0].hypot(l.direction[1]);
            if (norm - 1.0).abs() > 1e-6 {
                out.push(format!("lane_vectors[{i}] direction norm {norm} is not 1"));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid_input(format!("scenario {}: {}", self.id, v.join("; "))))
        }
    }
}
