use super::baseline::{kinematic_baseline, lane_following_baseline, nearest_lane};
use super::frame::{lane_orientation, LaneFrame};
use super::{Scenario, DT, FUTURE_STEPS, HISTORY_STEPS, STATE_FEATURES};
use crate::error::{Error, Result};
use crate::real::Real;

/// Preprocessing knobs. Lengths in meters, times in seconds.
#[derive(Clone, Debug, PartialEq)]
pub struct PreprocessConfig {
    /// Meters per normalized unit.
    pub scale: f64,
    /// Radius for lane-direction averaging and lane queries.
    pub lane_radius: f64,
    pub dt: f64,
    /// Minimum speed (m/s) for the lane-following branch.
    pub min_speed: f64,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            scale: 10.0,
            lane_radius: 20.0,
            dt: DT,
            min_speed: 0.05,
        }
    }
}

/// Which nominal-motion model produced an example's baseline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaselineBranch {
    LaneFollowing,
    Kinematic,
}

impl BaselineBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            BaselineBranch::LaneFollowing => "lane_following",
            BaselineBranch::Kinematic => "kinematic",
        }
    }
}

/// Preprocessed training/evaluation sample in normalized lane-frame units.
#[derive(Clone, Debug, PartialEq)]
pub struct Example<R = f64> {
    pub id: String,
    /// Rows `s_{-10} .. s_0` after the lane transform.
    pub h: [[R; STATE_FEATURES]; HISTORY_STEPS],
    pub baseline: Vec<[R; 2]>,
    /// `future - baseline`, per step.
    pub residual_gt: Vec<[R; 2]>,
    /// Ground-truth future in the lane frame.
    pub future: Vec<[R; 2]>,
    pub frame: LaneFrame,
    pub branch: BaselineBranch,
}

impl<R: Real> Example<R> {
    pub fn lane_yaw(&self) -> f64 {
        self.frame.yaw()
    }

    /// Meters per normalized unit.
    pub fn scale(&self) -> f64 {
        self.frame.scale()
    }

    pub fn horizon(&self) -> usize {
        self.future.len()
    }
}

impl Example<f64> {
    /// Same example in another scalar type.
    pub fn cast<R: Real>(&self) -> Example<R> {
        let pts = |v: &[[f64; 2]]| v.iter().map(|p| [R::lit(p[0]), R::lit(p[1])]).collect();
        Example {
            id: self.id.clone(),
            h: self.h.map(|row| row.map(R::lit)),
            baseline: pts(&self.baseline),
            residual_gt: pts(&self.residual_gt),
            future: pts(&self.future),
            frame: self.frame,
            branch: self.branch,
        }
    }
}

/// Turns a raw scenario into `(h, baseline, residual target)` in the lane frame.
pub fn build_example(scenario: &Scenario, cfg: &PreprocessConfig) -> Result<Example<f64>> {
    if scenario.history.len() != HISTORY_STEPS || scenario.future.len() != FUTURE_STEPS {
        return Err(Error::invalid_input(format!(
            "scenario {}: expected {HISTORY_STEPS} history states and {FUTURE_STEPS} future positions, got {} and {}",
            scenario.id,
            scenario.history.len(),
            scenario.future.len()
        )));
    }
    if !(cfg.dt > 0.0) {
        return Err(Error::invalid_argument(format!("dt must be positive, got {}", cfg.dt)));
    }
    let s0_world = scenario.current();
    let yaw = lane_orientation(s0_world, &scenario.lane_vectors, cfg.lane_radius);
    let frame = LaneFrame::new(s0_world, yaw, cfg.scale)?;

    let history: Vec<_> = scenario.history.iter().map(|s| frame.state_to_lane(s)).collect();
    let future: Vec<[f64; 2]> = scenario.future.iter().map(|&p| frame.point_to_lane(p)).collect();
    let lanes: Vec<_> = scenario
        .lane_vectors
        .iter()
        .map(|l| frame.lane_vector_to_lane(l))
        .collect();

    let s0 = history[HISTORY_STEPS - 1];
    let speed_mps = s0_world.speed();
    let speed = speed_mps / cfg.scale;
    let yaw_rate = s0.yaw_rate;
    let radius = cfg.lane_radius / cfg.scale;
    let lane_available = nearest_lane(&lanes, s0.position(), radius).is_some();

    let (branch, baseline) = if speed_mps >= cfg.min_speed && lane_available {
        (
            BaselineBranch::LaneFollowing,
            lane_following_baseline(&s0, &lanes, speed, yaw_rate, FUTURE_STEPS, cfg.dt, radius),
        )
    } else {
        (
            BaselineBranch::Kinematic,
            kinematic_baseline(&s0, speed, yaw_rate, FUTURE_STEPS, cfg.dt),
        )
    };

    let residual_gt = future
        .iter()
        .zip(&baseline)
        .map(|(f, b)| [f[0] - b[0], f[1] - b[1]])
        .collect();

    let mut h = [[0.0; STATE_FEATURES]; HISTORY_STEPS];
    for (row, s) in h.iter_mut().zip(&history) {
        *row = s.to_row();
    }

    Ok(Example {
        id: scenario.id.clone(),
        h,
        baseline,
        residual_gt,
        future,
        frame,
        branch,
    })
}
