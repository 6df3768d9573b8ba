//! Seeded synthetic driving scenarios.
//!
//! Each scenario integrates a unicycle model (speed, yaw rate) on a 1 ms grid
//! from `t = -1.0 s` to `t = +2.0 s`, samples it at 10 Hz and places the result
//! at a random world pose. The lane centerline follows the nominal path (the
//! pre-maneuver motion continued), so the maneuver and the smooth perturbations
//! after `t = 0` are what the residual has to explain.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{AgentState, LaneVector, Scenario, DT, FUTURE_STEPS, HISTORY_STEPS};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Maneuver {
    Straight,
    Turn,
    LaneChange,
    Brake,
}

impl Maneuver {
    pub const ALL: [Maneuver; 4] = [Maneuver::Straight, Maneuver::Turn, Maneuver::LaneChange, Maneuver::Brake];

    pub fn name(self) -> &'static str {
        match self {
            Maneuver::Straight => "straight",
            Maneuver::Turn => "turn",
            Maneuver::LaneChange => "lane_change",
            Maneuver::Brake => "brake",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }

    /// Maneuver encoded in a synthetic scenario id (`synth-<seed>-<index>-<maneuver>`).
    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| id.ends_with(&format!("-{}", m.name())))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    pub count: usize,
    /// Relative weights for straight, turn, lane change, brake.
    pub mix: [f64; 4],
    /// Initial speed range, m/s.
    pub speed_range: (f64, f64),
    /// Turn yaw-rate magnitude range, rad/s.
    pub yaw_rate_range: (f64, f64),
    /// Lateral lane-change offset, m.
    pub lane_width: f64,
    /// Lane-change duration range, s.
    pub lane_change_duration: (f64, f64),
    /// Braking deceleration range, m/s^2.
    pub brake_range: (f64, f64),
    /// Max magnitude of the post-anchor acceleration perturbation, m/s^2.
    pub accel_perturbation: f64,
    /// Max magnitude of the post-anchor yaw-rate wobble, rad/s.
    pub yaw_perturbation: f64,
    /// Observation noise standard deviations on the history.
    pub position_noise: f64,
    pub velocity_noise: f64,
    pub heading_noise: f64,
    pub yaw_rate_noise: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            count: 100,
            mix: [0.3, 0.3, 0.3, 0.1],
            speed_range: (3.0, 15.0),
            yaw_rate_range: (0.05, 0.3),
            lane_width: 3.5,
            lane_change_duration: (3.0, 5.0),
            brake_range: (1.0, 3.0),
            accel_perturbation: 0.5,
            yaw_perturbation: 0.03,
            position_noise: 0.05,
            velocity_noise: 0.1,
            heading_noise: 0.01,
            yaw_rate_noise: 0.005,
        }
    }
}

impl SynthConfig {
    /// Noise-free, perturbation-free variant.
    pub fn noiseless(self) -> Self {
        Self {
            accel_perturbation: 0.0,
            yaw_perturbation: 0.0,
            position_noise: 0.0,
            velocity_noise: 0.0,
            heading_noise: 0.0,
            yaw_rate_noise: 0.0,
            ..self
        }
    }

    fn validate(&self) -> Result<()> {
        if self.mix.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) || self.mix.iter().sum::<f64>() <= 0.0 {
            return Err(Error::invalid_argument(format!("maneuver mix {:?} is not a valid weighting", self.mix)));
        }
        let ranges = [self.speed_range, self.yaw_rate_range, self.lane_change_duration, self.brake_range];
        if ranges.iter().any(|(lo, hi)| !(lo <= hi) || *lo < 0.0) {
            return Err(Error::invalid_argument("synthetic ranges must satisfy 0 <= lo <= hi"));
        }
        if self.lane_change_duration.0 <= 0.0 {
            return Err(Error::invalid_argument("lane change duration must be positive"));
        }
        Ok(())
    }

    /// Exact per-maneuver counts by largest remainder, so the realized histogram
    /// tracks the configured mix as closely as integers allow.
    pub fn allocation(&self) -> [usize; 4] {
        let total: f64 = self.mix.iter().sum();
        let quotas: Vec<f64> = self.mix.iter().map(|w| w / total * self.count as f64).collect();
        let mut counts = [0usize; 4];
        for (c, q) in counts.iter_mut().zip(&quotas) {
            *c = q.floor() as usize;
        }
        let mut left = self.count - counts.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&a, &b| {
            let ra = quotas[a] - quotas[a].floor();
            let rb = quotas[b] - quotas[b].floor();
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        for i in order {
            if left == 0 {
                break;
            }
            counts[i] += 1;
            left -= 1;
        }
        counts
    }
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

fn gauss(rng: &mut ChaCha8Rng, sd: f64) -> f64 {
    if sd > 0.0 {
        Normal::new(0.0, sd).expect("finite positive sd").sample(rng)
    } else {
        0.0
    }
}

fn sign(rng: &mut ChaCha8Rng) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// Speed and yaw rate as functions of time relative to the anchor.
struct Controls {
    speed0: f64,
    yaw_rate0: f64,
    accel: f64,
    brake: f64,
    wobble: f64,
    wobble_period: f64,
    lane_change: Option<(f64, f64)>, // (peak yaw rate, duration)
}

impl Controls {
    fn speed(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.speed0;
        }
        (self.speed0 + (self.accel - self.brake) * t).max(0.0)
    }

    fn yaw_rate(&self, t: f64) -> f64 {
        let mut w = self.yaw_rate0;
        if t > 0.0 {
            w += self.wobble * (2.0 * PI * t / self.wobble_period).sin();
            if let Some((peak, dur)) = self.lane_change {
                if t < dur {
                    w += peak * (2.0 * PI * t / dur).sin();
                }
            }
        }
        w
    }
}

const FINE_STEPS_PER_SAMPLE: usize = 100;

/// States at `t = -1.0, -0.9, ..., 2.0` (31 samples) starting from the origin heading +x.
fn integrate(ctrl: &Controls) -> Vec<(f64, f64, f64, f64, f64)> {
    let h = DT / FINE_STEPS_PER_SAMPLE as f64;
    let samples = HISTORY_STEPS + FUTURE_STEPS;
    let t0 = -((HISTORY_STEPS - 1) as f64) * DT;
    let (mut x, mut y, mut th) = (0.0f64, 0.0f64, 0.0f64);
    let mut out = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = t0 + k as f64 * DT;
        out.push((x, y, th, ctrl.speed(t), ctrl.yaw_rate(t)));
        if k + 1 == samples {
            break;
        }
        for i in 0..FINE_STEPS_PER_SAMPLE {
            let tm = t + (i as f64 + 0.5) * h;
            let v = ctrl.speed(tm);
            let mid = th + 0.5 * h * ctrl.yaw_rate(tm);
            x += v * h * mid.cos();
            y += v * h * mid.sin();
            th += h * ctrl.yaw_rate(tm);
        }
    }
    out
}

/// Lane centerline through the start pose with constant curvature `kappa`.
fn nominal_lane(kappa: f64) -> Vec<LaneVector> {
    let spacing = 2.0;
    let (lo, hi) = (-40.0, 80.0);
    let n = ((hi - lo) / spacing) as i64;
    (0..=n)
        .filter_map(|i| {
            let s = lo + i as f64 * spacing;
            if (kappa * s).abs() > 2.5 {
                return None;
            }
            let (x, y) = if kappa.abs() < 1e-9 {
                (s, 0.0)
            } else {
                ((kappa * s).sin() / kappa, (1.0 - (kappa * s).cos()) / kappa)
            };
            let a = kappa * s;
            Some(LaneVector {
                position: [x, y],
                direction: [a.cos(), a.sin()],
            })
        })
        .collect()
}

fn generate_one(cfg: &SynthConfig, maneuver: Maneuver, id: String, rng: &mut ChaCha8Rng) -> Scenario {
    let speed0 = uniform(rng, cfg.speed_range);
    let yaw_rate0 = match maneuver {
        Maneuver::Turn => sign(rng) * uniform(rng, cfg.yaw_rate_range),
        _ => 0.0,
    };
    let accel = match maneuver {
        Maneuver::Brake => 0.0,
        _ => uniform(rng, (-cfg.accel_perturbation, cfg.accel_perturbation)),
    };
    let brake = match maneuver {
        Maneuver::Brake => uniform(rng, cfg.brake_range),
        _ => 0.0,
    };
    let wobble = uniform(rng, (-cfg.yaw_perturbation, cfg.yaw_perturbation));
    let wobble_period = uniform(rng, (2.0, 6.0));
    let lane_change = match maneuver {
        Maneuver::LaneChange => {
            let dur = uniform(rng, cfg.lane_change_duration);
            // lateral offset of a full-period sine yaw profile: v * peak * dur^2 / (2 pi)
            let peak = 2.0 * PI * cfg.lane_width / (speed0 * dur * dur);
            Some((sign(rng) * peak, dur))
        }
        _ => None,
    };
    let ctrl = Controls {
        speed0,
        yaw_rate0,
        accel,
        brake,
        wobble,
        wobble_period,
        lane_change,
    };
    let path = integrate(&ctrl);
    let kappa = if speed0 > 0.0 { yaw_rate0 / speed0 } else { 0.0 };
    let lane = nominal_lane(kappa);

    let world_yaw = rng.random_range(-PI..PI);
    let offset = [rng.random_range(-500.0..500.0), rng.random_range(-500.0..500.0)];
    let elevation = rng.random_range(-5.0..5.0);
    let length = rng.random_range(4.0..5.2);
    let width = rng.random_range(1.7..2.1);
    let (ws, wc) = world_yaw.sin_cos();
    let place = |p: [f64; 2]| [wc * p[0] - ws * p[1] + offset[0], ws * p[0] + wc * p[1] + offset[1]];
    let turn = |v: [f64; 2]| [wc * v[0] - ws * v[1], ws * v[0] + wc * v[1]];

    let history = path[..HISTORY_STEPS]
        .iter()
        .map(|&(x, y, th, v, w)| {
            let [px, py] = place([x, y]);
            let [vx, vy] = turn([v * th.cos(), v * th.sin()]);
            AgentState {
                x: px + gauss(rng, cfg.position_noise),
                y: py + gauss(rng, cfg.position_noise),
                z: elevation,
                vx: vx + gauss(rng, cfg.velocity_noise),
                vy: vy + gauss(rng, cfg.velocity_noise),
                yaw_rate: w + gauss(rng, cfg.yaw_rate_noise),
                heading: super::wrap_angle(th + world_yaw + gauss(rng, cfg.heading_noise)),
                length,
                width,
            }
        })
        .collect();
    let future = path[HISTORY_STEPS..].iter().map(|&(x, y, ..)| place([x, y])).collect();
    let lane_vectors = lane
        .iter()
        .map(|l| {
            let d = turn(l.direction);
            let n = d[0].hypot(d[1]);
            LaneVector {
                position: place(l.position),
                direction: [d[0] / n, d[1] / n],
            }
        })
        .collect();
    Scenario {
        id,
        history,
        future,
        lane_vectors,
    }
}

/// Deterministic scenarios with their maneuver labels.
pub fn synth_generate_labeled(cfg: &SynthConfig, seed: u64) -> Result<Vec<(Maneuver, Scenario)>> {
    cfg.validate()?;
    let counts = cfg.allocation();
    let mut plan: Vec<Maneuver> = Maneuver::ALL
        .iter()
        .zip(counts)
        .flat_map(|(&m, c)| std::iter::repeat_n(m, c))
        .collect();
    let mut order_rng = ChaCha8Rng::seed_from_u64(seed);
    // Fisher-Yates with the ordering stream
    for i in (1..plan.len()).rev() {
        let j = order_rng.random_range(0..=i);
        plan.swap(i, j);
    }
    Ok(plan
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let id = format!("synth-{seed}-{i:05}-{}", m.name());
            (m, generate_one(cfg, m, id, &mut rng))
        })
        .collect())
}

pub fn synth_generate(cfg: &SynthConfig, seed: u64) -> Result<Vec<Scenario>> {
    Ok(synth_generate_labeled(cfg, seed)?.into_iter().map(|(_, s)| s).collect())
}
