use laneq_core::metrics::{Ranking, ScenarioEval};
use laneq_core::qdecoder::ModeSet;
use laneq_core::qffn::{ffn_trace, FfnParams};
use laneq_core::qsim::{Axis, Statevector};
use laneq_core::scenario::{AgentState, LaneFrame};
use laneq_core::training::loss;
use num_complex::Complex;
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Gate {
    Rot(u8, usize, f64),
    Cx(usize, usize),
    Phase(f64),
}

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    let angle = -10.0..10.0f64;
    prop_oneof![
        (0u8..3, 0..n, angle.clone()).prop_map(|(a, q, t)| Gate::Rot(a, q, t)),
        (0..n, 1..n.max(2)).prop_map(move |(c, d)| Gate::Cx(c, (c + d) % n)),
        angle.prop_map(Gate::Phase),
    ]
}

fn circuit() -> impl Strategy<Value = (usize, Vec<Gate>)> {
    (2usize..=6).prop_flat_map(|n| (Just(n), prop::collection::vec(gate(n), 0..40)))
}

fn run(n: usize, gates: &[Gate]) -> Statevector<f64> {
    let mut sv = Statevector::new_zero(n).unwrap();
    for g in gates {
        match *g {
            Gate::Rot(a, q, t) => {
                let axis = [Axis::X, Axis::Y, Axis::Z][a as usize];
                sv.apply_rotation(axis, q, t).unwrap();
            }
            Gate::Cx(c, t) => sv.apply_cx(c, t).unwrap(),
            Gate::Phase(t) => sv.apply_phase_layer(t),
        }
    }
    sv
}

/// Modes as `(lateral offset, confidence weight)` pairs against a straight truth.
fn mode_set() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-5.0..5.0f64, 0.01..1.0f64), 1..20)
}

fn eval_for(modes: &[(f64, f64)]) -> ScenarioEval {
    let gt: Vec<[f64; 2]> = (1..=20).map(|t| [0.1 * t as f64, 0.0]).collect();
    let total: f64 = modes.iter().map(|m| m.1).sum();
    let residuals: Vec<Vec<[f64; 2]>> = modes
        .iter()
        .map(|&(o, _)| (1..=20).map(|t| [0.0, o * t as f64 / 20.0]).collect())
        .collect();
    let trajectories = residuals
        .iter()
        .map(|r| r.iter().zip(&gt).map(|(a, g)| [g[0] + a[0], g[1] + a[1]]).collect())
        .collect();
    let set = ModeSet {
        trajectories,
        residuals,
        confidences: modes.iter().map(|m| m.1 / total).collect(),
    };
    ScenarioEval::from_modes("p", &set, &gt, &gt, 10.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn circuits_preserve_norm((n, gates) in circuit()) {
        let sv = run(n, &gates);
        prop_assert!((sv.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_layer_keeps_probabilities((n, gates) in circuit(), theta in -10.0..10.0f64) {
        let sv = run(n, &gates);
        let mut phased = sv.clone();
        phased.apply_phase_layer(theta);
        for (a, b) in sv.probabilities().iter().zip(phased.probabilities()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn expectations_stay_in_range((n, gates) in circuit()) {
        for z in run(n, &gates).expect_z_all() {
            prop_assert!((-1.0..=1.0).contains(&z));
        }
    }

    #[test]
    fn feedforward_prefix(
        x in prop::array::uniform9(-1.0..1.0f64),
        angles in prop::collection::vec(-3.2..3.2f64, 18 * 5),
        cut in 1usize..5,
    ) {
        let full = ffn_trace(&x, FfnParams::new(&angles).unwrap()).unwrap();
        let short = ffn_trace(&x, FfnParams::new(&angles[..18 * cut]).unwrap()).unwrap();
        prop_assert_eq!(&full[..cut], &short[..]);
    }

    #[test]
    fn min_ade_non_increasing_in_k(modes in mode_set()) {
        let e = eval_for(&modes);
        for ranking in [Ranking::Confidence, Ranking::Oracle] {
            let mut prev = f64::INFINITY;
            for k in 1..=modes.len() {
                let (ade, _) = e.min_displacement(k, ranking).unwrap();
                prop_assert!(ade <= prev);
                prev = ade;
            }
        }
    }

    #[test]
    fn oracle_never_worse_than_confidence(modes in mode_set()) {
        let e = eval_for(&modes);
        for k in 1..=modes.len() {
            let top = e.min_displacement(k, Ranking::Confidence).unwrap();
            let best = e.min_displacement(k, Ranking::Oracle).unwrap();
            prop_assert!(best.0 <= top.0 && best.1 <= top.1);
        }
    }

    #[test]
    fn loss_is_non_negative(modes in mode_set(), lambda in 0.0..1.0f64) {
        let gt: Vec<[f64; 2]> = (1..=20).map(|t| [t as f64, 0.0]).collect();
        let residuals: Vec<Vec<[f64; 2]>> = modes.iter().map(|m| vec![[m.0, -m.0]; 20]).collect();
        let trajectories = residuals
            .iter()
            .map(|r| r.iter().zip(&gt).map(|(a, g)| [g[0] + a[0], g[1] + a[1]]).collect())
            .collect();
        let set = ModeSet { trajectories, residuals, confidences: vec![1.0 / modes.len() as f64; modes.len()] };
        prop_assert!(loss(&set, &gt, lambda) >= 0.0);
    }

    #[test]
    fn lane_frame_round_trip(
        x in -1e4..1e4f64, y in -1e4..1e4f64, yaw in -10.0..10.0f64, scale in 0.5..50.0f64,
        px in -500.0..500.0f64, py in -500.0..500.0f64,
    ) {
        let s0 = AgentState { x, y, length: 4.0, width: 2.0, ..Default::default() };
        let frame = LaneFrame::new(&s0, yaw, scale).unwrap();
        let p = [x + px, y + py];
        let back = frame.point_to_world(frame.point_to_lane(p));
        prop_assert!((back[0] - p[0]).hypot(back[1] - p[1]) < 1e-9);
    }

    #[test]
    fn amplitudes_normalized_after_product_load(angles in prop::collection::vec(-7.0..7.0f64, 1..7)) {
        let wires: Vec<_> = angles
            .iter()
            .map(|&t| [Complex::new((t / 2.0).cos(), 0.0), Complex::new((t / 2.0).sin(), 0.0)])
            .collect();
        let sv = Statevector::from_product(&wires).unwrap();
        prop_assert!((sv.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
