mod common;

use std::time::{Duration, Instant};

use laneq_core::model::Architecture;
use laneq_core::scenario::{build_example, synth_generate, PreprocessConfig, SynthConfig};
use laneq_core::training::{train, Spsa, SpsaConfig};
use rand::Rng;

fn quadratic(target: [f64; 2]) -> impl Fn(&[f64]) -> laneq_core::Result<f64> + Sync {
    move |t| Ok((t[0] - target[0]).powi(2) + (t[1] - target[1]).powi(2))
}

/// Gains used for the analytic check; the training defaults contract too slowly
/// over 2000 steps to reach the 1e-2 band.
fn quadratic_config(seed: u64) -> SpsaConfig {
    SpsaConfig {
        a: 0.1,
        grad_averages: 1,
        seed,
        ..Default::default()
    }
}

#[test]
fn quadratic_converges_within_2000_steps() {
    let start = Instant::now();
    for seed in 0..5 {
        let target = [0.3, -0.7];
        let mut theta = vec![target[0] + 0.6, target[1] - 0.8];
        let mut spsa = Spsa::new(quadratic_config(seed)).unwrap();
        for k in 1..=2000 {
            let report = spsa.step(&mut theta, k, quadratic(target)).unwrap();
            assert_eq!(report.evaluations, 2);
        }
        let dist = (theta[0] - target[0]).hypot(theta[1] - target[1]);
        assert!(dist < 1e-2, "seed {seed}: distance {dist}");
    }
    assert!(start.elapsed() < Duration::from_secs(10));
}

#[test]
fn averaged_estimate_points_along_gradient() {
    let mut rng = common::rng(21);
    let target = [0.0, 0.0, 0.0, 0.0];
    let obj = |t: &[f64]| -> laneq_core::Result<f64> { Ok(t.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum()) };
    let cfg = SpsaConfig {
        grad_averages: 2,
        seed: 3,
        ..Default::default()
    };
    let mut spsa = Spsa::new(cfg.clone()).unwrap();
    let mut inner = 0.0;
    let mut mean_est = [0.0; 4];
    let draws = 1000;
    let theta0: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
    let grad: Vec<f64> = theta0.iter().map(|t| 2.0 * t).collect();
    for _ in 0..draws {
        let mut theta = theta0.clone();
        spsa.step(&mut theta, 1, obj).unwrap();
        let est: Vec<f64> = theta0.iter().zip(&theta).map(|(a, b)| (a - b) / cfg.gain(1)).collect();
        inner += est.iter().zip(&grad).map(|(e, g)| e * g).sum::<f64>();
        for (m, e) in mean_est.iter_mut().zip(&est) {
            *m += e / draws as f64;
        }
    }
    assert!(inner / draws as f64 > 0.0);
    // the estimator is unbiased on a quadratic
    for (m, g) in mean_est.iter().zip(&grad) {
        assert!((m - g).abs() < 0.25 * grad.iter().map(|g| g.abs()).fold(0.0, f64::max) + 0.05);
    }
}

fn small_examples() -> Vec<laneq_core::Example64> {
    let cfg = SynthConfig {
        count: 6,
        ..Default::default()
    };
    synth_generate(&cfg, 9)
        .unwrap()
        .iter()
        .map(|s| build_example(s, &PreprocessConfig::default()).unwrap())
        .collect()
}

#[test]
fn training_is_reproducible_and_seed_sensitive() {
    let data = small_examples();
    let arch = Architecture::default();
    let cfg = SpsaConfig {
        epochs: 2,
        batches_per_epoch: 2,
        batch_size: 3,
        seed: 17,
        ..Default::default()
    };
    let a = train(&data[..4], &data[4..], &arch, &cfg, |_, _, _| Ok(())).unwrap();
    let b = train(&data[..4], &data[4..], &arch, &cfg, |_, _, _| Ok(())).unwrap();
    assert_eq!(a.final_params, b.final_params);
    assert_eq!(a.log.to_csv_string(), b.log.to_csv_string());
    let c = train(&data[..4], &data[4..], &arch, &SpsaConfig { seed: 18, ..cfg }, |_, _, _| Ok(())).unwrap();
    assert_ne!(a.final_params, c.final_params);
}

#[test]
fn per_epoch_callback_sees_every_epoch() {
    let data = small_examples();
    let cfg = SpsaConfig {
        epochs: 3,
        batches_per_epoch: 1,
        batch_size: 1,
        ..Default::default()
    };
    let mut seen = Vec::new();
    let out = train(&data[..4], &data[4..], &Architecture::default(), &cfg, |e, p, r| {
        seen.push((e, p.len(), r.map(|r| r.epoch)));
        Ok(())
    })
    .unwrap();
    assert_eq!(seen, vec![(0, 1209, None), (1, 1209, Some(1)), (2, 1209, Some(2)), (3, 1209, Some(3))]);
    let best: Vec<f64> = out.log.records.iter().map(|r| r.best_so_far_val_ade).collect();
    assert!(best.windows(2).all(|w| w[1] <= w[0]));
    assert!((1..=3).contains(&out.best_epoch));
}
