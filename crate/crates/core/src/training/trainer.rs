use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::log::{smooth, EpochRecord, TrainLog};
use super::loss::loss;
use super::spsa::{Spsa, SpsaConfig, BATCH_STREAM, INIT_STREAM};
use crate::error::{Error, Result};
use crate::metrics::{aggregate, evaluate_examples, report_ks, EvalReport};
use crate::model::{Architecture, ParamVector};
use crate::real::Real;
use crate::scenario::Example;

/// Result of a training run.
#[derive(Clone, Debug)]
pub struct TrainOutcome<R> {
    pub initial: Vec<R>,
    pub final_params: Vec<R>,
    /// Parameters of the best validation epoch, or the initial ones when no epoch ran.
    pub best: Vec<R>,
    /// 0 when no epoch ran.
    pub best_epoch: usize,
    pub log: TrainLog,
}

/// File name used for the checkpoint of `epoch` (0 is the initialization).
pub fn checkpoint_name(epoch: usize) -> String {
    format!("epoch_{epoch:03}.ckpt")
}

/// Initial angles drawn from the seed's init stream.
pub fn initial_params<R: Real>(arch: &Architecture, cfg: &SpsaConfig) -> Result<Vec<R>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(INIT_STREAM);
    Ok(ParamVector::<R>::random_normal(*arch, cfg.init_std, &mut rng)?.into_values())
}

/// Training loss of `params` on one example.
pub fn example_loss<R: Real>(arch: &Architecture, params: &[R], ex: &Example<R>, lambda: R) -> Result<R> {
    let modes = arch.forward_example(params, ex)?;
    Ok(loss(&modes, &ex.future, lambda))
}

fn validation_report<R: Real>(arch: &Architecture, params: &[R], val: &[Example<R>]) -> Result<EvalReport> {
    let (evals, skipped) = evaluate_examples(arch, params, val);
    if let Some(s) = skipped.first() {
        return Err(Error::Numerical(format!("validation failed on {}: {}", s.id, s.reason)));
    }
    aggregate(&evals, skipped)
}

/// Online SPSA training with per-epoch validation.
///
/// `on_epoch` runs after every epoch (including epoch 0, the initialization) with
/// the current parameters; the CLI uses it to write checkpoints.
pub fn train<R, F>(
    train_set: &[Example<R>],
    val_set: &[Example<R>],
    arch: &Architecture,
    cfg: &SpsaConfig,
    mut on_epoch: F,
) -> Result<TrainOutcome<R>>
where
    R: Real,
    F: FnMut(usize, &[R], Option<&EpochRecord>) -> Result<()>,
{
    if train_set.is_empty() {
        return Err(Error::invalid_input("training set is empty"));
    }
    if val_set.is_empty() && cfg.epochs > 0 {
        return Err(Error::invalid_input("validation set is empty"));
    }
    arch.validate()?;
    cfg.validate()?;
    if let Some(ex) = train_set.iter().chain(val_set).find(|e| e.horizon() != arch.horizon) {
        return Err(Error::invalid_input(format!(
            "example {} has horizon {}, architecture expects {}",
            ex.id,
            ex.horizon(),
            arch.horizon
        )));
    }

    let initial = initial_params::<R>(arch, cfg)?;
    on_epoch(0, &initial, None)?;

    let mut theta = initial.clone();
    let mut best = initial.clone();
    let mut best_epoch = 0;
    let mut best_ade = f64::INFINITY;
    let mut log = TrainLog::default();
    let mut smoothed = None;

    let mut batch_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    batch_rng.set_stream(BATCH_STREAM);
    let mut spsa = Spsa::new(cfg.clone())?;
    let lambda = R::lit(cfg.lambda);
    let top_k = *report_ks(arch.modes()).last().unwrap();
    let pick = |k: usize| report_ks(arch.modes()).into_iter().filter(|&x| x <= k).max().unwrap_or(1);

    for epoch in 1..=cfg.epochs {
        let mut total = 0.0;
        let mut steps = 0usize;
        let mut k = 0u64;
        for _ in 0..cfg.batches_per_epoch {
            for _ in 0..cfg.batch_size {
                let ex = &train_set[batch_rng.random_range(0..train_set.len())];
                k += 1;
                let report = spsa
                    .step(&mut theta, k, |t| example_loss(arch, t, ex, lambda))
                    .map_err(|e| match e {
                        Error::Numerical(m) => Error::Numerical(format!("epoch {epoch}, example {}: {m}", ex.id)),
                        other => other,
                    })?;
                total += report.mean_loss();
                steps += 1;
            }
        }
        let mean = total / steps as f64;
        let s = smooth(smoothed, mean);
        smoothed = Some(s);

        let report = validation_report(arch, &theta, val_set)?;
        let ade16 = report.min_ade_at_k[&top_k];
        if ade16 < best_ade {
            best_ade = ade16;
            best_epoch = epoch;
            best.clone_from(&theta);
        }
        let at = |m: &std::collections::BTreeMap<usize, f64>, k: usize| m[&pick(k)];
        let record = EpochRecord {
            epoch,
            train_loss_mean: mean,
            train_loss_smoothed: s,
            val_min_ade_k1: at(&report.min_ade_at_k, 1),
            val_min_fde_k1: at(&report.min_fde_at_k, 1),
            val_min_ade_k5: at(&report.min_ade_at_k, 5),
            val_min_fde_k5: at(&report.min_fde_at_k, 5),
            val_min_ade_k10: at(&report.min_ade_at_k, 10),
            val_min_fde_k10: at(&report.min_fde_at_k, 10),
            val_min_ade_k16: ade16,
            val_min_fde_k16: report.min_fde_at_k[&top_k],
            val_best_ade: report.best_k_ade[&top_k],
            val_baseline_ade: report.baseline_ade,
            val_miss_2m: report.miss_at_2m,
            val_miss_4m: report.miss_at_4m,
            val_hit_at_1: report.hit_at_1,
            best_so_far_val_ade: best_ade,
            checkpoint: checkpoint_name(epoch),
        };
        on_epoch(epoch, &theta, Some(&record))?;
        log.records.push(record);
    }

    Ok(TrainOutcome {
        initial,
        final_params: theta,
        best,
        best_epoch,
        log,
    })
}
