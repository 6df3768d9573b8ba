use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;

use laneq_core::config::RunConfig;
use laneq_core::metrics::{self, aggregate, baseline_evals, evaluate_examples, prepare, EvalReport};
use laneq_core::plots;
use laneq_core::scenario::{build_example, read_jsonl, synth_generate, write_jsonl, Maneuver, Scenario, SynthConfig};
use laneq_core::training::{checkpoint_name, train, Checkpoint, TrainLog};
use laneq_core::{Error, Result};

use crate::{Cli, Command, GlobalArgs, Split};

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn resolve(global: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::resolve(global.config.as_deref(), &global.sets)?;
    if let Some(seed) = global.seed {
        cfg.spsa.seed = seed;
    }
    if let Some(w) = global.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(cli: Cli) -> Result<()> {
    let cfg = resolve(&cli.global)?;
    if cfg.workers > 0 {
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build_global();
    }
    let out = &cli.global.out;
    std::fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    match cli.command {
        Command::Generate { count, output } => generate(&cfg, count, output.unwrap_or_else(|| out.join("scenarios.jsonl"))),
        Command::Train => cmd_train(&cfg, out),
        Command::Evaluate {
            checkpoint,
            split,
            scenarios,
            per_scenario,
        } => cmd_evaluate(&cfg, out, &checkpoint, split, scenarios.as_deref(), per_scenario),
        Command::Predict { checkpoint, scenarios } => cmd_predict(&cfg, out, &checkpoint, &scenarios),
        Command::ExportPlots { log, reports } => cmd_export_plots(out, log.as_deref(), &reports),
    }
}

fn generate(cfg: &RunConfig, count: Option<usize>, path: PathBuf) -> Result<()> {
    let synth = SynthConfig {
        count: count.unwrap_or(cfg.synth_count),
        mix: cfg.synth_mix,
        ..Default::default()
    };
    let scenarios = synth_generate(&synth, cfg.seed())?;
    write_jsonl(&path, &scenarios)?;
    let mut histogram: BTreeMap<&str, usize> = Maneuver::ALL.iter().map(|m| (m.name(), 0)).collect();
    for s in &scenarios {
        if let Some(m) = Maneuver::from_id(&s.id) {
            *histogram.entry(m.name()).or_default() += 1;
        }
    }
    let mean_speed = if scenarios.is_empty() {
        0.0
    } else {
        scenarios.iter().map(|s| s.current().speed()).sum::<f64>() / scenarios.len() as f64
    };
    println!("wrote {} scenarios to {}", scenarios.len(), path.display());
    for (name, n) in &histogram {
        println!("  {name:<12} {n}");
    }
    println!("  mean current speed {mean_speed:.2} m/s");
    Ok(())
}

fn examples_or_error(scenarios: &[Scenario], cfg: &RunConfig) -> Result<Vec<laneq_core::Example64>> {
    scenarios
        .iter()
        .map(|s| {
            build_example(s, &cfg.preprocess)
                .map_err(|e| Error::InvalidInput(format!("scenario {}: {e}", s.id)))
        })
        .collect()
}

fn cmd_train(cfg: &RunConfig, out: &Path) -> Result<()> {
    let (train_s, val_s) = cfg.load_splits()?;
    let train_ex = examples_or_error(&train_s, cfg)?;
    let val_ex = examples_or_error(&val_s, cfg)?;
    let hash = cfg.hash();
    let seed = cfg.seed();
    let log_path = out.join("train_log.csv");
    let mut log = TrainLog::default();
    let outcome = train(&train_ex, &val_ex, &cfg.arch, &cfg.spsa, |epoch, params, record| {
        Checkpoint::new(seed, epoch, &hash, params).write(&out.join(checkpoint_name(epoch)))?;
        if let Some(r) = record {
            log.records.push(r.clone());
            log.write_file(&log_path)?;
            println!(
                "epoch {:>3}  loss {:.6} (smoothed {:.6})  val minADE@16 {:.4} m  baseline {:.4} m",
                r.epoch, r.train_loss_mean, r.train_loss_smoothed, r.val_min_ade_k16, r.val_baseline_ade
            );
        }
        Ok(())
    })?;
    if cfg.spsa.epochs > 0 {
        Checkpoint::new(seed, outcome.best_epoch, &hash, &outcome.best).write(&out.join("best.ckpt"))?;
        println!("best epoch {} -> {}", outcome.best_epoch, out.join("best.ckpt").display());
    }
    Ok(())
}

fn load_params(cfg: &RunConfig, path: &Path) -> Result<Vec<f64>> {
    let ck = Checkpoint::read(path)?;
    let hash = cfg.hash();
    if ck.config_hash != hash {
        eprintln!(
            "laneq: warning: {} was written with config {}, current config is {}",
            path.display(),
            ck.config_hash,
            hash
        );
    }
    ck.params(cfg.arch.param_count())
}

fn cmd_evaluate(
    cfg: &RunConfig,
    out: &Path,
    checkpoint: &Path,
    split: Split,
    scenarios: Option<&Path>,
    per_scenario: bool,
) -> Result<()> {
    let params = load_params(cfg, checkpoint)?;
    let data = match scenarios {
        Some(p) => read_jsonl(p)?,
        None => {
            let (mut train_s, val_s) = cfg.load_splits()?;
            match split {
                Split::Train => train_s,
                Split::Val => val_s,
                Split::All => {
                    train_s.extend(val_s);
                    train_s
                }
            }
        }
    };
    let (examples, skipped) = prepare::<f64>(&data, &cfg.preprocess);
    let (evals, more) = evaluate_examples(&cfg.arch, &params, &examples);
    let mut all_skipped = skipped.clone();
    all_skipped.extend(more);
    let mut report = aggregate(&evals, all_skipped)?;
    report.config_hash = Some(cfg.hash());
    metrics::write_report(&out.join("eval_report.json"), &report)?;

    let mut base = aggregate(&baseline_evals(&examples)?, skipped)?;
    base.config_hash = Some(cfg.hash());
    metrics::write_report(&out.join("baseline_report.json"), &base)?;

    if per_scenario {
        metrics::write_per_scenario_csv(&out.join("per_scenario.csv"), &evals)?;
    }
    let k = report.modes.min(16);
    println!(
        "{} scenarios ({} skipped): minADE@{k} {:.4} m, minFDE@{k} {:.4} m, baseline ADE {:.4} m, miss@2m {:.3}",
        report.n_scenarios,
        report.n_skipped,
        report.min_ade_at_k.get(&k).copied().unwrap_or(f64::NAN),
        report.min_fde_at_k.get(&k).copied().unwrap_or(f64::NAN),
        report.baseline_ade,
        report.miss_at_2m
    );
    Ok(())
}

fn cmd_predict(cfg: &RunConfig, out: &Path, checkpoint: &Path, scenarios: &Path) -> Result<()> {
    let params = load_params(cfg, checkpoint)?;
    let data = read_jsonl(scenarios)?;
    let hash = cfg.hash();
    let lines: Vec<String> = data
        .par_iter()
        .map(|s| {
            let ex = build_example(s, &cfg.preprocess).map_err(|e| Error::InvalidInput(format!("scenario {}: {e}", s.id)))?;
            let modes = cfg.arch.forward_example(&params, &ex)?;
            let ranked: Vec<_> = modes
                .ranking()
                .into_iter()
                .map(|m| {
                    let lane = &modes.trajectories[m];
                    let world: Vec<[f64; 2]> = lane.iter().map(|p| ex.frame.point_to_world(*p)).collect();
                    json!({
                        "mode": m,
                        "confidence": modes.confidences[m],
                        "lane": lane,
                        "world": world,
                    })
                })
                .collect();
            let baseline_world: Vec<[f64; 2]> = ex.baseline.iter().map(|p| ex.frame.point_to_world(*p)).collect();
            let line = json!({
                "id": s.id,
                "config_hash": hash,
                "branch": ex.branch.as_str(),
                "lane_yaw": ex.frame.yaw(),
                "scale": ex.frame.scale(),
                "origin": ex.frame.origin(),
                "baseline_world": baseline_world,
                "modes": ranked,
            });
            Ok(line.to_string())
        })
        .collect::<Result<_>>()?;
    let path = out.join("predictions.jsonl");
    let file = File::create(&path).map_err(|e| io_err(&path, e))?;
    let mut w = BufWriter::new(file);
    for l in &lines {
        writeln!(w, "{l}").map_err(|e| io_err(&path, e))?;
    }
    w.flush().map_err(|e| io_err(&path, e))?;
    println!("wrote {} predictions to {}", lines.len(), path.display());
    Ok(())
}

fn cmd_export_plots(out: &Path, log: Option<&Path>, reports: &[String]) -> Result<()> {
    if log.is_none() && reports.is_empty() {
        return Err(Error::InvalidArgument("export-plots needs --log and/or --report".into()));
    }
    let log = log.map(TrainLog::read_file).transpose()?;
    let reports: Vec<(String, EvalReport)> = reports
        .iter()
        .map(|spec| {
            let (label, path) = spec
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("--report expects LABEL=PATH, got `{spec}`")))?;
            Ok((label.to_string(), metrics::read_report(Path::new(path))?))
        })
        .collect::<Result<_>>()?;
    for table in plots::export(log.as_ref(), &reports) {
        let path = table.write(out)?;
        println!("{} ({} rows)", path.display(), table.rows.len());
    }
    Ok(())
}
