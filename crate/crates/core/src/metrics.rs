//! Multi-modal displacement, ranking and calibration metrics, reported in meters.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Architecture;
use crate::qdecoder::{rank_by_confidence, ModeSet};
use crate::real::Real;
use crate::scenario::{build_example, Example, PreprocessConfig, Scenario, DT};

/// `K` values reported for top-K metrics (clipped to the mode count).
pub const REPORT_KS: [usize; 4] = [1, 5, 10, 16];
/// Distance thresholds in meters.
pub const THRESHOLDS_M: [f64; 2] = [2.0, 4.0];
/// Recall horizons as step counts (1.0 s and 2.0 s at 10 Hz).
pub const HORIZON_STEPS: [usize; 2] = [10, 20];
pub const PERCENTILES: [f64; 4] = [50.0, 90.0, 95.0, 99.0];
pub const ECE_BINS: usize = 10;
/// Threshold for Hit@1, calibration and the AP stand-in.
pub const HIT_THRESHOLD_M: f64 = 2.0;

/// How the `K` candidate modes are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ranking {
    /// The `K` most confident modes.
    Confidence,
    /// The `K` modes with the smallest error of the quantity being minimized.
    Oracle,
}

/// Per-scenario displacement table in meters.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioEval {
    pub id: String,
    /// `disp[m][t]`: distance of mode `m` to ground truth at step `t + 1`.
    pub disp: Vec<Vec<f64>>,
    pub ade: Vec<f64>,
    pub fde: Vec<f64>,
    pub confidences: Vec<f64>,
    /// Mode indices by descending confidence.
    pub ranking: Vec<usize>,
    pub baseline_ade: f64,
    pub baseline_fde: f64,
}

fn displacements<R: Real>(traj: &[[R; 2]], gt: &[[R; 2]], scale: f64) -> Vec<f64> {
    traj.iter()
        .zip(gt)
        .map(|(p, g)| (p[0] - g[0]).as_f64().hypot((p[1] - g[1]).as_f64()) * scale)
        .collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x < v[best] {
            best = i;
        }
    }
    best
}

impl ScenarioEval {
    /// `scale` converts normalized units to meters.
    pub fn from_modes<R: Real>(
        id: &str,
        modes: &ModeSet<R>,
        gt: &[[R; 2]],
        baseline: &[[R; 2]],
        scale: f64,
    ) -> Result<Self> {
        if modes.is_empty() || gt.is_empty() {
            return Err(Error::invalid_input(format!("scenario {id}: no modes or empty ground truth")));
        }
        if modes.trajectories.iter().any(|t| t.len() != gt.len()) || baseline.len() != gt.len() {
            return Err(Error::invalid_input(format!("scenario {id}: horizon mismatch")));
        }
        let disp: Vec<Vec<f64>> = modes
            .trajectories
            .iter()
            .map(|t| displacements(t, gt, scale))
            .collect();
        let base = displacements(baseline, gt, scale);
        let confidences: Vec<f64> = modes.confidences.iter().map(|c| c.as_f64()).collect();
        Ok(Self {
            id: id.to_string(),
            ade: disp.iter().map(|d| mean(d)).collect(),
            fde: disp.iter().map(|d| *d.last().unwrap()).collect(),
            ranking: rank_by_confidence(&confidences),
            confidences,
            disp,
            baseline_ade: mean(&base),
            baseline_fde: *base.last().unwrap(),
        })
    }

    pub fn modes(&self) -> usize {
        self.ade.len()
    }

    pub fn horizon(&self) -> usize {
        self.disp[0].len()
    }

    /// Mode with the smallest ADE, ties to the lower index.
    pub fn best_mode(&self) -> usize {
        argmin(&self.ade)
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.modes() {
            return Err(Error::invalid_argument(format!(
                "K = {k} outside 1..={}",
                self.modes()
            )));
        }
        Ok(())
    }

    /// `(minADE, minFDE)` over `K` candidates; the two minimize independently.
    pub fn min_displacement(&self, k: usize, ranking: Ranking) -> Result<(f64, f64)> {
        self.check_k(k)?;
        Ok(match ranking {
            Ranking::Confidence => {
                let top = &self.ranking[..k];
                (
                    top.iter().map(|&m| self.ade[m]).fold(f64::INFINITY, f64::min),
                    top.iter().map(|&m| self.fde[m]).fold(f64::INFINITY, f64::min),
                )
            }
            Ranking::Oracle => (k_smallest_min(&self.ade, k), k_smallest_min(&self.fde, k)),
        })
    }

    /// Whether any of the top-`k` confident modes is within `threshold` at `step` (1-based).
    pub fn hit(&self, k: usize, threshold: f64, step: usize) -> Result<bool> {
        self.check_k(k)?;
        if step == 0 || step > self.horizon() {
            return Err(Error::invalid_argument(format!("horizon step {step} outside 1..={}", self.horizon())));
        }
        Ok(self.ranking[..k].iter().any(|&m| self.disp[m][step - 1] <= threshold))
    }

    pub fn oracle_in_top_k(&self, k: usize) -> Result<bool> {
        self.check_k(k)?;
        Ok(self.ranking[..k].contains(&self.best_mode()))
    }

    pub fn min_fde_all(&self) -> f64 {
        self.fde.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Minimum of the `k` smallest values, which is the overall minimum for any `k >= 1`.
fn k_smallest_min(values: &[f64], k: usize) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted[..k].iter().copied().fold(f64::INFINITY, f64::min)
}

fn rate(evals: &[ScenarioEval], mut pred: impl FnMut(&ScenarioEval) -> Result<bool>) -> Result<f64> {
    if evals.is_empty() {
        return Err(Error::invalid_input("no scenarios to aggregate"));
    }
    let mut hits = 0usize;
    for e in evals {
        if pred(e)? {
            hits += 1;
        }
    }
    Ok(hits as f64 / evals.len() as f64)
}

/// Fraction of scenarios whose best final displacement over all modes exceeds `threshold`.
pub fn miss_rate(evals: &[ScenarioEval], threshold: f64) -> Result<f64> {
    if !(threshold > 0.0) {
        return Err(Error::invalid_argument(format!("threshold must be positive, got {threshold}")));
    }
    rate(evals, |e| Ok(e.min_fde_all() > threshold))
}

/// Recall@K: any of the top-`k` confident modes within `threshold` at `step`.
/// `k = 1` gives Hit@1.
pub fn hit_rate(evals: &[ScenarioEval], k: usize, threshold: f64, step: usize) -> Result<f64> {
    rate(evals, |e| e.hit(k, threshold, step))
}

pub fn oracle_in_top_k_rate(evals: &[ScenarioEval], k: usize) -> Result<f64> {
    rate(evals, |e| e.oracle_in_top_k(k))
}

/// Binned expected calibration error over `(confidence, correct)` pairs.
pub fn ece(pairs: &[(f64, bool)], n_bins: usize) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::invalid_input("ECE needs at least one prediction"));
    }
    if n_bins == 0 {
        return Err(Error::invalid_argument("ECE needs at least one bin"));
    }
    let mut count = vec![0usize; n_bins];
    let mut conf = vec![0.0; n_bins];
    let mut correct = vec![0.0; n_bins];
    for &(c, ok) in pairs {
        let b = ((c.clamp(0.0, 1.0) * n_bins as f64) as usize).min(n_bins - 1);
        count[b] += 1;
        conf[b] += c;
        if ok {
            correct[b] += 1.0;
        }
    }
    let n = pairs.len() as f64;
    Ok((0..n_bins)
        .filter(|&b| count[b] > 0)
        .map(|b| {
            let m = count[b] as f64;
            (m / n) * (correct[b] / m - conf[b] / m).abs()
        })
        .sum())
}

/// Nearest-rank percentile, `0 < p < 100`.
pub fn percentile(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid_input("percentile of an empty sample"));
    }
    if !(p > 0.0 && p < 100.0) {
        return Err(Error::invalid_argument(format!("percentile {p} outside (0, 100)")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    Ok(sorted[rank.clamp(1, sorted.len()) - 1])
}

/// Area under the precision-recall curve from sweeping a confidence threshold over
/// every `(scenario, mode)` pair, a mode counting as positive when its final
/// displacement is within `threshold`. Not a reproduction of any published mAP protocol.
pub fn ap_proxy(evals: &[ScenarioEval], threshold: f64) -> f64 {
    let mut items: Vec<(f64, bool)> = evals
        .iter()
        .flat_map(|e| e.confidences.iter().zip(&e.fde).map(|(&c, &f)| (c, f <= threshold)))
        .collect();
    let positives = items.iter().filter(|(_, hit)| *hit).count();
    if positives == 0 {
        return 0.0;
    }
    items.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut tp = 0usize;
    let mut ap = 0.0;
    for (i, (_, hit)) in items.iter().enumerate() {
        if *hit {
            tp += 1;
            ap += tp as f64 / (i + 1) as f64;
        }
    }
    ap / positives as f64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub id: String,
    pub reason: String,
}

/// Aggregated metrics over an evaluation split. Distances in meters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n_scenarios: usize,
    pub n_skipped: usize,
    pub skipped: Vec<SkipRecord>,
    pub modes: usize,
    pub min_ade_at_k: BTreeMap<usize, f64>,
    pub min_fde_at_k: BTreeMap<usize, f64>,
    pub best_k_ade: BTreeMap<usize, f64>,
    pub best_k_fde: BTreeMap<usize, f64>,
    pub miss_at_2m: f64,
    pub miss_at_4m: f64,
    pub hit_at_1: f64,
    pub oracle_in_top_k: BTreeMap<usize, f64>,
    /// Keys `k{K}_{threshold}m_{horizon}s`.
    pub recall: BTreeMap<String, f64>,
    /// Keys `p50`, `p90`, `p95`, `p99` over per-scenario best-of-M ADE.
    pub percentile_ade: BTreeMap<String, f64>,
    pub ece: f64,
    pub baseline_ade: f64,
    pub baseline_fde: f64,
    pub ap_proxy: f64,
    /// Fields that are documented stand-ins rather than established definitions.
    pub approximate_metrics: Vec<String>,
    #[serde(default)]
    pub config_hash: Option<String>,
}

pub fn recall_key(k: usize, threshold: f64, step: usize) -> String {
    format!("k{k}_{}m_{:.1}s", threshold, step as f64 * DT)
}

/// The `K` values reported for `modes` modes.
pub fn report_ks(modes: usize) -> Vec<usize> {
    let mut ks: Vec<usize> = REPORT_KS.iter().copied().filter(|&k| k <= modes).collect();
    if !ks.contains(&modes) {
        ks.push(modes);
    }
    ks
}

/// Averages per-scenario results into a report.
pub fn aggregate(evals: &[ScenarioEval], skipped: Vec<SkipRecord>) -> Result<EvalReport> {
    if evals.is_empty() {
        return Err(Error::invalid_input("no scenarios evaluated"));
    }
    let modes = evals.iter().map(ScenarioEval::modes).min().unwrap();
    let horizon = evals.iter().map(ScenarioEval::horizon).min().unwrap();
    let n = evals.len() as f64;
    let ks = report_ks(modes);

    let mut min_ade_at_k = BTreeMap::new();
    let mut min_fde_at_k = BTreeMap::new();
    let mut best_k_ade = BTreeMap::new();
    let mut best_k_fde = BTreeMap::new();
    let mut oracle_in_top_k = BTreeMap::new();
    for &k in &ks {
        let (mut a, mut f, mut ba, mut bf) = (0.0, 0.0, 0.0, 0.0);
        for e in evals {
            let (ade, fde) = e.min_displacement(k, Ranking::Confidence)?;
            let (bade, bfde) = e.min_displacement(k, Ranking::Oracle)?;
            a += ade;
            f += fde;
            ba += bade;
            bf += bfde;
        }
        min_ade_at_k.insert(k, a / n);
        min_fde_at_k.insert(k, f / n);
        best_k_ade.insert(k, ba / n);
        best_k_fde.insert(k, bf / n);
        oracle_in_top_k.insert(k, oracle_in_top_k_rate(evals, k)?);
    }

    let mut recall = BTreeMap::new();
    for &k in &ks {
        for &thr in &THRESHOLDS_M {
            for &step in HORIZON_STEPS.iter().filter(|&&s| s <= horizon) {
                recall.insert(recall_key(k, thr, step), hit_rate(evals, k, thr, step)?);
            }
        }
    }

    let best_ades: Vec<f64> = evals.iter().map(|e| e.ade[e.best_mode()]).collect();
    let mut percentile_ade = BTreeMap::new();
    for p in PERCENTILES {
        percentile_ade.insert(format!("p{p:.0}"), percentile(&best_ades, p)?);
    }

    let calib: Vec<(f64, bool)> = evals
        .iter()
        .map(|e| Ok((e.confidences[e.ranking[0]], e.hit(1, HIT_THRESHOLD_M, e.horizon())?)))
        .collect::<Result<_>>()?;

    Ok(EvalReport {
        n_scenarios: evals.len(),
        n_skipped: skipped.len(),
        skipped,
        modes,
        min_ade_at_k,
        min_fde_at_k,
        best_k_ade,
        best_k_fde,
        miss_at_2m: miss_rate(evals, 2.0)?,
        miss_at_4m: miss_rate(evals, 4.0)?,
        hit_at_1: rate(evals, |e| e.hit(1, HIT_THRESHOLD_M, e.horizon()))?,
        oracle_in_top_k,
        recall,
        percentile_ade,
        ece: ece(&calib, ECE_BINS)?,
        baseline_ade: evals.iter().map(|e| e.baseline_ade).sum::<f64>() / n,
        baseline_fde: evals.iter().map(|e| e.baseline_fde).sum::<f64>() / n,
        ap_proxy: ap_proxy(evals, HIT_THRESHOLD_M),
        approximate_metrics: vec!["ap_proxy".to_string()],
        config_hash: None,
    })
}

/// Runs the model on each example. Failing examples become skip records.
pub fn evaluate_examples<R: Real>(
    arch: &Architecture,
    params: &[R],
    examples: &[Example<R>],
) -> (Vec<ScenarioEval>, Vec<SkipRecord>) {
    let results: Vec<Result<ScenarioEval>> = examples
        .par_iter()
        .map(|ex| {
            let modes = arch.forward_example(params, ex)?;
            ScenarioEval::from_modes(&ex.id, &modes, &ex.future, &ex.baseline, ex.scale())
        })
        .collect();
    let mut evals = Vec::with_capacity(results.len());
    let mut skipped = Vec::new();
    for (ex, r) in examples.iter().zip(results) {
        match r {
            Ok(e) => evals.push(e),
            Err(err) => skipped.push(SkipRecord {
                id: ex.id.clone(),
                reason: err.to_string(),
            }),
        }
    }
    (evals, skipped)
}

/// Scores the baseline alone, as a single mode with confidence 1.
pub fn baseline_evals<R: Real>(examples: &[Example<R>]) -> Result<Vec<ScenarioEval>> {
    examples
        .iter()
        .map(|ex| {
            let modes = ModeSet {
                trajectories: vec![ex.baseline.clone()],
                residuals: vec![vec![[R::zero(); 2]; ex.horizon()]],
                confidences: vec![R::one()],
            };
            ScenarioEval::from_modes(&ex.id, &modes, &ex.future, &ex.baseline, ex.scale())
        })
        .collect()
}

/// Preprocesses scenarios; failures become skip records.
pub fn prepare<R: Real>(scenarios: &[Scenario], preprocess: &PreprocessConfig) -> (Vec<Example<R>>, Vec<SkipRecord>) {
    let mut skipped = Vec::new();
    let mut examples = Vec::with_capacity(scenarios.len());
    for s in scenarios {
        match build_example(s, preprocess) {
            Ok(ex) => examples.push(ex.cast::<R>()),
            Err(err) => skipped.push(SkipRecord {
                id: s.id.clone(),
                reason: err.to_string(),
            }),
        }
    }
    (examples, skipped)
}

/// Preprocesses and evaluates raw scenarios.
pub fn evaluate<R: Real>(
    arch: &Architecture,
    params: &[R],
    scenarios: &[Scenario],
    preprocess: &PreprocessConfig,
) -> Result<(EvalReport, Vec<ScenarioEval>)> {
    let (examples, mut skipped) = prepare::<R>(scenarios, preprocess);
    let (evals, more) = evaluate_examples(arch, params, &examples);
    skipped.extend(more);
    let report = aggregate(&evals, skipped)?;
    Ok((report, evals))
}

/// Per-scenario dump: one row per `(scenario, mode)`.
pub fn write_per_scenario_csv(path: &Path, evals: &[ScenarioEval]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record([
        "id",
        "mode",
        "confidence",
        "rank",
        "ade",
        "fde",
        "disp_1s",
        "baseline_ade",
        "baseline_fde",
    ])?;
    for e in evals {
        let mut rank = vec![0usize; e.modes()];
        for (r, &m) in e.ranking.iter().enumerate() {
            rank[m] = r + 1;
        }
        let step_1s = HORIZON_STEPS[0].min(e.horizon());
        for m in 0..e.modes() {
            w.write_record([
                e.id.clone(),
                m.to_string(),
                e.confidences[m].to_string(),
                rank[m].to_string(),
                e.ade[m].to_string(),
                e.fde[m].to_string(),
                e.disp[m][step_1s - 1].to_string(),
                e.baseline_ade.to_string(),
                e.baseline_fde.to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Pretty JSON with a trailing newline; byte-stable for identical reports.
pub fn report_to_json(report: &EvalReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn write_report(path: &Path, report: &EvalReport) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(report_to_json(report).as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn read_report(path: &Path) -> Result<EvalReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Modes with constant lateral offsets (meters, scale 1) against a straight truth.
    fn offset_eval(offsets: &[f64], confidences: &[f64]) -> ScenarioEval {
        let gt: Vec<[f64; 2]> = (1..=20).map(|t| [t as f64, 0.0]).collect();
        let residuals: Vec<Vec<[f64; 2]>> = offsets.iter().map(|&o| vec![[0.0, o]; 20]).collect();
        let trajectories = residuals
            .iter()
            .map(|r| r.iter().zip(&gt).map(|(a, g)| [g[0] + a[0], g[1] + a[1]]).collect())
            .collect();
        let modes = ModeSet {
            trajectories,
            residuals,
            confidences: confidences.to_vec(),
        };
        ScenarioEval::from_modes("s", &modes, &gt, &gt, 1.0).unwrap()
    }

    #[test]
    fn exact_mode_gives_zero() {
        let e = offset_eval(&[3.0, 0.0, 1.0], &[0.5, 0.2, 0.3]);
        assert_eq!(e.min_displacement(3, Ranking::Confidence).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn top1_is_most_confident_mode() {
        let e = offset_eval(&[3.0, 0.5, 1.0], &[0.5, 0.2, 0.3]);
        assert_eq!(e.min_displacement(1, Ranking::Confidence).unwrap(), (3.0, 3.0));
    }

    #[test]
    fn confidence_vs_oracle_ranking() {
        let e = offset_eval(&[1.0, 2.0, 3.0], &[0.2, 0.5, 0.3]);
        assert_eq!(e.min_displacement(2, Ranking::Confidence).unwrap(), (2.0, 2.0));
        assert_eq!(e.min_displacement(2, Ranking::Oracle).unwrap(), (1.0, 1.0));
        assert!(e.min_displacement(0, Ranking::Oracle).is_err());
        assert!(e.min_displacement(4, Ranking::Confidence).is_err());
    }

    #[test]
    fn miss_rate_counts() {
        let close = offset_eval(&[1.9, 5.0], &[0.5, 0.5]);
        let far = offset_eval(&[5.0, 5.0], &[0.5, 0.5]);
        assert_eq!(miss_rate(&[close.clone(), close.clone()], 2.0).unwrap(), 0.0);
        assert_eq!(miss_rate(std::slice::from_ref(&far), 4.0).unwrap(), 1.0);
        let mut mixed = vec![close; 7];
        mixed.extend(vec![far; 3]);
        assert!((miss_rate(&mixed, 2.0).unwrap() - 0.3).abs() < 1e-15);
        assert!(miss_rate(&mixed, 0.0).is_err());
    }

    #[test]
    fn hit_and_recall_fixture() {
        // four scenarios, two modes each; mode confidences decide the top-1
        let evals = vec![
            offset_eval(&[1.0, 3.0], &[0.6, 0.4]), // top mode hits at 2 m
            offset_eval(&[3.0, 1.0], &[0.6, 0.4]), // only the second mode hits
            offset_eval(&[5.0, 6.0], &[0.6, 0.4]), // nothing within 2 m or 4 m
            offset_eval(&[3.5, 0.5], &[0.4, 0.6]), // top mode is the close one
        ];
        assert_eq!(hit_rate(&evals, 1, 2.0, 20).unwrap(), 0.5);
        assert_eq!(hit_rate(&evals, 2, 2.0, 20).unwrap(), 0.75);
        assert_eq!(hit_rate(&evals, 1, 4.0, 10).unwrap(), 0.75);
        assert_eq!(oracle_in_top_k_rate(&evals, 1).unwrap(), 0.75);
        assert_eq!(oracle_in_top_k_rate(&evals, 2).unwrap(), 1.0);
    }

    #[test]
    fn ece_cases() {
        assert_eq!(ece(&[(1.0, true); 5], 10).unwrap(), 0.0);
        assert_eq!(ece(&[(1.0, false); 5], 10).unwrap(), 1.0);
        // bin [0.2,0.3): conf 0.25 x2, one hit -> |0.5 - 0.25| weight 0.5
        // bin [0.8,0.9): conf 0.85 x2, both hit -> |1 - 0.85| weight 0.5
        let v = ece(&[(0.25, true), (0.25, false), (0.85, true), (0.85, true)], 10).unwrap();
        assert!((v - (0.5 * 0.25 + 0.5 * 0.15)).abs() < 1e-12);
        assert!(ece(&[], 10).is_err());
    }

    #[test]
    fn percentile_nearest_rank() {
        assert_eq!(percentile(&[3.3; 7], 90.0).unwrap(), 3.3);
        let v: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(percentile(&v, 50.0).unwrap(), 50.0);
        assert_eq!(percentile(&v, 99.0).unwrap(), 99.0);
        assert!(percentile(&[], 50.0).is_err());
        assert!(percentile(&v, 100.0).is_err());
    }

    #[test]
    fn ap_proxy_perfect_ranking() {
        let e = offset_eval(&[1.0, 5.0], &[0.9, 0.1]);
        assert_eq!(ap_proxy(&[e], 2.0), 1.0);
        let e = offset_eval(&[5.0, 1.0], &[0.9, 0.1]);
        assert_eq!(ap_proxy(&[e], 2.0), 0.5);
    }

    #[test]
    fn report_keys() {
        assert_eq!(recall_key(16, 2.0, 20), "k16_2m_2.0s");
        assert_eq!(recall_key(5, 4.0, 10), "k5_4m_1.0s");
        assert_eq!(report_ks(16), vec![1, 5, 10, 16]);
        assert_eq!(report_ks(12), vec![1, 5, 10, 12]);
    }

    #[test]
    fn single_scenario_report_equals_its_values() {
        let e = offset_eval(&[1.0, 2.5, 0.7, 3.0, 1.2, 0.9, 2.2, 4.0, 1.1], &[0.2, 0.1, 0.05, 0.05, 0.1, 0.1, 0.2, 0.1, 0.1]);
        let r = aggregate(std::slice::from_ref(&e), vec![]).unwrap();
        assert_eq!(r.n_scenarios, 1);
        assert_eq!(r.min_ade_at_k[&1], e.min_displacement(1, Ranking::Confidence).unwrap().0);
        assert!((r.best_k_ade[&9] - 0.7).abs() < 1e-12);
        assert_eq!(r.percentile_ade["p50"], r.best_k_ade[&9]);
        assert_eq!(r.baseline_ade, 0.0);
    }
}
