//! Flat `key = value` run configuration with layered overrides and a content hash.
//!
//! Precedence is command-line flags, then `--set key=value` pairs, then the config
//! file, then built-in defaults. The hash covers every key that can change an
//! output byte, so `workers` is excluded.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::Architecture;
use crate::scenario::{read_jsonl, synth_generate, PreprocessConfig, Scenario, SynthConfig};
use crate::training::SpsaConfig;

/// Where scenarios come from.
#[derive(Clone, Debug, PartialEq)]
pub enum DataSource {
    File(PathBuf),
    /// `synthetic:count=N,seed=S,straight=w,turn=w,lane_change=w,brake=w`; omitted keys use defaults.
    Synthetic { count: usize, seed: u64, mix: [f64; 4] },
}

impl DataSource {
    pub fn parse(spec: &str) -> Result<Self> {
        let Some(rest) = spec.strip_prefix("synthetic:").or(if spec == "synthetic" { Some("") } else { None }) else {
            if spec.is_empty() {
                return Err(Error::invalid_argument("empty data source"));
            }
            return Ok(DataSource::File(PathBuf::from(spec)));
        };
        let defaults = SynthConfig::default();
        let (mut count, mut seed, mut mix) = (defaults.count, 0u64, defaults.mix);
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::invalid_argument(format!("synthetic source: expected key=value, got `{part}`")))?;
            let bad = |e: &dyn std::fmt::Display| Error::invalid_argument(format!("synthetic source {k}: {e}"));
            match k.trim() {
                "count" => count = v.trim().parse().map_err(|e| bad(&e))?,
                "seed" => seed = v.trim().parse().map_err(|e| bad(&e))?,
                name => {
                    let idx = ["straight", "turn", "lane_change", "brake"]
                        .iter()
                        .position(|m| *m == name)
                        .ok_or_else(|| Error::invalid_argument(format!("synthetic source: unknown key `{name}`")))?;
                    mix[idx] = v.trim().parse().map_err(|e| bad(&e))?;
                }
            }
        }
        Ok(DataSource::Synthetic { count, seed, mix })
    }

    /// Canonical spec string; `parse(to_spec())` is the identity.
    pub fn to_spec(&self) -> String {
        match self {
            DataSource::File(p) => p.display().to_string(),
            DataSource::Synthetic { count, seed, mix } => format!(
                "synthetic:count={count},seed={seed},straight={:?},turn={:?},lane_change={:?},brake={:?}",
                mix[0], mix[1], mix[2], mix[3]
            ),
        }
    }

    pub fn load(&self) -> Result<Vec<Scenario>> {
        match self {
            DataSource::File(p) => read_jsonl(p),
            DataSource::Synthetic { count, seed, mix } => synth_generate(
                &SynthConfig {
                    count: *count,
                    mix: *mix,
                    ..Default::default()
                },
                *seed,
            ),
        }
    }
}

/// Fully resolved run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub arch: Architecture,
    pub spsa: SpsaConfig,
    pub preprocess: PreprocessConfig,
    pub data: DataSource,
    /// Separate validation source; when absent the tail of `data` is held out.
    pub val_data: Option<DataSource>,
    pub val_fraction: f64,
    pub synth_count: usize,
    pub synth_mix: [f64; 4],
    /// Rayon threads; 0 uses all cores.
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let synth = SynthConfig::default();
        Self {
            arch: Architecture::default(),
            spsa: SpsaConfig::default(),
            preprocess: PreprocessConfig::default(),
            data: DataSource::Synthetic {
                count: synth.count,
                seed: 0,
                mix: synth.mix,
            },
            val_data: None,
            val_fraction: 0.2,
            synth_count: synth.count,
            synth_mix: synth.mix,
            workers: 0,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::invalid_argument(format!("{key} = `{value}`: {e}")))
}

fn mix_list(key: &str, value: &str) -> Result<[f64; 4]> {
    let parts: Vec<f64> = value.split(',').map(|p| num(key, p.trim())).collect::<Result<_>>()?;
    parts
        .try_into()
        .map_err(|_| Error::invalid_argument(format!("{key} needs four comma-separated weights")))
}

impl RunConfig {
    /// Every recognized key.
    pub const KEYS: [&'static str; 27] = [
        "a",
        "alpha",
        "attn_layers",
        "batch_size",
        "batches_per_epoch",
        "big_a",
        "c",
        "data",
        "epochs",
        "ff_layers",
        "fourier_order",
        "gamma",
        "grad_averages",
        "init_std",
        "lambda",
        "lane_radius",
        "min_speed",
        "modes",
        "residual_scale",
        "scale",
        "seed",
        "synth_count",
        "synth_mix",
        "val_data",
        "val_fraction",
        "workers",
        "horizon",
    ];

    pub fn seed(&self) -> u64 {
        self.spsa.seed
    }

    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "a" => self.spsa.a = num(key, v)?,
            "alpha" => self.spsa.alpha = num(key, v)?,
            "attn_layers" => self.arch.attn_layers = num(key, v)?,
            "batch_size" => self.spsa.batch_size = num(key, v)?,
            "batches_per_epoch" => self.spsa.batches_per_epoch = num(key, v)?,
            "big_a" => self.spsa.big_a = num(key, v)?,
            "c" => self.spsa.c = num(key, v)?,
            "data" => self.data = DataSource::parse(v)?,
            "epochs" => self.spsa.epochs = num(key, v)?,
            "ff_layers" => self.arch.ff_layers = num(key, v)?,
            "fourier_order" => self.arch.decoder.fourier_order = num(key, v)?,
            "gamma" => self.spsa.gamma_exp = num(key, v)?,
            "grad_averages" => self.spsa.grad_averages = num(key, v)?,
            "horizon" => self.arch.horizon = num(key, v)?,
            "init_std" => self.spsa.init_std = num(key, v)?,
            "lambda" => self.spsa.lambda = num(key, v)?,
            "lane_radius" => self.preprocess.lane_radius = num(key, v)?,
            "min_speed" => self.preprocess.min_speed = num(key, v)?,
            "modes" => self.arch.decoder.modes = num(key, v)?,
            "residual_scale" => self.arch.decoder.residual_scale = num(key, v)?,
            "scale" => self.preprocess.scale = num(key, v)?,
            "seed" => self.spsa.seed = num(key, v)?,
            "synth_count" => self.synth_count = num(key, v)?,
            "synth_mix" => self.synth_mix = mix_list(key, v)?,
            "val_data" => self.val_data = if v.is_empty() { None } else { Some(DataSource::parse(v)?) },
            "val_fraction" => self.val_fraction = num(key, v)?,
            "workers" => self.workers = num(key, v)?,
            other => return Err(Error::invalid_argument(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a `key=value` pair as given to `--set`.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::invalid_argument(format!("expected key=value, got `{pair}`")))?;
        self.set(k, v)
    }

    /// Applies the contents of a config file. `#` starts a comment.
    pub fn apply_text(&mut self, text: &str, path: &Path) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message,
            };
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key = value, got `{line}`")))?;
            self.set(k, v).map_err(|e| parse_err(e.to_string()))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_text(&text, path)
    }

    /// Defaults, then `file`, then `sets` in order.
    pub fn resolve(file: Option<&Path>, sets: &[String]) -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(p) = file {
            cfg.apply_file(p)?;
        }
        for s in sets {
            cfg.set_pair(s)?;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.arch.validate()?;
        self.spsa.validate()?;
        if !(self.val_fraction > 0.0 && self.val_fraction < 1.0) {
            return Err(Error::invalid_argument(format!(
                "val_fraction must be in (0, 1), got {}",
                self.val_fraction
            )));
        }
        if !(self.preprocess.scale > 0.0 && self.preprocess.lane_radius > 0.0) {
            return Err(Error::invalid_argument("scale and lane_radius must be positive"));
        }
        Ok(())
    }

    /// Resolved values as text, keyed and sorted.
    pub fn entries(&self) -> BTreeMap<&'static str, String> {
        let f = |x: f64| format!("{x:?}");
        let s = &self.spsa;
        let m = self.synth_mix;
        BTreeMap::from([
            ("a", f(s.a)),
            ("alpha", f(s.alpha)),
            ("attn_layers", self.arch.attn_layers.to_string()),
            ("batch_size", s.batch_size.to_string()),
            ("batches_per_epoch", s.batches_per_epoch.to_string()),
            ("big_a", f(s.big_a)),
            ("c", f(s.c)),
            ("data", self.data.to_spec()),
            ("epochs", s.epochs.to_string()),
            ("ff_layers", self.arch.ff_layers.to_string()),
            ("fourier_order", self.arch.decoder.fourier_order.to_string()),
            ("gamma", f(s.gamma_exp)),
            ("grad_averages", s.grad_averages.to_string()),
            ("horizon", self.arch.horizon.to_string()),
            ("init_std", f(s.init_std)),
            ("lambda", f(s.lambda)),
            ("lane_radius", f(self.preprocess.lane_radius)),
            ("min_speed", f(self.preprocess.min_speed)),
            ("modes", self.arch.decoder.modes.to_string()),
            ("residual_scale", f(self.arch.decoder.residual_scale)),
            ("scale", f(self.preprocess.scale)),
            ("seed", s.seed.to_string()),
            ("synth_count", self.synth_count.to_string()),
            ("synth_mix", format!("{:?},{:?},{:?},{:?}", m[0], m[1], m[2], m[3])),
            ("val_data", self.val_data.as_ref().map(DataSource::to_spec).unwrap_or_default()),
            ("val_fraction", f(self.val_fraction)),
            ("workers", self.workers.to_string()),
        ])
    }

    /// Canonical config file text; re-applying it reproduces `self`.
    pub fn to_text(&self) -> String {
        self.entries().iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// SHA-256 over the canonical entries, excluding `workers`.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in self.entries().iter().filter(|(k, _)| **k != "workers") {
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }

    /// Training and validation scenarios.
    pub fn load_splits(&self) -> Result<(Vec<Scenario>, Vec<Scenario>)> {
        let mut all = self.data.load()?;
        if let Some(v) = &self.val_data {
            return Ok((all, v.load()?));
        }
        if all.len() < 2 {
            return Err(Error::invalid_input(format!(
                "need at least 2 scenarios to hold out a validation split, got {}",
                all.len()
            )));
        }
        let n_val = ((all.len() as f64 * self.val_fraction).round() as usize).clamp(1, all.len() - 1);
        let val = all.split_off(all.len() - n_val);
        Ok((all, val))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_list_matches_entries() {
        let cfg = RunConfig::default();
        let mut keys: Vec<&str> = RunConfig::KEYS.to_vec();
        keys.sort();
        assert_eq!(cfg.entries().keys().copied().collect::<Vec<_>>(), keys);
    }

    #[test]
    fn text_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.set("epochs", "7").unwrap();
        cfg.set("data", "synthetic:count=12,seed=3,brake=0").unwrap();
        cfg.set("val_data", "held_out.jsonl").unwrap();
        let mut back = RunConfig::default();
        back.apply_text(&cfg.to_text(), Path::new("cfg")).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
    }

    #[test]
    fn precedence_and_comments() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# comment\nepochs = 3 # trailing\n\nbatch_size=4\n", Path::new("f")).unwrap();
        cfg.set_pair("epochs=5").unwrap();
        assert_eq!(cfg.spsa.epochs, 5);
        assert_eq!(cfg.spsa.batch_size, 4);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let mut cfg = RunConfig::default();
        let err = cfg.apply_text("epochs = 3\nbogus = 1\n", Path::new("f")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(cfg.apply_text("epochs 3\n", Path::new("f")).is_err());
        assert!(cfg.set("epochs", "many").is_err());
    }

    #[test]
    fn hash_ignores_workers_and_formatting() {
        let a = RunConfig::default();
        let mut b = RunConfig::default();
        b.set("workers", "3").unwrap();
        b.set("a", "0.050").unwrap();
        assert_eq!(a.hash(), b.hash());
        b.set("a", "0.06").unwrap();
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn synthetic_spec_round_trip() {
        let src = DataSource::parse("synthetic:count=5,turn=0.5").unwrap();
        assert_eq!(DataSource::parse(&src.to_spec()).unwrap(), src);
        assert!(DataSource::parse("synthetic:speed=3").is_err());
        assert_eq!(DataSource::parse("a.jsonl").unwrap(), DataSource::File("a.jsonl".into()));
    }

    #[test]
    fn holdout_split() {
        let mut cfg = RunConfig::default();
        cfg.set("data", "synthetic:count=10,seed=1").unwrap();
        let (train, val) = cfg.load_splits().unwrap();
        assert_eq!((train.len(), val.len()), (8, 2));
    }
}
