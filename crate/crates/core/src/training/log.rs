use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight of the newest epoch in the smoothed training loss.
pub const SMOOTHING: f64 = 0.3;

/// One row of the training log. Distances in meters.
///
/// The `k16` columns hold the largest reported `K`, which is the mode count when
/// fewer than 16 modes are configured.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss_mean: f64,
    pub train_loss_smoothed: f64,
    pub val_min_ade_k1: f64,
    pub val_min_fde_k1: f64,
    pub val_min_ade_k5: f64,
    pub val_min_fde_k5: f64,
    pub val_min_ade_k10: f64,
    pub val_min_fde_k10: f64,
    pub val_min_ade_k16: f64,
    pub val_min_fde_k16: f64,
    /// Oracle best-of-all-modes ADE.
    pub val_best_ade: f64,
    pub val_baseline_ade: f64,
    pub val_miss_2m: f64,
    pub val_miss_4m: f64,
    pub val_hit_at_1: f64,
    pub best_so_far_val_ade: f64,
    pub checkpoint: String,
}

pub const COLUMNS: [&str; 18] = [
    "epoch",
    "train_loss_mean",
    "train_loss_smoothed",
    "val_min_ade_k1",
    "val_min_fde_k1",
    "val_min_ade_k5",
    "val_min_fde_k5",
    "val_min_ade_k10",
    "val_min_fde_k10",
    "val_min_ade_k16",
    "val_min_fde_k16",
    "val_best_ade",
    "val_baseline_ade",
    "val_miss_2m",
    "val_miss_4m",
    "val_hit_at_1",
    "best_so_far_val_ade",
    "checkpoint",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainLog {
    pub records: Vec<EpochRecord>,
}

impl TrainLog {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&EpochRecord> {
        self.records.last()
    }

    /// Epoch with the lowest validation minADE over all modes; ties to the earliest.
    pub fn best_epoch(&self) -> Option<usize> {
        let mut best: Option<&EpochRecord> = None;
        for r in &self.records {
            if best.is_none_or(|b| r.val_min_ade_k16 < b.val_min_ade_k16) {
                best = Some(r);
            }
        }
        best.map(|r| r.epoch)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(COLUMNS)?;
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush().map_err(|e| Error::io("<train log>", e))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Parses a log, naming the first missing column on schema errors.
    pub fn read_csv<Rd: Read>(input: Rd) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr.headers()?.clone();
        for col in COLUMNS {
            if !headers.iter().any(|h| h == col) {
                return Err(Error::Schema(format!("train log is missing column `{col}`")));
            }
        }
        let records = rdr.deserialize().collect::<std::result::Result<Vec<EpochRecord>, _>>()?;
        Ok(Self { records })
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(f)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(f)
    }
}

/// Exponential moving average of per-epoch means, seeded with the first value.
pub fn smooth(previous: Option<f64>, mean: f64) -> f64 {
    match previous {
        None => mean,
        Some(p) => SMOOTHING * mean + (1.0 - SMOOTHING) * p,
    }
}
