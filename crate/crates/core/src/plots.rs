//! Tidy CSV tables behind the standard figure families. No rendering.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::metrics::EvalReport;
use crate::training::TrainLog;

/// A named CSV table with string cells.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub const LOSS_CURVE: (&str, &[&str]) = ("loss_curve", &["epoch", "train_loss_mean", "train_loss_smoothed"]);
pub const ADE_FDE_VS_EPOCH: (&str, &[&str]) = (
    "ade_fde_vs_epoch",
    &["epoch", "k", "min_ade", "min_fde", "baseline_ade", "best_so_far_ade"],
);
pub const MISS_RATES: (&str, &[&str]) = ("miss_rates", &["label", "threshold_m", "miss_rate"]);
pub const MIN_VS_K: (&str, &[&str]) = ("min_vs_k", &["label", "k", "min_ade", "min_fde", "best_k_ade", "best_k_fde"]);
pub const PERCENTILES: (&str, &[&str]) = ("percentiles", &["label", "percentile", "best_ade"]);

pub const FAMILIES: [(&str, &[&str]); 5] = [LOSS_CURVE, ADE_FDE_VS_EPOCH, MISS_RATES, MIN_VS_K, PERCENTILES];

fn fmt(x: f64) -> String {
    format!("{x:?}")
}

impl Table {
    fn new(family: (&'static str, &[&str])) -> Self {
        Self {
            name: family.0,
            columns: family.1.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    /// Index of `column`, or a schema error naming it.
    pub fn column(&self, column: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == column)
            .ok_or_else(|| Error::Schema(format!("table {} is missing column `{column}`", self.name)))
    }

    /// Numeric values of one column.
    pub fn values(&self, column: &str) -> Result<Vec<f64>> {
        let i = self.column(column)?;
        self.rows
            .iter()
            .map(|r| {
                r[i].parse()
                    .map_err(|e| Error::Schema(format!("table {} column {column}: {e}", self.name)))
            })
            .collect()
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Schema(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    /// Parses a table of a known family, requiring every documented column.
    pub fn parse(family: (&'static str, &[&str]), text: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let columns: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        for c in family.1 {
            if !columns.iter().any(|h| h == c) {
                return Err(Error::Schema(format!("table {} is missing column `{c}`", family.0)));
            }
        }
        let rows = rdr
            .records()
            .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Self {
            name: family.0,
            columns,
            rows,
        })
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(self.file_name());
        std::fs::write(&path, self.to_csv_string()?).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

pub fn loss_curve(log: &TrainLog) -> Table {
    let mut t = Table::new(LOSS_CURVE);
    for r in &log.records {
        t.rows.push(vec![r.epoch.to_string(), fmt(r.train_loss_mean), fmt(r.train_loss_smoothed)]);
    }
    t
}

pub fn ade_fde_vs_epoch(log: &TrainLog) -> Table {
    let mut t = Table::new(ADE_FDE_VS_EPOCH);
    for r in &log.records {
        for (k, ade, fde) in [
            (1, r.val_min_ade_k1, r.val_min_fde_k1),
            (5, r.val_min_ade_k5, r.val_min_fde_k5),
            (10, r.val_min_ade_k10, r.val_min_fde_k10),
            (16, r.val_min_ade_k16, r.val_min_fde_k16),
        ] {
            t.rows.push(vec![
                r.epoch.to_string(),
                k.to_string(),
                fmt(ade),
                fmt(fde),
                fmt(r.val_baseline_ade),
                fmt(r.best_so_far_val_ade),
            ]);
        }
    }
    t
}

pub fn miss_rates(reports: &[(String, EvalReport)]) -> Table {
    let mut t = Table::new(MISS_RATES);
    for (label, r) in reports {
        for (thr, v) in [(2.0, r.miss_at_2m), (4.0, r.miss_at_4m)] {
            t.rows.push(vec![label.clone(), fmt(thr), fmt(v)]);
        }
    }
    t
}

pub fn min_vs_k(reports: &[(String, EvalReport)]) -> Table {
    let mut t = Table::new(MIN_VS_K);
    for (label, r) in reports {
        for (k, ade) in &r.min_ade_at_k {
            t.rows.push(vec![
                label.clone(),
                k.to_string(),
                fmt(*ade),
                fmt(r.min_fde_at_k[k]),
                fmt(r.best_k_ade[k]),
                fmt(r.best_k_fde[k]),
            ]);
        }
    }
    t
}

pub fn percentiles(reports: &[(String, EvalReport)]) -> Table {
    let mut t = Table::new(PERCENTILES);
    for (label, r) in reports {
        for (p, v) in &r.percentile_ade {
            t.rows.push(vec![label.clone(), p.trim_start_matches('p').to_string(), fmt(*v)]);
        }
    }
    t
}

/// All tables derivable from the given inputs.
pub fn export(log: Option<&TrainLog>, reports: &[(String, EvalReport)]) -> Vec<Table> {
    let mut tables = Vec::new();
    if let Some(log) = log {
        tables.push(loss_curve(log));
        tables.push(ade_fde_vs_epoch(log));
    }
    if !reports.is_empty() {
        tables.push(miss_rates(reports));
        tables.push(min_vs_k(reports));
        tables.push(percentiles(reports));
    }
    tables
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::training::EpochRecord;

    fn one_epoch() -> TrainLog {
        TrainLog {
            records: vec![EpochRecord {
                epoch: 1,
                train_loss_mean: 0.5,
                train_loss_smoothed: 0.5,
                val_min_ade_k1: 3.0,
                val_min_fde_k1: 6.0,
                val_min_ade_k5: 2.0,
                val_min_fde_k5: 4.0,
                val_min_ade_k10: 1.5,
                val_min_fde_k10: 3.0,
                val_min_ade_k16: 1.25,
                val_min_fde_k16: 2.5,
                val_best_ade: 1.25,
                val_baseline_ade: 1.4,
                val_miss_2m: 0.3,
                val_miss_4m: 0.1,
                val_hit_at_1: 0.2,
                best_so_far_val_ade: 1.25,
                checkpoint: "epoch_001.ckpt".into(),
            }],
        }
    }

    #[test]
    fn single_epoch_gives_single_row_loss_curve() {
        let t = loss_curve(&one_epoch());
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.values("train_loss_mean").unwrap(), vec![0.5]);
        assert_eq!(ade_fde_vs_epoch(&one_epoch()).rows.len(), 4);
    }

    #[test]
    fn parse_write_round_trip() {
        let t = ade_fde_vs_epoch(&one_epoch());
        let text = t.to_csv_string().unwrap();
        let back = Table::parse(ADE_FDE_VS_EPOCH, &text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_csv_string().unwrap(), text);
    }

    #[test]
    fn missing_column_named() {
        let err = Table::parse(LOSS_CURVE, "epoch,train_loss_mean\n1,0.5\n").unwrap_err();
        assert!(err.to_string().contains("train_loss_smoothed"));
    }
}
