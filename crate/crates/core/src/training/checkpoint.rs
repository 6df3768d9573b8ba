//! Text checkpoint: a `key=value` header followed by one angle per line.
//!
//! ```text
//! laneq-checkpoint
//! format_version=1
//! seed=0
//! epoch=12
//! config_hash=3f2a...
//! dim=1209
//! 0.0123
//! ...
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::real::Real;

pub const MAGIC: &str = "laneq-checkpoint";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub seed: u64,
    pub epoch: usize,
    pub config_hash: String,
    pub values: Vec<f64>,
}

impl Checkpoint {
    pub fn new<R: Real>(seed: u64, epoch: usize, config_hash: &str, values: &[R]) -> Self {
        Self {
            seed,
            epoch,
            config_hash: config_hash.to_string(),
            values: values.iter().map(|v| v.as_f64()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Values converted to `R`, checking the expected dimension.
    pub fn params<R: Real>(&self, expected_dim: usize) -> Result<Vec<R>> {
        if self.dim() != expected_dim {
            return Err(Error::Schema(format!(
                "checkpoint (format version {FORMAT_VERSION}) has dimension {}, model expects {expected_dim}",
                self.dim()
            )));
        }
        Ok(self.values.iter().map(|&v| R::lit(v)).collect())
    }

    /// Serialized text. Values use the shortest representation that parses back exactly.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(16 * self.values.len() + 128);
        let _ = writeln!(s, "{MAGIC}");
        let _ = writeln!(s, "format_version={FORMAT_VERSION}");
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "epoch={}", self.epoch);
        let _ = writeln!(s, "config_hash={}", self.config_hash);
        let _ = writeln!(s, "dim={}", self.values.len());
        for v in &self.values {
            let _ = writeln!(s, "{v:?}");
        }
        s
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        match lines.next() {
            Some((_, MAGIC)) => {}
            _ => return Err(parse_err(1, format!("missing `{MAGIC}` marker"))),
        }
        let mut header = |key: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((n, l)) => match l.split_once('=') {
                    Some((k, v)) if k == key => Ok((n, v.to_string())),
                    _ => Err(parse_err(n, format!("expected `{key}=...`, found `{l}`"))),
                },
                None => Err(parse_err(0, format!("truncated header, missing `{key}`"))),
            }
        };
        let (n, version) = header("format_version")?;
        if version != FORMAT_VERSION.to_string() {
            return Err(parse_err(n, format!("unsupported format version {version}, expected {FORMAT_VERSION}")));
        }
        let (n, seed) = header("seed")?;
        let seed = seed.parse().map_err(|e| parse_err(n, format!("seed: {e}")))?;
        let (n, epoch) = header("epoch")?;
        let epoch = epoch.parse().map_err(|e| parse_err(n, format!("epoch: {e}")))?;
        let (_, config_hash) = header("config_hash")?;
        let (n, dim) = header("dim")?;
        let dim: usize = dim.parse().map_err(|e| parse_err(n, format!("dim: {e}")))?;
        let mut values = Vec::with_capacity(dim);
        for (n, l) in lines {
            if l.is_empty() {
                continue;
            }
            let v: f64 = l.parse().map_err(|e| parse_err(n, format!("value: {e}")))?;
            if !v.is_finite() {
                return Err(parse_err(n, "non-finite value".to_string()));
            }
            values.push(v);
        }
        if values.len() != dim {
            return Err(Error::Schema(format!(
                "{}: header declares dimension {dim} but {} values follow",
                path.display(),
                values.len()
            )));
        }
        Ok(Self {
            seed,
            epoch,
            config_hash,
            values,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}
