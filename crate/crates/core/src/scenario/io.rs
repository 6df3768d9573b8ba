//! Scenario JSONL: one scenario object per line.
//!
//! `{"id": str, "history": [[x,y,z,vx,vy,yaw_rate,heading,length,width] x11],
//!   "future": [[x,y] x20], "lane_vectors": [[px,py,dx,dy] x k]}`

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AgentState, LaneVector, Scenario, STATE_FEATURES};
use crate::error::{Error, Result};

/// Wire representation of one JSONL line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioRecord {
    pub id: String,
    pub history: Vec<[f64; STATE_FEATURES]>,
    pub future: Vec<[f64; 2]>,
    #[serde(default)]
    pub lane_vectors: Vec<[f64; 4]>,
}

impl From<&Scenario> for ScenarioRecord {
    fn from(s: &Scenario) -> Self {
        Self {
            id: s.id.clone(),
            history: s.history.iter().map(AgentState::to_row).collect(),
            future: s.future.clone(),
            lane_vectors: s
                .lane_vectors
                .iter()
                .map(|l| [l.position[0], l.position[1], l.direction[0], l.direction[1]])
                .collect(),
        }
    }
}

impl From<ScenarioRecord> for Scenario {
    fn from(r: ScenarioRecord) -> Self {
        Self {
            id: r.id,
            history: r.history.into_iter().map(AgentState::from_row).collect(),
            future: r.future,
            lane_vectors: r
                .lane_vectors
                .into_iter()
                .map(|v| LaneVector {
                    position: [v[0], v[1]],
                    direction: [v[2], v[3]],
                })
                .collect(),
        }
    }
}

pub fn scenario_to_json(s: &Scenario) -> String {
    serde_json::to_string(&ScenarioRecord::from(s)).expect("scenario record serializes")
}

/// Parses one line without validating invariants.
pub fn scenario_from_json(line: &str) -> Result<Scenario> {
    let rec: ScenarioRecord = serde_json::from_str(line)?;
    Ok(rec.into())
}

/// Parses and validates every non-blank line. Errors carry `label:line`.
pub fn parse_jsonl<B: BufRead>(reader: B, label: &Path) -> Result<Vec<Scenario>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(label, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: label.to_path_buf(),
            line: line_no,
            message,
        };
        let scenario = scenario_from_json(&line).map_err(|e| parse_err(e.to_string()))?;
        let violations = scenario.violations();
        if !violations.is_empty() {
            return Err(parse_err(violations.join("; ")));
        }
        out.push(scenario);
    }
    Ok(out)
}

pub fn read_jsonl(path: &Path) -> Result<Vec<Scenario>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_jsonl(BufReader::new(file), path)
}

pub fn write_jsonl(path: &Path, scenarios: &[Scenario]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for s in scenarios {
        writeln!(w, "{}", scenario_to_json(s)).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
