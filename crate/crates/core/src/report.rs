//! JSON envelope and CSV emitters shared by the CLI.

use std::io::Write;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::circulant::JumpList;
use crate::enumerate::EnumerationReport;
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// `{schema_version, command, params, result}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub command: String,
    pub params: serde_json::Value,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &str, params: serde_json::Value, result: T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            params,
            result,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl<T: DeserializeOwned> Envelope<T> {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize)]
struct CsvRow {
    n: u64,
    m: u64,
    #[serde(rename = "R")]
    r: String,
    #[serde(rename = "S")]
    s: String,
    t_witness: u64,
}

/// Writes `n,m,R,S,t_witness`, one row per pair. Jump lists are comma-joined
/// inside a quoted field.
pub fn write_pairs_csv<W: Write>(report: &EnumerationReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for pair in &report.pairs {
        w.serialize(CsvRow {
            n: report.n,
            m: pair.m,
            r: JumpList(&pair.r).to_string(),
            s: JumpList(&pair.s).to_string(),
            t_witness: pair.t,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Emits to stdout for `-`, otherwise to the named file.
pub fn emit(target: &str, text: &str) -> Result<()> {
    if target == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        stdout.write_all(b"\n")?;
    } else {
        std::fs::write(target, format!("{text}\n"))?;
    }
    Ok(())
}
