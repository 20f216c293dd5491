//! CSV and JSON forms of a scan.
//!
//! CSV layout:
//!
//! ```text
//! # metadata: {...json...}
//! # wall_time_s: 12.5
//! lambda,g_over_gs,omega,E0,...,status
//! ```
//!
//! Floats use the shortest representation that parses back to the same
//! value, and absent values are empty fields, so a parse reproduces the
//! dataset exactly. Only the wall-time line differs between identical runs.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ScanDataset, ScanMetadata, ScanRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

const METADATA: &str = "# metadata: ";
const WALL_TIME: &str = "# wall_time_s: ";

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_csv<W: Write>(dataset: &ScanDataset, out: W) -> Result<()> {
    let mut out = out;
    let meta = ScanMetadata { n_max_per_point: None, ..dataset.metadata.clone() };
    let json = serde_json::to_string(&meta).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{METADATA}{json}")?;
    if let Some(t) = dataset.wall_time_s {
        writeln!(out, "{WALL_TIME}{t}")?;
    }
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(out);
    for r in &dataset.records {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(mut input: R) -> Result<ScanDataset> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let mut metadata: Option<ScanMetadata> = None;
    let mut wall_time_s = None;
    let mut body = String::with_capacity(text.len());
    for line in text.lines() {
        if let Some(json) = line.strip_prefix(METADATA) {
            metadata = Some(serde_json::from_str(json).map_err(|e| Error::Parse(format!("metadata: {e}")))?);
        } else if let Some(t) = line.strip_prefix(WALL_TIME) {
            wall_time_s = Some(t.trim().parse().map_err(|e| Error::Parse(format!("wall time: {e}")))?);
        } else if !line.starts_with('#') {
            body.push_str(line);
            body.push('\n');
        }
    }
    let mut metadata = metadata.ok_or_else(|| Error::Parse("missing metadata line".into()))?;
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let records: Vec<ScanRecord> =
        reader.deserialize().collect::<std::result::Result<_, _>>().map_err(|e| Error::Parse(e.to_string()))?;
    metadata.n_max_per_point = Some(records.iter().map(|r| r.n_max_used.unwrap_or(0)).collect());
    let dataset = ScanDataset { metadata, records, wall_time_s };
    check_complete(&dataset)?;
    Ok(dataset)
}

pub fn write_json<W: Write>(dataset: &ScanDataset, out: W) -> Result<()> {
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, dataset).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> Result<ScanDataset> {
    let dataset: ScanDataset = serde_json::from_reader(input).map_err(|e| Error::Parse(e.to_string()))?;
    check_complete(&dataset)?;
    Ok(dataset)
}

fn check_complete(d: &ScanDataset) -> Result<()> {
    let expect = d.metadata.lambda_steps * d.metadata.g_steps;
    if d.records.len() != expect {
        return Err(Error::Parse(format!("expected {expect} rows, found {}", d.records.len())));
    }
    Ok(())
}

impl ScanDataset {
    /// Writes to `path` in the given format.
    pub fn emit(&self, path: &Path, format: OutputFormat) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let buf = std::io::BufWriter::new(file);
        match format {
            OutputFormat::Csv => write_csv(self, buf),
            OutputFormat::Json => write_json(self, buf),
        }
    }
}
