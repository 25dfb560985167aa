//! Results and decoy-manifest CSV files.

use std::io::{Read, Write};

use pdpa_core::rdc::EulerAngles;
use pdpa_core::search::{ScoreMode, ScoreRecord};

use crate::error::{AppError, AppResult};

pub const RESULTS_HEADER: [&str; 7] = ["structure", "score", "alpha", "beta", "gamma", "bb_rmsd", "mode"];

#[derive(Debug, serde::Serialize, serde::Deserialize)]
struct Row {
    structure: String,
    score: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    bb_rmsd: Option<f64>,
    mode: String,
}

/// Failed records are written with an infinite score.
pub fn write_results<W: Write>(out: W, records: &[ScoreRecord]) -> AppResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(Row {
            structure: r.structure.clone(),
            score: r.score,
            alpha: r.orientation.alpha,
            beta: r.orientation.beta,
            gamma: r.orientation.gamma,
            bb_rmsd: r.bb_rmsd,
            mode: r.mode.label().to_string(),
        })
        .map_err(|e| AppError::Internal(e.to_string()))?;
    }
    if records.is_empty() {
        w.write_record(RESULTS_HEADER).map_err(|e| AppError::Internal(e.to_string()))?;
    }
    w.flush().map_err(|e| AppError::Internal(e.to_string()))
}

pub fn read_results<R: Read>(input: R, source: &str) -> AppResult<Vec<ScoreRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(|e| AppError::parse(source, e.to_string()))?;
    if header.iter().collect::<Vec<_>>() != RESULTS_HEADER {
        return Err(AppError::parse(source, format!("expected header {}", RESULTS_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (i, row) in rd.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| AppError::parse(source, format!("row {}: {e}", i + 1)))?;
        let mode: ScoreMode = row.mode.parse().map_err(|e: pdpa_core::Error| AppError::parse(source, e.to_string()))?;
        let failed = !row.score.is_finite();
        out.push(ScoreRecord {
            structure: row.structure,
            score: row.score,
            orientation: EulerAngles::new(row.alpha, row.beta, row.gamma),
            mode,
            bb_rmsd: row.bb_rmsd,
            failure: failed.then(|| "not scored".to_string()),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ManifestEntry {
    pub decoy_id: String,
    pub seed: u64,
    pub bb_rmsd: f64,
}

pub fn write_manifest<W: Write>(out: W, entries: &[ManifestEntry]) -> AppResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for e in entries {
        w.serialize(e).map_err(|e| AppError::Internal(e.to_string()))?;
    }
    w.flush().map_err(|e| AppError::Internal(e.to_string()))
}

pub fn read_manifest<R: Read>(input: R, source: &str) -> AppResult<Vec<ManifestEntry>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| AppError::parse(source, format!("row {}: {e}", i + 1))))
        .collect()
}
