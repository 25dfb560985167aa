//! Library loading and parallel screening with an order-independent result.

use std::path::PathBuf;

use pdpa_core::search::{sort_records, OrientationSearch, ScoreRecord};
use pdpa_core::structure::ProteinStructure;
use rayon::prelude::*;

use crate::config::{read_structure, structure_id};
use crate::error::{AppError, AppResult};

/// A library member: parsed, or the reason it could not be read.
#[derive(Clone, Debug)]
pub enum LibraryEntry {
    Parsed(ProteinStructure),
    Unreadable { id: String, reason: String },
}

impl LibraryEntry {
    pub fn id(&self) -> &str {
        match self {
            LibraryEntry::Parsed(s) => &s.id,
            LibraryEntry::Unreadable { id, .. } => id,
        }
    }
}

pub fn load_library(paths: &[PathBuf], chain: Option<char>) -> Vec<LibraryEntry> {
    paths
        .iter()
        .map(|p| match read_structure(p, chain) {
            Ok(s) => LibraryEntry::Parsed(s),
            Err(e) => LibraryEntry::Unreadable { id: structure_id(p), reason: e.to_string() },
        })
        .collect()
}

/// Scores every entry on `jobs` threads. Records are sorted afterwards, so the
/// output does not depend on scheduling.
pub fn screen_parallel(
    search: &OrientationSearch,
    library: &[LibraryEntry],
    reference: Option<&ProteinStructure>,
    jobs: usize,
) -> AppResult<Vec<ScoreRecord>> {
    if library.is_empty() {
        return Err(AppError::Data("empty library".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| AppError::Internal(format!("thread pool: {e}")))?;
    let score = |entry: &LibraryEntry| match entry {
        LibraryEntry::Parsed(s) => search.screen_one(s, reference),
        LibraryEntry::Unreadable { id, reason } => {
            let mut r = ScoreRecord::failed(id, search.mode(), &pdpa_core::Error::InvalidStructure(String::new()));
            r.failure = Some(reason.clone());
            r
        }
    };
    let mut records: Vec<ScoreRecord> = pool.install(|| library.par_iter().map(score).collect());
    sort_records(&mut records);
    Ok(records)
}
