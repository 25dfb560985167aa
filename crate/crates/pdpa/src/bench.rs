//! Runtime scaling of the orientation search with the number of channels.

use std::time::Instant;

use pdpa_core::analysis::{median, power_law_fit};
use pdpa_core::experiment::prepare;
use pdpa_core::rdc::{SaupeTensor, VectorType};
use pdpa_core::search::{OrientationGrid, OrientationSearch, ScoreMode, SearchConfig};
use pdpa_core::structure::ProteinStructure;
use pdpa_core::synthesis::{ChannelId, NoiseSpec};
use serde::{Deserialize, Serialize};

use crate::dataset::channel_label;
use crate::error::{AppError, AppResult};

/// Measured sections run on the calling thread only.
pub const BENCH_WORKERS: usize = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub os: String,
    pub arch: String,
    pub available_cpus: usize,
    pub version: String,
    pub profile: String,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            available_cpus: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            version: env!("CARGO_PKG_VERSION").into(),
            profile: if cfg!(debug_assertions) { "debug" } else { "optimized" }.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingEntry {
    /// Number of channels `n`.
    pub channels: usize,
    pub labels: Vec<String>,
    /// Unassigned data points searched against.
    pub data_points: usize,
    pub median_seconds: f64,
    pub min_seconds: f64,
    pub max_seconds: f64,
    pub samples: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub structure: String,
    pub residues: usize,
    pub mode: ScoreMode,
    pub step_deg: f64,
    pub orientations: usize,
    pub repetitions: usize,
    pub workers: usize,
    pub entries: Vec<TimingEntry>,
    /// `t(n) = a * n^b` over the entries; absent with fewer than two counts.
    pub fit_a: Option<f64>,
    pub fit_b: Option<f64>,
    pub environment: Environment,
}

impl TimingReport {
    pub fn entry(&self, n: usize) -> Option<&TimingEntry> {
        self.entries.iter().find(|e| e.channels == n)
    }

    /// `t(hi) / t(lo)` from medians.
    pub fn ratio(&self, lo: usize, hi: usize) -> Option<f64> {
        Some(self.entry(hi)?.median_seconds / self.entry(lo)?.median_seconds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("timing report serializes")
    }
}

/// Channels for `n` dimensions: N-H in media `0..n`.
pub fn bench_channels(n: usize) -> Vec<ChannelId> {
    (0..n).map(|m| ChannelId::new(m, VectorType::NH)).collect()
}

/// Times a full single-structure orientation search for every channel count,
/// on noise-free data synthesized from `structure` itself.
pub fn bench_scaling(
    structure: &ProteinStructure,
    media: &[SaupeTensor],
    counts: &[usize],
    config: &SearchConfig,
    repetitions: usize,
) -> AppResult<TimingReport> {
    if counts.is_empty() || counts.contains(&0) {
        return Err(AppError::Usage("channel counts must be >= 1".into()));
    }
    if repetitions < 3 {
        return Err(AppError::Usage("benchmark needs at least 3 repetitions".into()));
    }
    if let Some(&n) = counts.iter().find(|&&n| n > media.len()) {
        return Err(AppError::Usage(format!("{n} channels need {n} media, {} defined", media.len())));
    }
    let orientations = OrientationGrid::new(config.step_deg)?.len();
    let mut entries = Vec::with_capacity(counts.len());
    for &n in counts {
        let channels = bench_channels(n);
        let exp = prepare(structure, media, &channels, &NoiseSpec::ideal(), 0)?;
        let search = OrientationSearch::new(&exp.alignments, &exp.data, &exp.kernel, config)?;
        let mut samples = Vec::with_capacity(repetitions);
        for _ in 0..repetitions {
            let start = Instant::now();
            let record = search.run(structure)?;
            samples.push(start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE));
            std::hint::black_box(record);
        }
        let median_seconds = median(&samples).expect("non-empty samples");
        entries.push(TimingEntry {
            channels: n,
            labels: channels.iter().map(channel_label).collect(),
            data_points: exp.data.joint_points().len(),
            median_seconds,
            min_seconds: samples.iter().copied().fold(f64::INFINITY, f64::min),
            max_seconds: samples.iter().copied().fold(0.0, f64::max),
            samples,
        });
    }
    let (fit_a, fit_b) = if entries.len() >= 2 {
        let n: Vec<f64> = entries.iter().map(|e| e.channels as f64).collect();
        let t: Vec<f64> = entries.iter().map(|e| e.median_seconds).collect();
        let (a, b) = power_law_fit(&n, &t)?;
        (Some(a), Some(b))
    } else {
        (None, None)
    };
    Ok(TimingReport {
        structure: structure.id.clone(),
        residues: structure.len(),
        mode: config.mode,
        step_deg: config.step_deg,
        orientations,
        repetitions,
        workers: BENCH_WORKERS,
        entries,
        fit_a,
        fit_b,
        environment: Environment::current(),
    })
}
