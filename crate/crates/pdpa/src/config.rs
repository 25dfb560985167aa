//! Experiment configuration (TOML or JSON).

use std::path::{Path, PathBuf};

use pdpa_core::rdc::{presets, EulerAngles, SaupeTensor};
use pdpa_core::search::{ScoreMode, SearchConfig};
use pdpa_core::structure::{synthetic, ProteinStructure};
use pdpa_core::synthesis::{ChannelId, NoiseSpec};
use serde::{Deserialize, Serialize};

use crate::dataset::parse_channel;
use crate::error::{AppError, AppResult};
use crate::pdb::parse_pdb;
use crate::tensors::parse_tensors;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    pub label: String,
    /// `[Sxx, Syy, Szz]`.
    pub principal: [f64; 3],
    /// ZYZ Euler angles of the PAF in the molecular frame, degrees.
    #[serde(default)]
    pub orientation: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub half_width: f64,
    pub deletion: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { half_width: 0.0, deletion: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelConfig {
    /// Lower bound on bandwidths from the data, Hz.
    pub floor: f64,
    /// Explicit per-channel standard deviations, Hz; overrides the rule of thumb.
    pub std_devs: Option<Vec<f64>>,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self { floor: pdpa_core::kde::BANDWIDTH_FLOOR, std_devs: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSection {
    pub step_deg: f64,
    pub mode: String,
    pub grid_resolution: usize,
}

impl Default for SearchSection {
    fn default() -> Self {
        Self { step_deg: 5.0, mode: "point".into(), grid_resolution: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecoyConfig {
    pub count: usize,
    pub rmsd_min: f64,
    pub rmsd_max: f64,
}

impl Default for DecoyConfig {
    fn default() -> Self {
        Self { count: 100, rmsd_min: 0.0, rmsd_max: 8.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub channel_counts: Vec<usize>,
    pub repetitions: usize,
    pub step_deg: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { channel_counts: vec![1, 2, 3, 4], repetitions: 3, step_deg: 5.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// PDB path, or `builtin:alpha83`, `builtin:beta114`, `builtin:alphabeta164`.
    pub reference: String,
    #[serde(default)]
    pub chain: Option<char>,
    /// Glob of library PDB files.
    #[serde(default)]
    pub library: Option<String>,
    #[serde(default = "default_output")]
    pub output_dir: String,
    /// Media tensors; defaults to the four reference media.
    #[serde(default)]
    pub media: Vec<MediumConfig>,
    /// Tensor file used instead of `media`.
    #[serde(default)]
    pub tensor_file: Option<String>,
    #[serde(default = "default_channels")]
    pub channels: Vec<String>,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub kernel: KernelConfig,
    #[serde(default)]
    pub search: SearchSection,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub decoys: DecoyConfig,
    #[serde(default)]
    pub bench: BenchConfig,
    /// Unassigned dataset to screen against instead of synthesizing one.
    #[serde(default)]
    pub data: Option<String>,
    /// Tensor file with the fitted media for `data`.
    #[serde(default)]
    pub alignment_tensors: Option<String>,
}

fn default_output() -> String {
    "pdpa-out".into()
}

fn default_channels() -> Vec<String> {
    vec!["M1:N-H".into(), "M2:N-H".into()]
}

fn default_seed() -> u64 {
    1
}

impl ExperimentConfig {
    pub fn new(reference: impl Into<String>) -> Self {
        Self {
            reference: reference.into(),
            chain: None,
            library: None,
            output_dir: default_output(),
            media: Vec::new(),
            tensor_file: None,
            channels: default_channels(),
            noise: NoiseConfig::default(),
            kernel: KernelConfig::default(),
            search: SearchSection::default(),
            seed: default_seed(),
            decoys: DecoyConfig::default(),
            bench: BenchConfig::default(),
            data: None,
            alignment_tensors: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn channel_ids(&self) -> AppResult<Vec<ChannelId>> {
        if self.channels.is_empty() {
            return Err(AppError::Usage("no channels configured".into()));
        }
        self.channels
            .iter()
            .map(|c| parse_channel(c).ok_or_else(|| AppError::Usage(format!("bad channel '{c}' (e.g. M2:CA-HA)"))))
            .collect()
    }

    pub fn noise_spec(&self) -> NoiseSpec {
        NoiseSpec { half_width: self.noise.half_width, deletion: self.noise.deletion, seed: self.seed }
    }

    pub fn search_config(&self) -> AppResult<SearchConfig> {
        let mode: ScoreMode = self.search.mode.parse().map_err(|e: pdpa_core::Error| AppError::Usage(e.to_string()))?;
        Ok(SearchConfig { step_deg: self.search.step_deg, mode, grid_resolution: self.search.grid_resolution })
    }
}

/// A configuration together with the directory its relative paths refer to.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub base: PathBuf,
}

impl LoadedConfig {
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) || text.trim_start().starts_with('{');
        let config = if is_json { ExperimentConfig::from_json(&text) } else { ExperimentConfig::from_toml(&text) }
            .map_err(|m| AppError::Usage(format!("{}: {m}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { config, base })
    }

    pub fn in_dir(config: ExperimentConfig, base: impl Into<PathBuf>) -> Self {
        Self { config, base: base.into() }
    }

    pub fn resolve(&self, p: &str) -> PathBuf {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.resolve(&self.config.output_dir)
    }

    pub fn reference(&self) -> AppResult<ProteinStructure> {
        load_structure(&self.config.reference, self, self.config.chain)
    }

    /// True media tensors for synthesis, labelled.
    pub fn media(&self) -> AppResult<Vec<(String, SaupeTensor)>> {
        if let Some(f) = &self.config.tensor_file {
            let path = self.resolve(f);
            let text = std::fs::read_to_string(&path).map_err(|e| AppError::io(&path, e))?;
            return parse_tensors(&text, &path.display().to_string());
        }
        if self.config.media.is_empty() {
            return Ok(presets::reference_media()
                .iter()
                .enumerate()
                .map(|(i, t)| (format!("M{}", i + 1), *t))
                .collect());
        }
        self.config
            .media
            .iter()
            .map(|m| {
                let t = SaupeTensor {
                    principal: m.principal,
                    orientation: EulerAngles::new(m.orientation[0], m.orientation[1], m.orientation[2]),
                };
                let scale = t.max_abs_principal().max(1e-300);
                if !t.is_traceless(1e-9 * scale) {
                    return Err(AppError::Usage(format!("medium {} is not traceless", m.label)));
                }
                Ok((m.label.clone(), t))
            })
            .collect()
    }

    /// Library file paths in sorted order.
    pub fn library_paths(&self) -> AppResult<Vec<PathBuf>> {
        let pattern = self
            .config
            .library
            .as_deref()
            .ok_or_else(|| AppError::Usage("no library glob configured".into()))?;
        let full = self.resolve(pattern);
        let mut paths: Vec<PathBuf> = glob::glob(&full.to_string_lossy())
            .map_err(|e| AppError::Usage(format!("bad library glob: {e}")))?
            .filter_map(Result::ok)
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(AppError::Data(format!("library glob '{}' matches no files", full.display())));
        }
        Ok(paths)
    }
}

/// Structure id used for a PDB path: the file stem.
pub fn structure_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

pub fn read_structure(path: &Path, chain: Option<char>) -> AppResult<ProteinStructure> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    parse_pdb(&text, &structure_id(path), chain).map_err(|e| AppError::parse(path.display().to_string(), e.to_string()))
}

pub fn builtin_structure(name: &str) -> Option<ProteinStructure> {
    match name {
        "alpha83" | "alpha" => Some(synthetic::alpha_protein()),
        "beta114" | "beta" => Some(synthetic::beta_protein()),
        "alphabeta164" | "alphabeta" => Some(synthetic::alpha_beta_protein()),
        _ => None,
    }
}

fn load_structure(spec: &str, cfg: &LoadedConfig, chain: Option<char>) -> AppResult<ProteinStructure> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin_structure(name).ok_or_else(|| AppError::Usage(format!("unknown builtin structure '{name}'")));
    }
    read_structure(&cfg.resolve(spec), chain)
}
