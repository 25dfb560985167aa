//! The subcommands as library functions. Each reads a configuration and writes
//! its primary outputs under the configured output directory.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use pdpa_core::analysis::{funnel, FunnelReport};
use pdpa_core::experiment::prepare;
use pdpa_core::kde::KernelSpec;
use pdpa_core::rdc::AlignmentSet;
use pdpa_core::search::{OrientationSearch, ScoreRecord};
use pdpa_core::structure::{decoy_seed, generate_decoy, DecoySchedule};
use pdpa_core::synthesis::RdcDataset;

use crate::bench::{bench_scaling, TimingReport};
use crate::config::LoadedConfig;
use crate::dataset::{channel_label, parse_dataset, write_dataset};
use crate::error::{AppError, AppResult};
use crate::fetch::fetch_pdb;
use crate::pdb::write_pdb;
use crate::records::{read_results, write_manifest, write_results, ManifestEntry};
use crate::scatter::emit_scatter;
use crate::screen::{load_library, screen_parallel};
use crate::tensors::{parse_tensors, write_tensors};

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> AppResult<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| AppError::io(path, e))
}

fn create(path: &Path) -> AppResult<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| AppError::io(path, e))
}

pub fn cmd_fetch(ids: &[String], dir: &Path) -> AppResult<Vec<PathBuf>> {
    ids.iter().map(|id| fetch_pdb(id, dir)).collect()
}

#[derive(Clone, Debug)]
pub struct DecoyOutput {
    pub dir: PathBuf,
    pub manifest: PathBuf,
    pub entries: Vec<ManifestEntry>,
}

/// `<out>/decoys/<ref>_dNNNN.pdb` plus `manifest.csv`.
pub fn cmd_decoys(cfg: &LoadedConfig) -> AppResult<DecoyOutput> {
    let c = &cfg.config;
    let reference = cfg.reference()?;
    let schedule = DecoySchedule::band(c.decoys.rmsd_min, c.decoys.rmsd_max);
    let dir = cfg.output_dir().join("decoys");
    std::fs::create_dir_all(&dir).map_err(|e| AppError::io(&dir, e))?;
    let mut entries = Vec::with_capacity(c.decoys.count);
    for i in 0..c.decoys.count {
        let seed = decoy_seed(c.seed, i as u64);
        let mut d = generate_decoy(&reference, &schedule, seed)?;
        let id = format!("{}_d{i:04}", reference.id);
        d.structure.id = id.clone();
        write_file(&dir.join(format!("{id}.pdb")), write_pdb(&d.structure))?;
        entries.push(ManifestEntry { decoy_id: id, seed, bb_rmsd: d.rmsd });
    }
    let manifest = dir.join("manifest.csv");
    write_manifest(create(&manifest)?, &entries)?;
    Ok(DecoyOutput { dir, manifest, entries })
}

#[derive(Clone, Debug)]
pub struct SynthesisOutput {
    pub assigned: PathBuf,
    pub unassigned: PathBuf,
    pub true_tensors: PathBuf,
    pub fitted_tensors: PathBuf,
}

/// Assigned data (after the configured noise), its unassigned form, the
/// generating tensors and the tensors fitted back from the assigned data.
pub fn cmd_synthesize(cfg: &LoadedConfig) -> AppResult<SynthesisOutput> {
    let c = &cfg.config;
    let reference = cfg.reference()?;
    let media = cfg.media()?;
    let channels = c.channel_ids()?;
    let noise = c.noise_spec();
    noise.validate()?;
    let tensors: Vec<_> = media.iter().map(|m| m.1).collect();
    let exp = prepare(&reference, &tensors, &channels, &noise, strip_seed(c.seed))?;
    let used = exp.fits.len();
    let dir = cfg.output_dir().join("data");
    let out = SynthesisOutput {
        assigned: dir.join("assigned.txt"),
        unassigned: dir.join("unassigned.txt"),
        true_tensors: dir.join("tensors_true.txt"),
        fitted_tensors: dir.join("tensors_fitted.txt"),
    };
    write_file(&out.assigned, write_dataset(&exp.assigned))?;
    write_file(&out.unassigned, write_dataset(&exp.data))?;
    write_file(&out.true_tensors, write_tensors(&media[..used]))?;
    let fitted: Vec<_> = media[..used].iter().zip(&exp.fits).map(|(m, f)| (m.0.clone(), f.tensor)).collect();
    write_file(&out.fitted_tensors, write_tensors(&fitted))?;
    Ok(out)
}

fn strip_seed(seed: u64) -> u64 {
    seed.wrapping_add(1)
}

/// Alignment set, unassigned data and kernel for screening: read from the
/// configured files, or prepared from the reference.
pub fn screening_inputs(cfg: &LoadedConfig) -> AppResult<(AlignmentSet, RdcDataset, KernelSpec)> {
    let c = &cfg.config;
    let (alignments, data, kernel) = match &c.data {
        Some(path) => {
            let path = cfg.resolve(path);
            let text = std::fs::read_to_string(&path).map_err(|e| AppError::io(&path, e))?;
            let data = parse_dataset(&text, &path.display().to_string())?;
            if data.is_assigned() {
                return Err(AppError::Data(format!("{}: screening needs unassigned data", path.display())));
            }
            let tpath = c
                .alignment_tensors
                .as_deref()
                .map(|p| cfg.resolve(p))
                .ok_or_else(|| AppError::Usage("`data` requires `alignment_tensors`".into()))?;
            let ttext = std::fs::read_to_string(&tpath).map_err(|e| AppError::io(&tpath, e))?;
            let tensors = parse_tensors(&ttext, &tpath.display().to_string())?;
            let used = data.channels.iter().map(|ch| ch.medium).max().unwrap_or(0) + 1;
            if tensors.len() < used {
                return Err(AppError::Data(format!("data uses {used} media, tensor file has {}", tensors.len())));
            }
            let labels: Vec<String> = tensors[..used].iter().map(|t| t.0.clone()).collect();
            let values: Vec<_> = tensors[..used].iter().map(|t| t.1).collect();
            let (alignments, _) = AlignmentSet::from_tensors(&labels, &values)?;
            let kernel = KernelSpec::silverman(&data.joint_points(), c.kernel.floor)?;
            (alignments, data, kernel)
        }
        None => {
            let reference = cfg.reference()?;
            let tensors: Vec<_> = cfg.media()?.into_iter().map(|m| m.1).collect();
            let noise = c.noise_spec();
            noise.validate()?;
            let exp = prepare(&reference, &tensors, &c.channel_ids()?, &noise, strip_seed(c.seed))?;
            let kernel = KernelSpec::silverman(&exp.data.joint_points(), c.kernel.floor)?;
            (exp.alignments, exp.data, kernel)
        }
    };
    let kernel = match &c.kernel.std_devs {
        Some(sd) => KernelSpec::diagonal(sd)?,
        None => kernel,
    };
    Ok((alignments, data, kernel))
}

/// Screens the library and writes `<out>/results.csv`.
pub fn cmd_screen(cfg: &LoadedConfig, jobs: usize) -> AppResult<(PathBuf, Vec<ScoreRecord>)> {
    let paths = cfg.library_paths()?;
    let (alignments, data, kernel) = screening_inputs(cfg)?;
    let reference = cfg.reference()?;
    let search = OrientationSearch::new(&alignments, &data, &kernel, &cfg.config.search_config()?)?;
    let library = load_library(&paths, cfg.config.chain);
    let records = screen_parallel(&search, &library, Some(&reference), jobs)?;
    let path = cfg.output_dir().join("results.csv");
    write_results(create(&path)?, &records)?;
    Ok((path, records))
}

/// Funnel report of a results file: `<stem>.csv`, `<stem>.svg`, `<stem>.json` in `dir`.
pub fn cmd_analyze(results: &Path, dir: &Path, stem: &str, channels: Vec<String>) -> AppResult<FunnelReport> {
    let file = File::open(results).map_err(|e| AppError::io(results, e))?;
    let records = read_results(file, &results.display().to_string())?;
    let protein = records
        .iter()
        .find(|r| r.bb_rmsd.is_some_and(|d| d == 0.0))
        .map(|r| r.structure.clone())
        .unwrap_or_default();
    let report = funnel(&records)?.with_metadata(&protein, channels, None);
    emit_scatter(&report, dir, stem)?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| AppError::Internal(e.to_string()))?;
    write_file(&dir.join(format!("{stem}.json")), json)?;
    Ok(report)
}

pub fn config_channel_labels(cfg: &LoadedConfig) -> AppResult<Vec<String>> {
    Ok(cfg.config.channel_ids()?.iter().map(channel_label).collect())
}

/// Timing report written to `<out>/timing.json`.
pub fn cmd_bench(cfg: &LoadedConfig) -> AppResult<(PathBuf, TimingReport)> {
    let c = &cfg.config;
    let reference = cfg.reference()?;
    let tensors: Vec<_> = cfg.media()?.into_iter().map(|m| m.1).collect();
    let mut search = c.search_config()?;
    search.step_deg = c.bench.step_deg;
    let report = bench_scaling(&reference, &tensors, &c.bench.channel_counts, &search, c.bench.repetitions)?;
    let path = cfg.output_dir().join("timing.json");
    write_file(&path, report.to_json())?;
    Ok((path, report))
}
