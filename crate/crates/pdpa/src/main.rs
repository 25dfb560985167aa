use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pdpa::commands::{cmd_analyze, cmd_bench, cmd_decoys, cmd_fetch, cmd_screen, cmd_synthesize, config_channel_labels};
use pdpa::{AppError, AppResult, LoadedConfig};

#[derive(Parser, Debug)]
#[command(name = "pdpa", version, about = "Screen protein structures against unassigned RDC data")]
struct Cli {
    /// Experiment configuration (TOML or JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for screening.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Overrides the configured scoring mode.
    #[arg(long, global = true, value_parser = ["grid2d", "point"])]
    mode: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Download PDB entries by id.
    Fetch {
        ids: Vec<String>,
        #[arg(long, default_value = "pdb")]
        dir: PathBuf,
    },
    /// Generate a decoy library and its manifest.
    Decoys,
    /// Write synthetic assigned and unassigned datasets with their tensors.
    Synthesize,
    /// Score every library structure and write the sorted results.
    Screen,
    /// Funnel analysis of a results file.
    Analyze {
        /// Defaults to `results.csv` in the configured output directory.
        #[arg(long)]
        results: Option<PathBuf>,
        /// Defaults to the results file's directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "funnel")]
        stem: String,
    },
    /// Time the orientation search for increasing channel counts.
    Bench,
}

fn load(cli: &Cli) -> AppResult<LoadedConfig> {
    let path = cli.config.as_ref().ok_or_else(|| AppError::Usage("--config is required".into()))?;
    let mut cfg = LoadedConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.config.seed = seed;
    }
    if let Some(mode) = &cli.mode {
        cfg.config.search.mode = mode.clone();
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> AppResult<()> {
    if cli.jobs == 0 {
        return Err(AppError::Usage("--jobs must be at least 1".into()));
    }
    match &cli.command {
        Command::Fetch { ids, dir } => {
            if ids.is_empty() {
                return Err(AppError::Usage("no PDB ids given".into()));
            }
            for p in cmd_fetch(ids, dir)? {
                println!("{}", p.display());
            }
        }
        Command::Decoys => {
            let out = cmd_decoys(&load(cli)?)?;
            println!("{} decoys written to {}", out.entries.len(), out.dir.display());
            println!("manifest: {}", out.manifest.display());
        }
        Command::Synthesize => {
            let out = cmd_synthesize(&load(cli)?)?;
            for p in [&out.assigned, &out.unassigned, &out.true_tensors, &out.fitted_tensors] {
                println!("{}", p.display());
            }
        }
        Command::Screen => {
            let (path, records) = cmd_screen(&load(cli)?, cli.jobs)?;
            for r in records.iter().filter(|r| r.is_failure()) {
                eprintln!("not scored: {}: {}", r.structure, r.failure.as_deref().unwrap_or(""));
            }
            let failed = records.iter().filter(|r| r.is_failure()).count();
            if let Some(best) = records.first() {
                println!("best: {} score {:.6}", best.structure, best.score);
            }
            println!("{} structures scored, {failed} failed", records.len() - failed);
            println!("results: {}", path.display());
        }
        Command::Analyze { results, out, stem } => {
            let (results, channels) = match (results, &cli.config) {
                (Some(r), Some(_)) => (r.clone(), config_channel_labels(&load(cli)?)?),
                (Some(r), None) => (r.clone(), Vec::new()),
                (None, Some(_)) => {
                    let cfg = load(cli)?;
                    (cfg.output_dir().join("results.csv"), config_channel_labels(&cfg)?)
                }
                (None, None) => return Err(AppError::Usage("give --results or --config".into())),
            };
            let dir = out.clone().unwrap_or_else(|| results.parent().map(PathBuf::from).unwrap_or_default());
            let report = cmd_analyze(&results, &dir, stem, channels)?;
            println!("pairs {}", report.pairs.len());
            println!("R2 {:.6}", report.r_squared());
            println!("spearman {:.6}", report.spearman);
        }
        Command::Bench => {
            let (path, report) = cmd_bench(&load(cli)?)?;
            for e in &report.entries {
                println!("n={} median {:.6} s (min {:.6}, max {:.6})", e.channels, e.median_seconds, e.min_seconds, e.max_seconds);
            }
            if let Some(b) = report.fit_b {
                println!("exponent {b:.3}");
            }
            println!("report: {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(3),
    }
}
