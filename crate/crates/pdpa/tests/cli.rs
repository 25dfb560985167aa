use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pdpa::pdb::write_pdb;
use pdpa::records::read_manifest;
use pdpa_core::structure::synthetic;

fn pdpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdpa")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("exp.toml");
    std::fs::write(&p, body).unwrap();
    p
}

fn base_config(extra: &str) -> String {
    format!(
        "reference = \"builtin:alpha83\"\noutput_dir = \"out\"\nlibrary = \"lib/*.pdb\"\nseed = 7\n{extra}\n\
         [decoys]\ncount = 6\nrmsd_min = 1.0\nrmsd_max = 6.0\n\n\
         [search]\nstep_deg = 30.0\n"
    )
}

/// Decoys plus the reference itself in `lib/`.
fn library(dir: &Path, cfg: &Path) {
    let o = pdpa(&["decoys", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let lib = dir.join("lib");
    std::fs::create_dir_all(&lib).unwrap();
    for e in std::fs::read_dir(dir.join("out/decoys")).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "pdb") {
            std::fs::copy(&p, lib.join(p.file_name().unwrap())).unwrap();
        }
    }
    std::fs::write(lib.join("alpha83.pdb"), write_pdb(&synthetic::alpha_protein())).unwrap();
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&pdpa(&["--help"])), 0);
    assert_eq!(code(&pdpa(&["--version"])), 0);
    assert_eq!(code(&pdpa(&["screen", "--help"])), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&pdpa(&[])), 1);
    assert_eq!(code(&pdpa(&["frobnicate"])), 1);
    assert_eq!(code(&pdpa(&["screen"])), 1);
    assert_eq!(code(&pdpa(&["screen", "--mode", "cube"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "reference = \"builtin:alpha83\"\nbogus = 1\n");
    assert_eq!(code(&pdpa(&["decoys", "--config", cfg.to_str().unwrap()])), 1);
    let cfg = write_config(dir.path(), "reference = \"builtin:gamma\"\n");
    assert_eq!(code(&pdpa(&["decoys", "--config", cfg.to_str().unwrap()])), 1);
}

#[test]
fn decoys_are_reproducible_and_in_band() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &base_config(""));
    let c = cfg.to_str().unwrap();
    assert_eq!(code(&pdpa(&["decoys", "--config", c])), 0);
    let manifest = dir.path().join("out/decoys/manifest.csv");
    let first = std::fs::read(&manifest).unwrap();
    let entries = read_manifest(first.as_slice(), "manifest").unwrap();
    assert_eq!(entries.len(), 6);
    for e in &entries {
        assert!((1.0..=6.0).contains(&e.bb_rmsd), "{e:?}");
        assert!(dir.path().join(format!("out/decoys/{}.pdb", e.decoy_id)).exists());
    }
    assert_eq!(code(&pdpa(&["decoys", "--config", c])), 0);
    assert_eq!(std::fs::read(&manifest).unwrap(), first);
    assert_eq!(code(&pdpa(&["decoys", "--config", c, "--seed", "8"])), 0);
    assert_ne!(std::fs::read(&manifest).unwrap(), first);
}

#[test]
fn synthesize_ideal_and_noisy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &base_config("channels = [\"M1:N-H\", \"M2:N-H\"]"));
    assert_eq!(code(&pdpa(&["synthesize", "--config", cfg.to_str().unwrap()])), 0);
    let ideal = std::fs::read_to_string(dir.path().join("out/data/assigned.txt")).unwrap();
    let noisy_cfg = write_config(
        dir.path(),
        &base_config("channels = [\"M1:N-H\", \"M2:N-H\"]\noutput_dir = \"noisy\"")
            .replacen("output_dir = \"out\"\n", "", 1)
            .replace("[decoys]", "[noise]\nhalf_width = 1.0\ndeletion = 0.25\n\n[decoys]"),
    );
    assert_eq!(code(&pdpa(&["synthesize", "--config", noisy_cfg.to_str().unwrap()])), 0);
    let noisy = std::fs::read_to_string(dir.path().join("noisy/data/assigned.txt")).unwrap();
    let ideal_data = pdpa::dataset::parse_dataset(&ideal, "ideal").unwrap();
    let noisy_data = pdpa::dataset::parse_dataset(&noisy, "noisy").unwrap();
    assert_eq!(ideal_data.channels, noisy_data.channels);
    for ch in 0..2 {
        let a = ideal_data.assigned_channel(ch).unwrap();
        let b = noisy_data.assigned_channel(ch).unwrap();
        assert_eq!(b.len(), a.len() - (a.len() as f64 * 0.25).ceil() as usize);
        for (res, v) in b {
            let clean = a.iter().find(|(r, _)| r == res).unwrap().1;
            assert!((v - clean).abs() <= 1.0 && *v != clean);
        }
    }
    assert!(dir.path().join("out/data/tensors_fitted.txt").exists());
}

#[test]
fn screen_ranks_reference_first_and_is_job_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &base_config(""));
    let c = cfg.to_str().unwrap();
    library(dir.path(), &cfg);
    let o = pdpa(&["screen", "--config", c]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let results = dir.path().join("out/results.csv");
    let one = std::fs::read_to_string(&results).unwrap();
    let first = one.lines().nth(1).unwrap();
    assert!(first.starts_with("alpha83,"), "{first}");
    assert_eq!(one.lines().count(), 8);
    assert_eq!(code(&pdpa(&["screen", "--config", c, "--jobs", "3"])), 0);
    assert_eq!(std::fs::read_to_string(&results).unwrap(), one);

    let o = pdpa(&["analyze", "--config", c]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let printed: f64 = out.lines().find_map(|l| l.strip_prefix("R2 ")).unwrap().parse().unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/funnel.json")).unwrap()).unwrap();
    let stored = json["fit"]["r_squared"].as_f64().unwrap();
    assert!((printed - stored).abs() < 1e-6);
    assert!(dir.path().join("out/funnel.csv").exists());
    let svg = std::fs::read_to_string(dir.path().join("out/funnel.svg")).unwrap();
    assert!(roxmltree::Document::parse(&svg).is_ok());
}

#[test]
fn screen_from_synthesized_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &base_config("data = \"out/data/unassigned.txt\"\nalignment_tensors = \"out/data/tensors_fitted.txt\""),
    );
    let c = cfg.to_str().unwrap();
    assert_eq!(code(&pdpa(&["synthesize", "--config", c])), 0);
    library(dir.path(), &cfg);
    let o = pdpa(&["screen", "--config", c, "--mode", "grid2d"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let results = std::fs::read_to_string(dir.path().join("out/results.csv")).unwrap();
    let first = results.lines().nth(1).unwrap();
    assert!(first.starts_with("alpha83,") && first.ends_with(",grid2d"), "{first}");
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &base_config(""));
    let c = cfg.to_str().unwrap();
    assert_eq!(code(&pdpa(&["screen", "--config", c])), 2);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "structure,score\nx,notanumber\n").unwrap();
    assert_eq!(code(&pdpa(&["analyze", "--results", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&pdpa(&["analyze", "--results", "/nonexistent/results.csv"])), 2);

    let missing = write_config(dir.path(), "reference = \"missing.pdb\"\n");
    assert_eq!(code(&pdpa(&["decoys", "--config", missing.to_str().unwrap()])), 2);
}

#[test]
fn bench_writes_one_entry_per_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "reference = \"builtin:alpha83\"\noutput_dir = \"out\"\n[bench]\nchannel_counts = [1, 2, 3, 4]\nrepetitions = 3\nstep_deg = 60.0\n",
    );
    let o = pdpa(&["bench", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/timing.json")).unwrap()).unwrap();
    assert_eq!(json["entries"].as_array().unwrap().len(), 4);
    assert_eq!(json["workers"].as_u64(), Some(1));
    assert!(json["fit_b"].as_f64().unwrap().is_finite());
    assert!(stdout(&o).contains("exponent"));
}
