//! Acceptance criteria 1-7. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. `ACCEPTANCE_ONLY=2,5` runs a subset.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use pdpa::bench::bench_scaling;
use pdpa::screen::{screen_parallel, LibraryEntry};
use pdpa_core::analysis::{funnel, spearman};
use pdpa_core::experiment::{fit_media, prepare};
use pdpa_core::geometry::{rotation_distance, Mat3, Vec3};
use pdpa_core::kde::{kde_eval, KernelSpec, PointSet};
use pdpa_core::rdc::{back_calc_rdc, paf_symmetries, presets, EulerAngles, SaupeTensor, VectorType};
use pdpa_core::score::{score_grid_data, score_points};
use pdpa_core::search::{OrientationSearch, ScoreMode, ScoreRecord, SearchConfig};
use pdpa_core::structure::{decoy_seed, generate_decoy, synthetic, DecoySchedule, InternuclearVector, ProteinStructure};
use pdpa_core::synthesis::{synthesize, ChannelId, NoiseSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DECOY_BASE_SEED: u64 = 42;
const DECOY_BAND: (f64, f64) = (0.0, 8.0);
const FUNNEL_DECOYS: usize = 250;
const SELF_ID_DECOYS: usize = 100;
const SELF_ID_STEP: f64 = 15.0;
const SELF_ID_GRID_STEP: f64 = 30.0;
const FUNNEL_STEP: f64 = 30.0;
const NOISE_SEED: u64 = 1;
const STRIP_SEED: u64 = 2;
const POINT_SELF_SCORE: f64 = 1e-6;
const GRID_SELF_SCORE: f64 = 1e-3;
const RUNTIME_LIMIT_S: f64 = 600.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn proteins() -> [ProteinStructure; 3] {
    [synthetic::alpha_protein(), synthetic::beta_protein(), synthetic::alpha_beta_protein()]
}

fn nh(m: usize) -> ChannelId {
    ChannelId::new(m, VectorType::NH)
}

/// `FUNNEL_DECOYS` decoys per protein; the first `SELF_ID_DECOYS` also serve criterion 1.
fn decoys() -> &'static [Vec<ProteinStructure>; 3] {
    static CELL: OnceLock<[Vec<ProteinStructure>; 3]> = OnceLock::new();
    CELL.get_or_init(|| {
        let schedule = DecoySchedule::band(DECOY_BAND.0, DECOY_BAND.1);
        proteins().map(|p| {
            (0..FUNNEL_DECOYS)
                .map(|i| {
                    let mut d = generate_decoy(&p, &schedule, decoy_seed(DECOY_BASE_SEED, i as u64)).unwrap();
                    d.structure.id = format!("{}_d{i:04}", p.id);
                    d.structure
                })
                .collect()
        })
    })
}

fn screen(
    reference: &ProteinStructure,
    library: &[ProteinStructure],
    channels: &[ChannelId],
    noise: &NoiseSpec,
    config: &SearchConfig,
) -> Vec<ScoreRecord> {
    let exp = prepare(reference, &presets::reference_media(), channels, noise, STRIP_SEED).unwrap();
    let search = OrientationSearch::new(&exp.alignments, &exp.data, &exp.kernel, config).unwrap();
    let entries: Vec<LibraryEntry> = library.iter().cloned().map(LibraryEntry::Parsed).collect();
    screen_parallel(&search, &entries, Some(reference), 1).unwrap()
}

fn criterion_1() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut run = |p: &ProteinStructure, d: &[ProteinStructure], mode: ScoreMode, step: f64| {
        let mut library = vec![p.clone()];
        library.extend_from_slice(&d[..SELF_ID_DECOYS]);
        let t = Instant::now();
        let recs = screen(p, &library, &[nh(0), nh(1)], &NoiseSpec::ideal(), &SearchConfig::with_step(step).with_mode(mode));
        let secs = t.elapsed().as_secs_f64();
        let limit = if mode == ScoreMode::Point { POINT_SELF_SCORE } else { GRID_SELF_SCORE };
        let ok = recs[0].structure == p.id && recs[0].score < limit && recs.iter().all(|r| !r.is_failure()) && secs < RUNTIME_LIMIT_S;
        pass &= ok;
        parts.push(format!(
            "{} {} {}deg: first={} score={:.2e} next={:.2e} n={} {:.0}s",
            p.id,
            mode,
            step,
            recs[0].structure,
            recs[0].score,
            recs[1].score,
            recs.len(),
            secs
        ));
    };
    let ds = decoys();
    for (p, d) in proteins().iter().zip(ds.iter()) {
        run(p, d, ScoreMode::Point, SELF_ID_STEP);
    }
    run(&proteins()[0], &ds[0], ScoreMode::Grid2d, SELF_ID_GRID_STEP);
    Outcome { pass, detail: parts.join("; ") }
}

fn criterion_2() -> Outcome {
    let truth = EulerAngles::new(40.0, 50.0, -60.0);
    let media: Vec<SaupeTensor> = presets::reference_media()[..2].iter().map(|t| t.rotated(&truth)).collect();
    let s = synthetic::alpha_protein();
    let exp = prepare(&s, &media, &[nh(0), nh(1)], &NoiseSpec::ideal(), STRIP_SEED).unwrap();
    let search = OrientationSearch::new(&exp.alignments, &exp.data, &exp.kernel, &SearchConfig::with_step(5.0)).unwrap();
    let rec = search.run(&s).unwrap();
    let found = rec.orientation.to_matrix();
    let err = paf_symmetries()
        .iter()
        .map(|f| rotation_distance(&found, &(truth.to_matrix() * f)).to_degrees())
        .fold(f64::INFINITY, f64::min);
    Outcome {
        pass: err <= 5.0,
        detail: format!("found {} score {:.2e}, geodesic error {:.3} deg (limit 5)", rec.orientation, rec.score, err),
    }
}

fn criterion_3() -> Outcome {
    let s = synthetic::alpha_protein();
    let data = synthesize(&s, &[presets::m1()], &[nh(0)]).unwrap();
    let fit = &fit_media(&s, &data, 1).unwrap()[0];
    let want = [3e-4, 5e-4, -8e-4];
    let err = fit.tensor.principal.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Outcome {
        pass: err <= 1e-8,
        detail: format!("principal {:?}, max error {err:.2e} (limit 1e-8)", fit.tensor.principal),
    }
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let config = SearchConfig::with_step(FUNNEL_STEP);
    let ds = decoys();
    for (p, d) in proteins().iter().zip(ds.iter()) {
        for noise in [NoiseSpec::ideal(), NoiseSpec::realistic(NOISE_SEED)] {
            let reports: Vec<_> = [vec![nh(0), nh(1)], vec![nh(0), nh(1), nh(2)]]
                .iter()
                .map(|ch| funnel(&screen(p, d, ch, &noise, &config)).unwrap())
                .collect();
            let r2: Vec<f64> = reports.iter().map(|r| r.r_squared()).collect();
            let ok = r2[1] > r2[0];
            pass &= ok;
            let label = if noise.is_ideal() { "ideal" } else { "noisy" };
            parts.push(format!(
                "{} {label} R2 2ch={:.3} 3ch={:.3} (rho {:.3}/{:.3}) {}",
                p.id,
                r2[0],
                r2[1],
                reports[0].spearman,
                reports[1].spearman,
                if ok { "ok" } else { "NOT IMPROVED" }
            ));
            if !noise.is_ideal() && p.id == "alphabeta164" {
                let in_band = (r2[0] - 0.70).abs() <= 0.15;
                pass &= in_band;
                parts.push(format!("noisy 2ch band 0.70+-0.15: {}", if in_band { "ok" } else { "OUT OF BAND" }));
            }
        }
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn criterion_5() -> Outcome {
    let s = synthetic::alpha_protein();
    let config = SearchConfig::with_step(SELF_ID_STEP).with_mode(ScoreMode::Point);
    let r = bench_scaling(&s, &presets::reference_media(), &[1, 2, 3, 4], &config, 3).unwrap();
    let ratio = r.ratio(1, 4).unwrap();
    let b = r.fit_b.unwrap();
    let grid_extrapolation = 130321.0 / 20.0;
    let pass = ratio < 50.0 && ratio * 100.0 <= grid_extrapolation && b <= 2.5;
    let times: Vec<String> = r.entries.iter().map(|e| format!("n={} {:.3}s", e.channels, e.median_seconds)).collect();
    Outcome {
        pass,
        detail: format!("{}; t4/t1={ratio:.2} (limits 50 and {:.1}), exponent {b:.3} (limit 2.5)", times.join(" "), grid_extrapolation / 100.0),
    }
}

fn random_rotation(rng: &mut ChaCha8Rng) -> EulerAngles {
    EulerAngles::new(
        rng.random_range(0.0..360.0),
        rng.random_range(-1.0f64..1.0).acos().to_degrees(),
        rng.random_range(0.0..360.0),
    )
}

fn random_points(rng: &mut ChaCha8Rng, dim: usize, max_n: usize, max_spread: f64) -> PointSet {
    let n = rng.random_range(1..=max_n);
    let spread = rng.random_range(0.1..max_spread);
    let centre: Vec<f64> = (0..dim).map(|_| rng.random_range(-20.0..20.0)).collect();
    let mut p = PointSet::new(dim);
    for _ in 0..n {
        let row: Vec<f64> = centre.iter().map(|c| c + rng.random_range(-spread..spread)).collect();
        p.push(&row);
    }
    p
}

fn random_kernel(rng: &mut ChaCha8Rng, dim: usize) -> KernelSpec {
    let sd: Vec<f64> = (0..dim).map(|_| rng.random_range(1.0..5.0)).collect();
    if dim == 2 && rng.random_bool(0.5) {
        let rho = rng.random_range(-0.8..0.8);
        let off = rho * sd[0] * sd[1];
        KernelSpec::full(2, vec![sd[0] * sd[0], off, off, sd[1] * sd[1]]).unwrap()
    } else {
        KernelSpec::diagonal(&sd).unwrap()
    }
}

fn kde_integral(points: &PointSet, spec: &KernelSpec) -> f64 {
    let sd = spec.std_devs();
    let bounds: Vec<(f64, f64)> = (0..points.dim())
        .map(|d| {
            let (lo, hi) = points.min_max(d).unwrap();
            (lo - 10.0 * sd[d], hi + 10.0 * sd[d])
        })
        .collect();
    match points.dim() {
        1 => {
            let n = 20_000;
            let h = (bounds[0].1 - bounds[0].0) / n as f64;
            (0..n).map(|i| kde_eval(points, spec, &[bounds[0].0 + (i as f64 + 0.5) * h]).unwrap()).sum::<f64>() * h
        }
        _ => {
            let n = 300;
            let hx = (bounds[0].1 - bounds[0].0) / n as f64;
            let hy = (bounds[1].1 - bounds[1].0) / n as f64;
            let mut total = 0.0;
            for i in 0..n {
                let x = bounds[0].0 + (i as f64 + 0.5) * hx;
                for j in 0..n {
                    let y = bounds[1].0 + (j as f64 + 0.5) * hy;
                    total += kde_eval(points, spec, &[x, y]).unwrap();
                }
            }
            total * hx * hy
        }
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut parts = Vec::new();

    let mut grid_range = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..1000 {
        let e = random_points(&mut rng, 2, 30, 15.0);
        let c = random_points(&mut rng, 2, 30, 15.0);
        let spec = random_kernel(&mut rng, 2);
        let s = score_grid_data(&e, &c, &spec, rng.random_range(8..=64)).unwrap();
        grid_range = (grid_range.0.min(s), grid_range.1.max(s));
    }
    let grid_ok = grid_range.0 >= 0.0 && grid_range.1 <= 2.0;
    parts.push(format!("grid score range [{:.3e}, {:.6}]", grid_range.0, grid_range.1));

    let mut worst_mass: f64 = 0.0;
    for dim in [1, 1, 1, 1, 1, 2, 2, 2, 2, 2] {
        let pts = random_points(&mut rng, dim, 20, 15.0);
        let spec = random_kernel(&mut rng, dim);
        worst_mass = worst_mass.max((kde_integral(&pts, &spec) - 1.0).abs());
    }
    let mass_ok = worst_mass <= 1e-3;
    parts.push(format!("KDE mass error {worst_mass:.2e}"));

    let mut worst_magic: f64 = 0.0;
    let mut worst_sign: f64 = 0.0;
    let magic = (1.0f64 / 3.0).sqrt().acos();
    for _ in 0..1000 {
        let s = rng.random_range(1e-4..1e-3) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let t = SaupeTensor::new(-s / 2.0, -s / 2.0, s, random_rotation(&mut rng));
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        let paf = Vec3::new(magic.sin() * phi.cos(), magic.sin() * phi.sin(), magic.cos());
        let vtype = VectorType::ALL[rng.random_range(0..3)];
        let v = InternuclearVector::new(1, vtype, t.frame() * paf);
        worst_magic = worst_magic.max(back_calc_rdc(&v, &t).abs());
        let rhombic = SaupeTensor::traceless(rng.random_range(-1e-3..1e-3), rng.random_range(-1e-3..1e-3), random_rotation(&mut rng));
        let u = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)).normalize();
        let plus = back_calc_rdc(&InternuclearVector::new(1, vtype, u), &rhombic);
        let minus = back_calc_rdc(&InternuclearVector::new(1, vtype, -u), &rhombic);
        worst_sign = worst_sign.max((plus - minus).abs());
    }
    let rdc_ok = worst_magic <= 1e-9 && worst_sign <= 1e-12;
    parts.push(format!("magic-angle |D| {worst_magic:.2e} Hz, sign asymmetry {worst_sign:.2e} Hz"));

    let mut worst_trace: f64 = 0.0;
    for _ in 0..1000 {
        let mut t = SaupeTensor::traceless(rng.random_range(-1e-3..1e-3), rng.random_range(-1e-3..1e-3), random_rotation(&mut rng));
        for _ in 0..10 {
            t = t.rotated(&random_rotation(&mut rng));
            let m: Mat3 = t.matrix();
            worst_trace = worst_trace.max(m.trace().abs()).max(t.canonical().trace().abs());
        }
    }
    let trace_ok = worst_trace <= 1e-12;
    parts.push(format!("trace after rotations {worst_trace:.2e}"));

    Outcome { pass: grid_ok && mass_ok && rdc_ok && trace_ok, detail: parts.join("; ") }
}

/// Spearman correlation of point and grid scores over 50 in-domain pairs: the
/// 2-channel data of a random protein against a random decoy at a random
/// orientation. Also reports the correlation over generic random clusters.
fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ps = proteins();
    let schedule = DecoySchedule::band(DECOY_BAND.0, DECOY_BAND.1);
    let (mut point, mut grid) = (Vec::new(), Vec::new());
    for i in 0..50 {
        let p = &ps[rng.random_range(0..3)];
        let exp = prepare(p, &presets::reference_media(), &[nh(0), nh(1)], &NoiseSpec::ideal(), STRIP_SEED).unwrap();
        let search = OrientationSearch::new(&exp.alignments, &exp.data, &exp.kernel, &SearchConfig::default()).unwrap();
        let decoy = generate_decoy(p, &schedule, decoy_seed(7, i)).unwrap();
        let c = search.calculated_points(&decoy.structure, &random_rotation(&mut rng)).unwrap();
        let e = exp.data.joint_points();
        point.push(score_points(&e, &c, &exp.kernel).unwrap());
        grid.push(score_grid_data(&e, &c, &exp.kernel, 64).unwrap());
    }
    let rho = spearman(&point, &grid).unwrap();

    let (mut point, mut grid) = (Vec::new(), Vec::new());
    while point.len() < 50 {
        let e = random_points(&mut rng, 2, 40, 15.0);
        let spec = random_kernel(&mut rng, 2);
        let c = random_points(&mut rng, 2, 40, 15.0);
        point.push(score_points(&e, &c, &spec).unwrap());
        grid.push(score_grid_data(&e, &c, &spec, 64).unwrap());
    }
    let generic = spearman(&point, &grid).unwrap();
    Outcome {
        pass: rho > 0.9,
        detail: format!("Spearman rho {rho:.4} over 50 data/decoy pairs (limit > 0.9); generic random clusters {generic:.4}"),
    }
}

type Criterion = (usize, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let only: Option<Vec<usize>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let criteria: [Criterion; 7] = [
        (1, "self-identification", criterion_1),
        (2, "orientation recovery", criterion_2),
        (3, "tensor round-trip", criterion_3),
        (4, "funnel trend", criterion_4),
        (5, "complexity transition", criterion_5),
        (6, "numerical invariants", criterion_6),
        (7, "scorer agreement", criterion_7),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let t = Instant::now();
        let out = f();
        if !out.pass {
            failed += 1;
        }
        println!(
            "criterion {id} {name}: {} ({}) [{:.1}s]",
            if out.pass { "PASS" } else { "FAIL" },
            out.detail,
            t.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
