use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{bb_rmsd, ProteinStructure};
use crate::geometry::{axis_angle, dihedral, Mat3, Vec3};
use crate::{Error, Result};

/// `(phi, psi)` per residue in radians; `None` where the torsion is undefined
/// (chain ends and breaks).
pub fn backbone_torsions(s: &ProteinStructure) -> Vec<(Option<f64>, Option<f64>)> {
    let n = s.residues.len();
    (0..n)
        .map(|i| {
            let r = &s.residues[i];
            let (rn, ca, c) = (r.atom("N"), r.atom("CA"), r.atom("C"));
            let phi = if has_phi(s, i) {
                match (s.residues[i - 1].atom("C"), rn, ca, c) {
                    (Some(a), Some(b), Some(cc), Some(d)) => Some(dihedral(&a, &b, &cc, &d)),
                    _ => None,
                }
            } else {
                None
            };
            let psi = if has_psi(s, i) {
                match (rn, ca, c, s.residues[i + 1].atom("N")) {
                    (Some(a), Some(b), Some(cc), Some(d)) => Some(dihedral(&a, &b, &cc, &d)),
                    _ => None,
                }
            } else {
                None
            };
            (phi, psi)
        })
        .collect()
}

fn has_phi(s: &ProteinStructure, i: usize) -> bool {
    i > 0 && !s.residues[i].break_before
}

fn has_psi(s: &ProteinStructure, i: usize) -> bool {
    i + 1 < s.residues.len() && !s.residues[i + 1].break_before
}

/// Atoms that stay on the N side of the phi bond.
fn is_amide_side(name: &str) -> bool {
    matches!(name, "N" | "H" | "HN" | "H1" | "H2" | "H3")
}

/// Atoms that move with psi of their own residue.
fn is_carbonyl_oxygen(name: &str) -> bool {
    matches!(name, "O" | "OXT" | "O1" | "O2")
}

#[derive(Clone, Copy)]
struct Rigid {
    rot: Mat3,
    shift: Vec3,
}

impl Rigid {
    fn identity() -> Self {
        Self { rot: Mat3::identity(), shift: Vec3::zeros() }
    }

    fn apply(&self, x: &Vec3) -> Vec3 {
        self.rot * x + self.shift
    }

    /// Prepends a rotation by `angle` about the axis through `from` -> `to`.
    fn then_rotate_about(self, from: &Vec3, to: &Vec3, angle: f64) -> Self {
        let a = axis_angle(&(to - from).normalize(), angle);
        Self { rot: a * self.rot, shift: a * (self.shift - from) + from }
    }
}

/// Adds `deltas[i] = (dphi, dpsi)` (radians) to the backbone torsions by rigid
/// rotation of everything downstream of each bond, so bond lengths and angles
/// are untouched. Deltas on undefined torsions are ignored.
pub fn apply_torsion_deltas(s: &ProteinStructure, deltas: &[(f64, f64)]) -> ProteinStructure {
    let mut out = s.clone();
    let mut t = Rigid::identity();
    let mut moved = false;
    for i in 0..out.residues.len() {
        let (dphi, dpsi) = deltas.get(i).copied().unwrap_or((0.0, 0.0));
        let phi = has_phi(s, i) && dphi != 0.0;
        let psi = has_psi(s, i) && dpsi != 0.0;
        let res = &mut out.residues[i];
        if moved {
            for a in res.atoms.iter_mut().filter(|a| is_amide_side(&a.name)) {
                a.position = t.apply(&a.position);
            }
        }
        if phi {
            let n = res.atom("N").expect("validated backbone");
            let ca = t.apply(&res.atom("CA").expect("validated backbone"));
            t = t.then_rotate_about(&n, &ca, dphi);
            moved = true;
        }
        if moved {
            for a in res.atoms.iter_mut().filter(|a| !is_amide_side(&a.name) && !is_carbonyl_oxygen(&a.name)) {
                a.position = t.apply(&a.position);
            }
        }
        if psi {
            let ca = res.atom("CA").expect("validated backbone");
            let c = res.atom("C").expect("validated backbone");
            t = t.then_rotate_about(&ca, &c, dpsi);
            moved = true;
        }
        if moved {
            for a in res.atoms.iter_mut().filter(|a| is_carbonyl_oxygen(&a.name)) {
                a.position = t.apply(&a.position);
            }
        }
    }
    out
}

/// Perturbs every defined phi and psi by an independent normal deviate with
/// standard deviation `amplitude_deg`. Deterministic in `seed`; a zero
/// amplitude returns the input unchanged.
pub fn perturb_torsions(s: &ProteinStructure, seed: u64, amplitude_deg: f64) -> ProteinStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = normal_pattern(&mut rng, s.residues.len());
    apply_torsion_deltas(s, &scaled(&z, amplitude_deg.to_radians()))
}

fn normal_pattern(rng: &mut ChaCha8Rng, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| (rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
        .collect()
}

fn scaled(z: &[(f64, f64)], amplitude: f64) -> Vec<(f64, f64)> {
    z.iter().map(|&(a, b)| (a * amplitude, b * amplitude)).collect()
}

/// Targets for a decoy ensemble whose bb-rmsd values spread uniformly over a band.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecoySchedule {
    pub rmsd_min: f64,
    pub rmsd_max: f64,
    /// Largest torsion noise amplitude tried, degrees.
    pub max_amplitude_deg: f64,
}

impl DecoySchedule {
    pub fn band(rmsd_min: f64, rmsd_max: f64) -> Self {
        Self { rmsd_min, rmsd_max, max_amplitude_deg: 60.0 }
    }
}

#[derive(Clone, Debug)]
pub struct Decoy {
    pub structure: ProteinStructure,
    pub seed: u64,
    pub amplitude_deg: f64,
    pub target_rmsd: f64,
    pub rmsd: f64,
}

/// Per-decoy seed derived from an ensemble seed.
pub fn decoy_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ (index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws a target bb-rmsd uniformly from the band, then bisects the amplitude of
/// a random torsion-noise pattern until the decoy hits it. Patterns that cannot
/// reach the target are redrawn.
pub fn generate_decoy(reference: &ProteinStructure, schedule: &DecoySchedule, seed: u64) -> Result<Decoy> {
    let (lo, hi) = (schedule.rmsd_min, schedule.rmsd_max);
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::Config(alloc::format!("invalid rmsd band [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rng.random_range(lo..hi);
    let max_amp = schedule.max_amplitude_deg.to_radians();
    for _ in 0..32 {
        let z = normal_pattern(&mut rng, reference.residues.len());
        let rmsd_at = |amp: f64| -> Result<(ProteinStructure, f64)> {
            let d = apply_torsion_deltas(reference, &scaled(&z, amp));
            let r = bb_rmsd(reference, &d)?;
            Ok((d, r))
        };
        let (_, top) = rmsd_at(max_amp)?;
        if top < target {
            continue;
        }
        let (mut a, mut b) = (0.0, max_amp);
        let mut best = None;
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            let (d, r) = rmsd_at(mid)?;
            if r < target {
                a = mid;
            } else {
                b = mid;
            }
            let done = (r - target).abs() < 1e-3 * hi.max(1.0);
            best = Some((d, r, mid));
            if done {
                break;
            }
        }
        let (structure, rmsd, amp) = best.expect("bisection ran");
        if rmsd < lo || rmsd > hi {
            continue;
        }
        return Ok(Decoy { structure, seed, amplitude_deg: amp.to_degrees(), target_rmsd: target, rmsd });
    }
    Err(Error::Config(alloc::format!(
        "could not reach bb-rmsd {target:.2} within {} degrees of torsion noise",
        schedule.max_amplitude_deg
    )))
}
