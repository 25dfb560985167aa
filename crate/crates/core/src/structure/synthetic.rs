//! Deterministic model proteins for offline experiments, one per broad fold
//! class: all-alpha (83 residues), all-beta (114) and alpha/beta (164).
//!
//! Backbones are built from per-residue torsions with ideal geometry; torsions
//! carry a small fixed jitter so that secondary-structure elements are not
//! perfectly regular.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_backbone, ProteinStructure};

const HELIX_NAMES: [&str; 8] = ["ALA", "LEU", "GLU", "LYS", "ARG", "GLN", "ILE", "MET"];
const STRAND_NAMES: [&str; 6] = ["VAL", "ILE", "THR", "TYR", "PHE", "VAL"];
const LOOP_NAMES: [&str; 5] = ["SER", "ASN", "ASP", "THR", "GLY"];
/// Loop (phi, psi) pairs visited in turn.
const LOOP_TORSIONS: [(f64, f64); 5] = [(-70.0, 140.0), (-90.0, 0.0), (-120.0, 120.0), (80.0, 10.0), (-65.0, -25.0)];

fn jitter(rng: &mut ChaCha8Rng, w: f64) -> f64 {
    rng.random_range(-w..w)
}

/// Secondary structure letters: `H` helix, `E` strand, `T` tight hairpin turn,
/// `L` loop, `P` loop proline.
fn build(id: &str, topology: &str, seed: u64) -> ProteinStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spec: Vec<(&str, f64, f64, f64)> = Vec::with_capacity(topology.len());
    let mut turn_pos = 0usize;
    for (i, ss) in topology.chars().enumerate() {
        let (name, phi, psi) = match ss {
            'H' => (HELIX_NAMES[i % HELIX_NAMES.len()], -62.0 + jitter(&mut rng, 6.0), -41.0 + jitter(&mut rng, 6.0)),
            'E' => (STRAND_NAMES[i % STRAND_NAMES.len()], -120.0 + jitter(&mut rng, 12.0), 130.0 + jitter(&mut rng, 12.0)),
            'T' => {
                turn_pos += 1;
                if turn_pos % 2 == 1 {
                    ("ASN", 60.0 + jitter(&mut rng, 5.0), 30.0 + jitter(&mut rng, 5.0))
                } else {
                    ("GLY", 90.0 + jitter(&mut rng, 5.0), 0.0 + jitter(&mut rng, 5.0))
                }
            }
            'P' => ("PRO", -65.0 + jitter(&mut rng, 5.0), 145.0 + jitter(&mut rng, 8.0)),
            _ => {
                let k = rng.random_range(0..LOOP_TORSIONS.len());
                let (phi, psi) = LOOP_TORSIONS[k];
                let name = if phi > 0.0 { "GLY" } else { LOOP_NAMES[i % 4] };
                (name, phi + jitter(&mut rng, 10.0), psi + jitter(&mut rng, 10.0))
            }
        };
        spec.push((name, phi, psi, 180.0 + jitter(&mut rng, 4.0)));
    }
    build_backbone(id, &spec).expect("model topology builds")
}

fn repeat(parts: &[(&str, usize)]) -> String {
    parts.iter().map(|(s, n)| s.repeat(*n)).collect()
}

/// 83-residue four-helix model without prolines (stand-in for an all-alpha
/// domain of the same length).
pub fn alpha_protein() -> ProteinStructure {
    let topology = repeat(&[
        ("L", 2),
        ("H", 13),
        ("L", 4),
        ("H", 14),
        ("L", 3),
        ("H", 12),
        ("L", 4),
        ("H", 15),
        ("L", 4),
        ("H", 9),
        ("L", 3),
    ]);
    build("alpha83", &topology, 0xA1A1)
}

/// 114-residue model of nine hairpin-linked strands.
pub fn beta_protein() -> ProteinStructure {
    let mut topology = String::from("LP");
    for k in 0..9 {
        topology.push_str("EEEEEEEE");
        topology.push_str(if k % 3 == 2 { "LPLL" } else { "LTTL" });
    }
    topology.push_str("EEEE");
    build("beta114", &topology, 0x0B0B)
}

/// 164-residue model of six strand-loop-helix-loop units plus a closing unit.
pub fn alpha_beta_protein() -> ProteinStructure {
    let mut topology = String::from("LL");
    for _ in 0..6 {
        topology.push_str(&repeat(&[("E", 6), ("L", 1), ("P", 1), ("L", 1), ("H", 12), ("L", 3)]));
    }
    topology.push_str(&repeat(&[("E", 6), ("L", 3), ("H", 9)]));
    build("alphabeta164", &topology, 0xAB1B)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdc::VectorType;
    use crate::structure::extract_vectors;

    #[test]
    fn model_sizes() {
        assert_eq!(alpha_protein().len(), 83);
        assert_eq!(beta_protein().len(), 114);
        assert_eq!(alpha_beta_protein().len(), 164);
    }

    #[test]
    fn alpha_model_has_82_amide_vectors() {
        let s = alpha_protein();
        assert!(s.residues.iter().all(|r| !r.is_proline()));
        assert_eq!(extract_vectors(&s, VectorType::NH).vectors.len(), 82);
    }

    #[test]
    fn models_are_deterministic_and_valid() {
        assert_eq!(beta_protein(), beta_protein());
        for s in [alpha_protein(), beta_protein(), alpha_beta_protein()] {
            s.validate().unwrap();
        }
    }
}
