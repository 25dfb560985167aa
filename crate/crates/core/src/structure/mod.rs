//! Protein backbone model: residues and atoms, internuclear vectors, idealized
//! hydrogen placement, torsion-perturbed decoys and backbone RMSD.

mod decoy;
mod superpose;
pub mod synthetic;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::geometry::{place_atom, Vec3};
use crate::rdc::VectorType;
use crate::{Error, Result};

pub use decoy::{
    apply_torsion_deltas, backbone_torsions, decoy_seed, generate_decoy, perturb_torsions, Decoy,
    DecoySchedule,
};
pub use superpose::{bb_rmsd, kabsch, Superposition};

/// Peptide C(i-1)-N(i) distances accepted for an unbroken chain, angstrom.
pub const PEPTIDE_BOND_RANGE: (f64, f64) = (1.2, 1.5);
pub const AMIDE_H_LENGTH: f64 = 1.02;
pub const ALPHA_H_LENGTH: f64 = 1.09;

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub name: String,
    pub position: Vec3,
}

impl Atom {
    pub fn new(name: impl Into<String>, position: Vec3) -> Self {
        Self { name: name.into(), position }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residue {
    /// Residue sequence number as written in the source.
    pub seq: i32,
    /// Three-letter code.
    pub name: String,
    pub atoms: Vec<Atom>,
    /// Set when this residue is not peptide-bonded to its predecessor.
    pub break_before: bool,
}

impl Residue {
    pub fn new(seq: i32, name: impl Into<String>) -> Self {
        Self { seq, name: name.into(), atoms: Vec::new(), break_before: false }
    }

    pub fn atom(&self, name: &str) -> Option<Vec3> {
        self.atoms.iter().find(|a| a.name == name).map(|a| a.position)
    }

    pub fn with_atom(mut self, name: &str, position: Vec3) -> Self {
        self.set_atom(name, position);
        self
    }

    pub fn set_atom(&mut self, name: &str, position: Vec3) {
        match self.atoms.iter_mut().find(|a| a.name == name) {
            Some(a) => a.position = position,
            None => self.atoms.push(Atom::new(name, position)),
        }
    }

    fn require(&self, name: &'static str) -> Result<Vec3> {
        self.atom(name).ok_or(Error::MissingAtom { residue: self.seq, atom: name })
    }

    pub fn is_proline(&self) -> bool {
        self.name.eq_ignore_ascii_case("PRO")
    }

    pub fn is_glycine(&self) -> bool {
        self.name.eq_ignore_ascii_case("GLY")
    }
}

/// A single protein chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ProteinStructure {
    pub id: String,
    pub chain: char,
    pub residues: Vec<Residue>,
}

impl ProteinStructure {
    /// Builds a structure and checks its invariants.
    pub fn new(id: impl Into<String>, chain: char, residues: Vec<Residue>) -> Result<Self> {
        let s = Self { id: id.into(), chain, residues };
        s.validate()?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// Marks residues whose C(i-1)-N(i) distance is outside
    /// [`PEPTIDE_BOND_RANGE`] as chain breaks.
    pub fn flag_chain_breaks(&mut self) {
        for i in 1..self.residues.len() {
            let c = self.residues[i - 1].atom("C");
            let n = self.residues[i].atom("N");
            if let (Some(c), Some(n)) = (c, n) {
                let d = (n - c).norm();
                if !(PEPTIDE_BOND_RANGE.0..=PEPTIDE_BOND_RANGE.1).contains(&d) {
                    self.residues[i].break_before = true;
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.residues.is_empty() {
            return Err(Error::EmptyStructure);
        }
        for (i, r) in self.residues.iter().enumerate() {
            for name in ["N", "CA", "C"] {
                if r.atom(name).is_none() {
                    return Err(Error::InvalidStructure(format!(
                        "residue {} lacks backbone atom {name}",
                        r.seq
                    )));
                }
            }
            if let Some(a) = r.atoms.iter().find(|a| !a.position.iter().all(|x| x.is_finite())) {
                return Err(Error::InvalidStructure(format!(
                    "residue {} atom {} has non-finite coordinates",
                    r.seq, a.name
                )));
            }
            if i == 0 {
                continue;
            }
            let prev = &self.residues[i - 1];
            if r.seq <= prev.seq {
                return Err(Error::InvalidStructure(format!(
                    "residue numbers not increasing at {} -> {}",
                    prev.seq, r.seq
                )));
            }
            if !r.break_before {
                let d = (r.require("N")? - prev.require("C")?).norm();
                if !(PEPTIDE_BOND_RANGE.0..=PEPTIDE_BOND_RANGE.1).contains(&d) {
                    return Err(Error::InvalidStructure(format!(
                        "unflagged chain break between {} and {} (C-N {d:.3} A)",
                        prev.seq, r.seq
                    )));
                }
            }
        }
        Ok(())
    }

    /// N, CA, C coordinates in residue order.
    pub fn backbone(&self) -> Vec<Vec3> {
        let mut out = Vec::with_capacity(3 * self.residues.len());
        for r in &self.residues {
            for name in ["N", "CA", "C"] {
                if let Some(p) = r.atom(name) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Applies `x -> rotation * x + translation` to every atom.
    pub fn transformed(&self, rotation: &crate::geometry::Mat3, translation: &Vec3) -> Self {
        let mut s = self.clone();
        for r in &mut s.residues {
            for a in &mut r.atoms {
                a.position = rotation * a.position + translation;
            }
        }
        s
    }

    fn has_peptide_predecessor(&self, index: usize) -> bool {
        index > 0 && !self.residues[index].break_before
    }
}

/// Amide hydrogen of the residue at chain position `index`: in the
/// C(i-1)-N(i)-CA(i) plane, on the external bisector, [`AMIDE_H_LENGTH`] from N.
pub fn build_amide_hydrogen(structure: &ProteinStructure, index: usize) -> Result<Vec3> {
    let r = &structure.residues[index];
    if !structure.has_peptide_predecessor(index) {
        return Err(Error::NoHydrogen(r.seq));
    }
    let c_prev = structure.residues[index - 1].require("C")?;
    let n = r.require("N")?;
    let ca = r.require("CA")?;
    let bisector = (c_prev - n).normalize() + (ca - n).normalize();
    Ok(n - bisector.normalize() * AMIDE_H_LENGTH)
}

/// Alpha hydrogen of an L-amino acid placed tetrahedrally on CA at
/// [`ALPHA_H_LENGTH`] from the N, CA, C positions.
pub fn build_alpha_hydrogen(residue: &Residue) -> Result<Vec3> {
    let n = residue.require("N")?;
    let ca = residue.require("CA")?;
    let c = residue.require("C")?;
    let b1 = (n - ca).normalize();
    let b2 = (c - ca).normalize();
    let bisector = -(b1 + b2).normalize();
    let perp = b2.cross(&b1).normalize();
    // Half the tetrahedral angle.
    let half = (109.471_220_634_490_7f64 / 2.0).to_radians();
    Ok(ca + (bisector * half.cos() + perp * half.sin()) * ALPHA_H_LENGTH)
}

/// Unit internuclear vector attached to a residue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InternuclearVector {
    pub residue: i32,
    pub vtype: VectorType,
    pub direction: Vec3,
    /// Nominal internuclear distance, angstrom.
    pub length: f64,
}

impl InternuclearVector {
    /// Normalizes `direction`; the nominal length comes from the vector type.
    pub fn new(residue: i32, vtype: VectorType, direction: Vec3) -> Self {
        Self { residue, vtype, direction: direction.normalize(), length: vtype.bond_length() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkipReason {
    ChainStart,
    Proline,
    Glycine,
    MissingAtom(&'static str),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VectorSet {
    pub vectors: Vec<InternuclearVector>,
    pub skipped: Vec<(i32, SkipReason)>,
}

/// One unit vector per eligible residue, in residue order. Hydrogens missing
/// from the coordinates are built; residues that cannot carry the vector are
/// listed in `skipped`.
pub fn extract_vectors(structure: &ProteinStructure, vtype: VectorType) -> VectorSet {
    let mut out = VectorSet::default();
    for (i, r) in structure.residues.iter().enumerate() {
        match vector_for(structure, i, vtype) {
            Ok(v) => out.vectors.push(InternuclearVector::new(r.seq, vtype, v)),
            Err(reason) => out.skipped.push((r.seq, reason)),
        }
    }
    out
}

fn vector_for(s: &ProteinStructure, i: usize, vtype: VectorType) -> core::result::Result<Vec3, SkipReason> {
    let r = &s.residues[i];
    let get = |res: &Residue, name: &'static str| res.atom(name).ok_or(SkipReason::MissingAtom(name));
    match vtype {
        VectorType::NH => {
            if r.is_proline() {
                return Err(SkipReason::Proline);
            }
            if !s.has_peptide_predecessor(i) {
                return Err(SkipReason::ChainStart);
            }
            let n = get(r, "N")?;
            let h = match r.atom("H").or_else(|| r.atom("HN")) {
                Some(h) => h,
                None => build_amide_hydrogen(s, i).map_err(|_| SkipReason::MissingAtom("H"))?,
            };
            Ok(h - n)
        }
        VectorType::CaHa => {
            if r.is_glycine() {
                return Err(SkipReason::Glycine);
            }
            let ca = get(r, "CA")?;
            let ha = match r.atom("HA") {
                Some(h) => h,
                None => build_alpha_hydrogen(r).map_err(|_| SkipReason::MissingAtom("HA"))?,
            };
            Ok(ha - ca)
        }
        VectorType::CN => {
            if !s.has_peptide_predecessor(i) {
                return Err(SkipReason::ChainStart);
            }
            Ok(get(r, "N")? - get(&s.residues[i - 1], "C")?)
        }
    }
}

/// Ideal backbone geometry used by the builders, angstrom and degrees.
pub mod ideal {
    pub const N_CA: f64 = 1.458;
    pub const CA_C: f64 = 1.525;
    pub const C_N: f64 = 1.329;
    pub const C_O: f64 = 1.231;
    pub const N_CA_C: f64 = 111.2;
    pub const CA_C_N: f64 = 116.2;
    pub const C_N_CA: f64 = 121.7;
    pub const CA_C_O: f64 = 120.5;
}

/// Builds a chain from per-residue `(name, phi, psi, omega)` in degrees with
/// ideal bond geometry, adding O, amide H (not on the first residue or
/// prolines) and HA (not on glycines).
pub fn build_backbone(id: &str, residues: &[(&str, f64, f64, f64)]) -> Result<ProteinStructure> {
    if residues.is_empty() {
        return Err(Error::EmptyStructure);
    }
    let rad = |d: f64| d.to_radians();
    let mut n = Vec3::zeros();
    let mut ca = Vec3::new(ideal::N_CA, 0.0, 0.0);
    let a = rad(180.0 - ideal::N_CA_C);
    let mut c = ca + Vec3::new(ideal::CA_C * a.cos(), ideal::CA_C * a.sin(), 0.0);
    let mut out = Vec::with_capacity(residues.len());
    for (k, &(name, _phi, psi, omega)) in residues.iter().enumerate() {
        let mut res = Residue::new(k as i32 + 1, name);
        res.set_atom("N", n);
        res.set_atom("CA", ca);
        res.set_atom("C", c);
        res.set_atom(
            "O",
            place_atom(&n, &ca, &c, ideal::C_O, rad(ideal::CA_C_O), rad(psi + 180.0)),
        );
        out.push(res);
        if let Some(&(_, next_phi, _, _)) = residues.get(k + 1) {
            let n_next = place_atom(&n, &ca, &c, ideal::C_N, rad(ideal::CA_C_N), rad(psi));
            let ca_next = place_atom(&ca, &c, &n_next, ideal::N_CA, rad(ideal::C_N_CA), rad(omega));
            let c_next = place_atom(&c, &n_next, &ca_next, ideal::CA_C, rad(ideal::N_CA_C), rad(next_phi));
            n = n_next;
            ca = ca_next;
            c = c_next;
        }
    }
    let mut s = ProteinStructure { id: id.into(), chain: 'A', residues: out };
    for i in 0..s.residues.len() {
        if i > 0 && !s.residues[i].is_proline() {
            let h = build_amide_hydrogen(&s, i)?;
            s.residues[i].set_atom("H", h);
        }
        if !s.residues[i].is_glycine() {
            let ha = build_alpha_hydrogen(&s.residues[i])?;
            s.residues[i].set_atom("HA", ha);
        }
    }
    s.validate()?;
    Ok(s)
}
