//! Physical constants and the dipolar prefactor `Dmax` per internuclear vector type.

use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use alloc::string::ToString;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result};

/// Nuclear species taking part in a dipolar coupling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nucleus {
    H1,
    C13,
    N15,
}

/// CODATA 2018 values (15N from the usual NMR tables) in SI units; magnetogyric ratios in rad s^-1 T^-1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    pub mu0: f64,
    pub planck: f64,
    pub gamma_h: f64,
    pub gamma_c: f64,
    pub gamma_n: f64,
    /// Nominal N-H distance in angstrom.
    pub r_nh: f64,
    pub r_caha: f64,
    pub r_cn: f64,
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    mu0: 1.256_637_062_12e-6,
    planck: 6.626_070_15e-34,
    gamma_h: 2.675_221_874_4e8,
    gamma_c: 6.728_284e7,
    gamma_n: -2.7116e7,
    r_nh: 1.02,
    r_caha: 1.09,
    r_cn: 1.33,
};

impl PhysicalConstants {
    pub fn gamma(&self, nucleus: Nucleus) -> f64 {
        match nucleus {
            Nucleus::H1 => self.gamma_h,
            Nucleus::C13 => self.gamma_c,
            Nucleus::N15 => self.gamma_n,
        }
    }

    /// `-mu0 * gi * gj * h / (8 pi^3 r^3)` in Hz for a distance given in angstrom.
    pub fn dipolar_prefactor(&self, i: Nucleus, j: Nucleus, r_angstrom: f64) -> f64 {
        let r = r_angstrom * 1e-10;
        -self.mu0 * self.gamma(i) * self.gamma(j) * self.planck / (8.0 * PI.powi(3) * r.powi(3))
    }
}

/// Internuclear vector types with registered constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum VectorType {
    #[cfg_attr(feature = "serde", serde(rename = "N-H"))]
    NH,
    #[cfg_attr(feature = "serde", serde(rename = "CA-HA"))]
    CaHa,
    /// Peptide bond C(i-1)-N(i).
    #[cfg_attr(feature = "serde", serde(rename = "C-N"))]
    CN,
}

impl VectorType {
    pub const ALL: [VectorType; 3] = [VectorType::NH, VectorType::CaHa, VectorType::CN];

    pub fn nuclei(self) -> (Nucleus, Nucleus) {
        match self {
            VectorType::NH => (Nucleus::N15, Nucleus::H1),
            VectorType::CaHa => (Nucleus::C13, Nucleus::H1),
            VectorType::CN => (Nucleus::C13, Nucleus::N15),
        }
    }

    pub fn bond_length(self) -> f64 {
        match self {
            VectorType::NH => CONSTANTS.r_nh,
            VectorType::CaHa => CONSTANTS.r_caha,
            VectorType::CN => CONSTANTS.r_cn,
        }
    }

    pub fn dmax(self) -> f64 {
        let (i, j) = self.nuclei();
        CONSTANTS.dipolar_prefactor(i, j, self.bond_length())
    }

    pub fn label(self) -> &'static str {
        match self {
            VectorType::NH => "N-H",
            VectorType::CaHa => "CA-HA",
            VectorType::CN => "C-N",
        }
    }
}

impl fmt::Display for VectorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for VectorType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: alloc::string::String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_uppercase())
            .collect();
        match key.as_str() {
            "NH" | "HN" => Ok(VectorType::NH),
            "CAHA" | "HACA" => Ok(VectorType::CaHa),
            "CN" | "NC" => Ok(VectorType::CN),
            _ => Err(Error::UnknownVectorType(s.to_string())),
        }
    }
}

/// Dipolar prefactor in Hz for a registered vector type.
pub fn dmax(vtype: VectorType) -> f64 {
    vtype.dmax()
}
