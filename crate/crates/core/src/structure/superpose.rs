use alloc::format;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::ProteinStructure;
use crate::geometry::{Mat3, Vec3};
use crate::{Error, Result};

/// Optimal rigid motion taking `mobile` onto `target`:
/// `target ~ rotation * mobile + translation`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Superposition {
    pub rotation: Mat3,
    pub translation: Vec3,
    pub rmsd: f64,
}

/// Kabsch least-squares superposition of paired point sets.
pub fn kabsch(mobile: &[Vec3], target: &[Vec3]) -> Result<Superposition> {
    if mobile.len() != target.len() {
        return Err(Error::Dimension(format!("{} vs {} points", mobile.len(), target.len())));
    }
    if mobile.is_empty() {
        return Err(Error::EmptyData);
    }
    let n = mobile.len() as f64;
    let cm = mobile.iter().fold(Vec3::zeros(), |a, p| a + p) / n;
    let ct = target.iter().fold(Vec3::zeros(), |a, p| a + p) / n;
    let h = mobile
        .iter()
        .zip(target)
        .fold(Mat3::zeros(), |acc, (p, q)| acc + (p - cm) * (q - ct).transpose());
    let svd = h.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let v = v_t.transpose();
    let d = (v * u.transpose()).determinant().signum();
    let rotation = v * Mat3::from_diagonal(&Vec3::new(1.0, 1.0, d)) * u.transpose();
    let translation = ct - rotation * cm;
    let sum: f64 = mobile
        .iter()
        .zip(target)
        .map(|(p, q)| (rotation * p + translation - q).norm_squared())
        .sum();
    Ok(Superposition { rotation, translation, rmsd: (sum / n).sqrt() })
}

/// Backbone (N, CA, C) RMSD after optimal superposition.
pub fn bb_rmsd(a: &ProteinStructure, b: &ProteinStructure) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!("{} vs {} residues", a.len(), b.len())));
    }
    let pa = a.backbone();
    let pb = b.backbone();
    if pa.len() != 3 * a.len() || pb.len() != 3 * b.len() {
        return Err(Error::InvalidStructure("backbone atoms N, CA, C required".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    Ok(kabsch(&pa, &pb)?.rmsd)
}
