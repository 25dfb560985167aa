use nalgebra::SymmetricEigen;

use super::euler::EulerAngles;
use crate::geometry::Mat3;

/// Saupe order tensor in principal form: order parameters along the principal
/// alignment frame (PAF) and the PAF orientation relative to the molecular frame.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SaupeTensor {
    /// `[Sxx, Syy, Szz]`.
    pub principal: [f64; 3],
    pub orientation: EulerAngles,
}

/// The five independent Cartesian components of a traceless tensor;
/// `Szz = -Sxx - Syy`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CartesianTensor {
    pub sxx: f64,
    pub syy: f64,
    pub sxy: f64,
    pub sxz: f64,
    pub syz: f64,
}

impl CartesianTensor {
    pub fn from_matrix(m: &Mat3) -> Self {
        Self {
            sxx: m[(0, 0)],
            syy: m[(1, 1)],
            sxy: 0.5 * (m[(0, 1)] + m[(1, 0)]),
            sxz: 0.5 * (m[(0, 2)] + m[(2, 0)]),
            syz: 0.5 * (m[(1, 2)] + m[(2, 1)]),
        }
    }

    pub fn szz(&self) -> f64 {
        -self.sxx - self.syy
    }

    pub fn matrix(&self) -> Mat3 {
        Mat3::new(
            self.sxx, self.sxy, self.sxz, //
            self.sxy, self.syy, self.syz, //
            self.sxz, self.syz, self.szz(),
        )
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.sxx, self.syy, self.sxy, self.sxz, self.syz]
    }

    pub fn from_array(s: [f64; 5]) -> Self {
        Self { sxx: s[0], syy: s[1], sxy: s[2], sxz: s[3], syz: s[4] }
    }

    pub fn to_principal(&self) -> SaupeTensor {
        SaupeTensor::from_matrix(&self.matrix())
    }
}

impl SaupeTensor {
    pub const fn new(sxx: f64, syy: f64, szz: f64, orientation: EulerAngles) -> Self {
        Self { principal: [sxx, syy, szz], orientation }
    }

    /// Builds a traceless tensor, deriving `Szz` from the other two values.
    pub fn traceless(sxx: f64, syy: f64, orientation: EulerAngles) -> Self {
        Self::new(sxx, syy, -(sxx + syy), orientation)
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, EulerAngles::IDENTITY)
    }

    pub fn trace(&self) -> f64 {
        self.principal.iter().sum()
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.trace().abs() <= tol
    }

    pub fn max_abs_principal(&self) -> f64 {
        self.principal.iter().fold(0.0f64, |m, s| m.max(s.abs()))
    }

    /// Orientation matrix; its columns are the PAF axes in the molecular frame.
    pub fn frame(&self) -> Mat3 {
        self.orientation.to_matrix()
    }

    /// The tensor in the molecular frame, `R diag(S) R^T`.
    pub fn matrix(&self) -> Mat3 {
        let r = self.frame();
        let d = Mat3::from_diagonal(&self.principal.into());
        r * d * r.transpose()
    }

    pub fn cartesian(&self) -> CartesianTensor {
        CartesianTensor::from_matrix(&self.matrix())
    }

    /// Diagonalizes a symmetric matrix into canonical principal form:
    /// `|Sxx| <= |Syy| <= |Szz|`, right-handed PAF, and among the four
    /// sign-equivalent frames the one with `beta <= 90` and `gamma < 180`.
    pub fn from_matrix(m: &Mat3) -> Self {
        let sym = (m + m.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .abs()
                .partial_cmp(&eig.eigenvalues[b].abs())
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        let principal = [
            eig.eigenvalues[order[0]],
            eig.eigenvalues[order[1]],
            eig.eigenvalues[order[2]],
        ];
        let mut frame = Mat3::from_columns(&[
            eig.eigenvectors.column(order[0]).into_owned(),
            eig.eigenvectors.column(order[1]).into_owned(),
            eig.eigenvectors.column(order[2]).into_owned(),
        ]);
        if frame.determinant() < 0.0 {
            frame.set_column(2, &(-frame.column(2)));
        }
        Self { principal, orientation: canonical_paf(&frame) }
    }

    pub fn canonical(&self) -> Self {
        Self::from_matrix(&self.matrix())
    }

    /// The same tensor with its PAF rotated by `e` in the molecular frame.
    pub fn rotated(&self, e: &EulerAngles) -> Self {
        Self {
            principal: self.principal,
            orientation: EulerAngles::from_matrix(&(e.to_matrix() * self.frame())),
        }
    }

    /// Largest absolute element-wise difference between the molecular-frame matrices.
    pub fn distance(&self, other: &SaupeTensor) -> f64 {
        (self.matrix() - other.matrix()).abs().max()
    }
}

/// Picks one representative of the PAF sign-symmetry group `R * diag(+-1, +-1, +-1)`
/// (det +1): `beta <= 90`, then `gamma < 180`.
fn canonical_paf(frame: &Mat3) -> EulerAngles {
    let mut r = *frame;
    if r[(2, 2)] < 0.0 {
        // diag(1, -1, -1)
        r.set_column(1, &(-r.column(1)));
        r.set_column(2, &(-r.column(2)));
    }
    let e = EulerAngles::from_matrix(&r);
    if e.gamma >= 180.0 - 1e-9 {
        // diag(-1, -1, 1)
        r.set_column(0, &(-r.column(0)));
        r.set_column(1, &(-r.column(1)));
        return EulerAngles::from_matrix(&r);
    }
    e
}

/// The PAF symmetry group as frame sign flips.
pub fn paf_symmetries() -> [Mat3; 4] {
    [
        Mat3::identity(),
        Mat3::from_diagonal(&[-1.0, -1.0, 1.0].into()),
        Mat3::from_diagonal(&[1.0, -1.0, -1.0].into()),
        Mat3::from_diagonal(&[-1.0, 1.0, -1.0].into()),
    ]
}

/// `tensor` with its PAF orientation composed with `e`.
pub fn rotate_alignment(tensor: &SaupeTensor, e: &EulerAngles) -> SaupeTensor {
    tensor.rotated(e)
}
