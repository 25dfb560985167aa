//! Order tensors used for synthetic experiments.
//!
//! `m1` and `m2` are the two reference media. The second medium's printed
//! order parameters are not traceless, so its `Szz` is derived from `Sxx` and
//! `Syy`. Media three and four have no published values; they are chosen with
//! comparable magnitudes and well separated orientations.

use super::euler::EulerAngles;
use super::tensor::SaupeTensor;

/// `Szz` as printed for the second medium; see [`m2`].
pub const M2_PRINTED_SZZ: f64 = 1.00e-4;

pub fn m1() -> SaupeTensor {
    SaupeTensor::new(3e-4, 5e-4, -8e-4, EulerAngles::new(0.0, 0.0, 0.0))
}

/// Repaired to `Szz = -(Sxx + Syy) = 1.0e-3`.
pub fn m2() -> SaupeTensor {
    SaupeTensor::traceless(-4e-4, -6e-4, EulerAngles::new(40.0, 50.0, -60.0))
}

pub fn m3() -> SaupeTensor {
    SaupeTensor::new(2e-4, 5e-4, -7e-4, EulerAngles::new(120.0, 70.0, 30.0))
}

pub fn m4() -> SaupeTensor {
    SaupeTensor::new(-1.5e-4, -5.5e-4, 7e-4, EulerAngles::new(200.0, 110.0, 150.0))
}

pub fn reference_media() -> [SaupeTensor; 4] {
    [m1(), m2(), m3(), m4()]
}
