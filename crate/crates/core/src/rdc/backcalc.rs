use super::tensor::{CartesianTensor, SaupeTensor};
use crate::geometry::Vec3;
use crate::structure::InternuclearVector;

/// Coefficients of the five Cartesian tensor components in `v^T S v` for a unit
/// vector `v`: `[x^2 - z^2, y^2 - z^2, 2xy, 2xz, 2yz]`.
#[inline]
pub fn angular_basis(v: &Vec3) -> [f64; 5] {
    let (x, y, z) = (v.x, v.y, v.z);
    [x * x - z * z, y * y - z * z, 2.0 * x * y, 2.0 * x * z, 2.0 * y * z]
}

#[inline]
pub fn basis_dot(basis: &[f64; 5], s: &[f64; 5]) -> f64 {
    basis[0] * s[0] + basis[1] * s[1] + basis[2] * s[2] + basis[3] * s[3] + basis[4] * s[4]
}

/// `D = Dmax * v R S R^T v^T` for a unit vector in the molecular frame.
pub fn back_calc_direction(direction: &Vec3, tensor: &CartesianTensor, dmax: f64) -> f64 {
    dmax * basis_dot(&angular_basis(direction), &tensor.as_array())
}

/// Back-calculated coupling (Hz) of an internuclear vector under an order tensor;
/// the vector's type selects `Dmax`.
pub fn back_calc_rdc(v: &InternuclearVector, tensor: &SaupeTensor) -> f64 {
    back_calc_direction(&v.direction, &tensor.cartesian(), v.vtype.dmax())
}
