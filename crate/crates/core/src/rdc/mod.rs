//! Dipolar coupling physics: order tensors, Euler rotations, `Dmax` and
//! back-calculation of couplings from internuclear vectors.

mod alignment;
mod backcalc;
mod constants;
mod euler;
mod fit;
pub mod presets;
mod tensor;

pub use alignment::{AlignmentMedium, AlignmentSet};
pub use backcalc::{angular_basis, back_calc_direction, back_calc_rdc, basis_dot};
pub use constants::{dmax, Nucleus, PhysicalConstants, VectorType, CONSTANTS};
pub use euler::{euler_to_matrix, EulerAngles};
pub use fit::{fit_order_tensor, TensorFit, CONDITION_WARNING};
pub use tensor::{paf_symmetries, rotate_alignment, CartesianTensor, SaupeTensor};
