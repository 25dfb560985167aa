use core::fmt;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::geometry::{rot_y, rot_z, wrap_degrees, Mat3};

/// ZYZ Euler angles in degrees; active rotation `Rz(alpha) Ry(beta) Rz(gamma)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub const IDENTITY: EulerAngles = EulerAngles { alpha: 0.0, beta: 0.0, gamma: 0.0 };

    pub const fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn to_matrix(&self) -> Mat3 {
        rot_z(self.alpha.to_radians()) * rot_y(self.beta.to_radians()) * rot_z(self.gamma.to_radians())
    }

    /// Canonical angles for a proper rotation matrix: alpha, gamma in [0, 360),
    /// beta in [0, 180]. At the poles gamma is set to zero.
    pub fn from_matrix(m: &Mat3) -> Self {
        const POLE: f64 = 1e-12;
        let cb = m[(2, 2)].clamp(-1.0, 1.0);
        let sb = (m[(0, 2)] * m[(0, 2)] + m[(1, 2)] * m[(1, 2)]).sqrt();
        let beta = sb.atan2(cb);
        let (alpha, gamma) = if sb > POLE {
            (m[(1, 2)].atan2(m[(0, 2)]), m[(2, 1)].atan2(-m[(2, 0)]))
        } else if cb > 0.0 {
            (m[(1, 0)].atan2(m[(0, 0)]), 0.0)
        } else {
            ((-m[(1, 0)]).atan2(-m[(0, 0)]), 0.0)
        };
        Self {
            alpha: wrap_degrees(alpha.to_degrees()),
            beta: beta.to_degrees(),
            gamma: wrap_degrees(gamma.to_degrees()),
        }
    }

    pub fn canonical(&self) -> Self {
        Self::from_matrix(&self.to_matrix())
    }

    pub fn inverse(&self) -> Self {
        Self::from_matrix(&self.to_matrix().transpose())
    }

    /// `self` applied after `first`.
    pub fn compose(&self, first: &EulerAngles) -> Self {
        Self::from_matrix(&(self.to_matrix() * first.to_matrix()))
    }
}

impl Default for EulerAngles {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl fmt::Display for EulerAngles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

pub fn euler_to_matrix(e: &EulerAngles) -> Mat3 {
    e.to_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec3;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn zero_angles_give_identity() {
        assert_relative_eq!(EulerAngles::IDENTITY.to_matrix(), Mat3::identity(), epsilon = 1e-15);
    }

    #[test]
    fn beta_zero_merges_alpha_and_gamma() {
        let a = EulerAngles::new(25.0, 0.0, 0.0).to_matrix();
        let g = EulerAngles::new(0.0, 0.0, 70.0).to_matrix();
        let both = EulerAngles::new(25.0, 0.0, 70.0).to_matrix();
        assert_relative_eq!(a * g, both, epsilon = 1e-12);
    }

    #[test]
    fn z_axis_lands_on_spherical_coordinates() {
        let e = EulerAngles::new(40.0, 50.0, -60.0);
        let z = e.to_matrix() * Vec3::z();
        let (a, b) = (40f64.to_radians(), 50f64.to_radians());
        let expected = Vec3::new(b.sin() * a.cos(), b.sin() * a.sin(), b.cos());
        assert_relative_eq!(z, expected, epsilon = 1e-12);
    }

    #[test]
    fn poles_round_trip() {
        for e in [EulerAngles::new(30.0, 0.0, 10.0), EulerAngles::new(30.0, 180.0, 10.0)] {
            let back = EulerAngles::from_matrix(&e.to_matrix());
            assert_relative_eq!(back.to_matrix(), e.to_matrix(), epsilon = 1e-12);
            assert_eq!(back.gamma, 0.0);
        }
    }

    proptest! {
        #[test]
        fn matrices_are_proper_rotations(a in -720.0..720.0f64, b in -360.0..360.0f64, g in -720.0..720.0f64) {
            let m = EulerAngles::new(a, b, g).to_matrix();
            prop_assert!((m.transpose() * m - Mat3::identity()).abs().max() < 1e-12);
            prop_assert!((m.determinant() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn canonical_angles_in_range_and_equivalent(a in -720.0..720.0f64, b in -360.0..360.0f64, g in -720.0..720.0f64) {
            let e = EulerAngles::new(a, b, g);
            let c = e.canonical();
            prop_assert!((0.0..360.0).contains(&c.alpha));
            prop_assert!((0.0..=180.0).contains(&c.beta));
            prop_assert!((0.0..360.0).contains(&c.gamma));
            prop_assert!((c.to_matrix() - e.to_matrix()).abs().max() < 1e-9);
        }
    }
}
