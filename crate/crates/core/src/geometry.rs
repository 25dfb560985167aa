//! Small 3D helpers shared by the structure and RDC code.

use nalgebra::{Matrix3, Vector3};
#[cfg(not(feature = "std"))]
use num_traits::Float;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Rotation by `angle` radians about the unit vector `axis` (Rodrigues).
pub fn axis_angle(axis: &Vec3, angle: f64) -> Mat3 {
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    let (x, y, z) = (axis.x, axis.y, axis.z);
    Mat3::new(
        t * x * x + c,
        t * x * y - s * z,
        t * x * z + s * y,
        t * x * y + s * z,
        t * y * y + c,
        t * y * z - s * x,
        t * x * z - s * y,
        t * y * z + s * x,
        t * z * z + c,
    )
}

pub fn rot_z(angle: f64) -> Mat3 {
    let (s, c) = angle.sin_cos();
    Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

pub fn rot_y(angle: f64) -> Mat3 {
    let (s, c) = angle.sin_cos();
    Mat3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

/// Angle (radians) at `b` in the triple a-b-c.
pub fn bond_angle(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let u = a - b;
    let v = c - b;
    let cos = u.dot(&v) / (u.norm() * v.norm());
    cos.clamp(-1.0, 1.0).acos()
}

/// Dihedral angle (radians, in (-pi, pi]) of the chain a-b-c-d.
pub fn dihedral(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> f64 {
    let b0 = a - b;
    let b1 = c - b;
    let b2 = d - c;
    let b1n = b1.normalize();
    let v = b0 - b1n * b0.dot(&b1n);
    let w = b2 - b1n * b2.dot(&b1n);
    let x = v.dot(&w);
    let y = b1n.cross(&v).dot(&w);
    y.atan2(x)
}

/// Natural-extension reference frame placement: the atom `d` bonded to `c` with
/// bond length `length`, angle b-c-d `angle` and dihedral a-b-c-d `torsion`.
pub fn place_atom(a: &Vec3, b: &Vec3, c: &Vec3, length: f64, angle: f64, torsion: f64) -> Vec3 {
    let bc = (c - b).normalize();
    let n = (b - a).cross(&bc).normalize();
    let m = n.cross(&bc);
    let (sa, ca) = angle.sin_cos();
    let (st, ct) = torsion.sin_cos();
    let local = Vec3::new(-length * ca, length * sa * ct, length * sa * st);
    c + bc * local.x + m * local.y + n * local.z
}

/// Geodesic distance (radians) between two rotation matrices.
pub fn rotation_distance(a: &Mat3, b: &Mat3) -> f64 {
    let r = a.transpose() * b;
    let cos = ((r.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
    cos.acos()
}

pub(crate) fn wrap_degrees(x: f64) -> f64 {
    let w = x - 360.0 * (x / 360.0).floor();
    if w >= 360.0 || w.abs() < 1e-12 {
        0.0
    } else {
        w
    }
}
