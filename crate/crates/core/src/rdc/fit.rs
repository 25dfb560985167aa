use alloc::format;

use nalgebra::{DMatrix, DVector};

use super::backcalc::angular_basis;
use super::tensor::{CartesianTensor, SaupeTensor};
use crate::structure::InternuclearVector;
use crate::{Error, Result};

/// Condition number of the scaled design matrix above which a fit is flagged.
pub const CONDITION_WARNING: f64 = 1e6;

#[derive(Clone, Debug, PartialEq)]
pub struct TensorFit {
    /// Canonical principal form of the fitted tensor.
    pub tensor: SaupeTensor,
    pub cartesian: CartesianTensor,
    /// Euclidean norm of the residual vector, Hz.
    pub residual_norm: f64,
    pub condition_number: f64,
    /// Set when `condition_number` exceeds [`CONDITION_WARNING`].
    pub degenerate: bool,
}

/// Least-squares order tensor from assigned couplings via SVD of the
/// `N x 5` system `D_i = Dmax_i * basis(v_i) . s`. Vectors of different types
/// may be mixed; each uses its own `Dmax`.
pub fn fit_order_tensor(vectors: &[InternuclearVector], rdcs: &[f64]) -> Result<TensorFit> {
    if vectors.len() != rdcs.len() {
        return Err(Error::Dimension(format!(
            "{} vectors but {} couplings",
            vectors.len(),
            rdcs.len()
        )));
    }
    if vectors.len() < 5 {
        return Err(Error::Underdetermined { needed: 5, got: vectors.len() });
    }
    let n = vectors.len();
    // Columns are scaled by a common Dmax so the condition number reflects geometry only.
    let scale = vectors.iter().map(|v| v.vtype.dmax().abs()).fold(0.0, f64::max);
    let a = DMatrix::from_fn(n, 5, |i, j| {
        angular_basis(&vectors[i].direction)[j] * vectors[i].vtype.dmax() / scale
    });
    let b = DVector::from_column_slice(rdcs);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition_number = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !condition_number.is_finite() {
        return Err(Error::DegenerateFit(format!("rank-deficient geometry ({n} vectors)")));
    }
    let x = svd
        .solve(&b, smax * 1e-14)
        .map_err(|e| Error::DegenerateFit(e.into()))?;
    let residual_norm = (&a * &x - &b).norm();
    let cartesian = CartesianTensor::from_array([
        x[0] / scale,
        x[1] / scale,
        x[2] / scale,
        x[3] / scale,
        x[4] / scale,
    ]);
    Ok(TensorFit {
        tensor: cartesian.to_principal(),
        cartesian,
        residual_norm,
        condition_number,
        degenerate: condition_number > CONDITION_WARNING,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec3;
    use crate::rdc::{back_calc_rdc, EulerAngles, VectorType};
    use alloc::vec::Vec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vectors(n: usize, seed: u64, vtype: VectorType) -> Vec<InternuclearVector> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| {
                let v = Vec3::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                );
                InternuclearVector::new(i as i32 + 1, vtype, v.normalize())
            })
            .collect()
    }

    #[test]
    fn exactly_determined_system_has_zero_residual() {
        let vs = random_vectors(5, 3, VectorType::NH);
        let rdcs = [3.0, -7.5, 12.25, 0.5, -1.0];
        let fit = fit_order_tensor(&vs, &rdcs).unwrap();
        assert!(fit.residual_norm < 1e-10, "residual {}", fit.residual_norm);
    }

    #[test]
    fn too_few_pairs_is_underdetermined() {
        let vs = random_vectors(4, 1, VectorType::NH);
        assert_eq!(
            fit_order_tensor(&vs, &[1.0; 4]),
            Err(Error::Underdetermined { needed: 5, got: 4 })
        );
    }

    #[test]
    fn coplanar_vectors_are_flagged() {
        // All vectors in the xy plane: only four independent combinations.
        let vs: Vec<_> = (0..12)
            .map(|i| {
                let t = i as f64 * 0.4;
                InternuclearVector::new(i, VectorType::NH, Vec3::new(t.cos(), t.sin(), 0.0))
            })
            .collect();
        let rdcs: Vec<f64> = (0..12).map(|i| i as f64).collect();
        match fit_order_tensor(&vs, &rdcs) {
            Ok(fit) => assert!(fit.degenerate),
            Err(e) => assert!(matches!(e, Error::DegenerateFit(_))),
        }
    }

    #[test]
    fn mixed_vector_types_are_fitted_jointly() {
        let t = SaupeTensor::new(-4e-4, -6e-4, 1e-3, EulerAngles::new(40.0, 50.0, -60.0));
        let mut vs = random_vectors(4, 11, VectorType::NH);
        vs.extend(random_vectors(4, 12, VectorType::CaHa));
        let rdcs: Vec<f64> = vs.iter().map(|v| back_calc_rdc(v, &t)).collect();
        let fit = fit_order_tensor(&vs, &rdcs).unwrap();
        assert!(fit.tensor.distance(&t) < 1e-12);
    }

    proptest! {
        #[test]
        fn noise_free_round_trip(
            sxx in -1e-3..1e-3f64, syy in -1e-3..1e-3f64,
            a in 0.0..360.0f64, b in 0.0..180.0f64, g in 0.0..360.0f64,
            seed in 0u64..1000,
        ) {
            let t = SaupeTensor::traceless(sxx, syy, EulerAngles::new(a, b, g));
            let vs = random_vectors(30, seed, VectorType::NH);
            let rdcs: Vec<f64> = vs.iter().map(|v| back_calc_rdc(v, &t)).collect();
            let fit = fit_order_tensor(&vs, &rdcs).unwrap();
            let scale = t.max_abs_principal().max(1e-12);
            prop_assert!(fit.tensor.distance(&t) / scale < 1e-8);
            let mut want = t.principal;
            want.sort_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap());
            for (x, y) in fit.tensor.principal.iter().zip(want.iter()) {
                prop_assert!((x - y).abs() / scale < 1e-8);
            }
        }
    }
}
