//! Multivariate Gaussian kernel density estimation.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result};

/// Flat row-major storage of `k`-dimensional points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    data: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize) -> Self {
        Self { dim, data: Vec::new() }
    }

    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || !data.len().is_multiple_of(dim) {
            return Err(Error::Dimension(format!("{} values do not form {dim}-tuples", data.len())));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(dim: usize, rows: &[R]) -> Result<Self> {
        let mut out = Self::new(dim);
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::Dimension(format!("row of length {} in {dim}-dimensional set", r.len())));
            }
            out.data.extend_from_slice(r);
        }
        Ok(out)
    }

    /// Panics if `row.len() != self.dim()`.
    pub fn push(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.dim, "point dimension");
        self.data.extend_from_slice(row);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim.max(1))
    }

    pub fn column(&self, d: usize) -> Vec<f64> {
        self.rows().map(|r| r[d]).collect()
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Concatenation of two sets of equal dimension.
    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!("{} vs {} dimensions", self.dim, other.dim)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self { dim: self.dim, data })
    }

    pub fn min_max(&self, d: usize) -> Option<(f64, f64)> {
        self.rows().map(|r| r[d]).fold(None, |acc, x| match acc {
            None => Some((x, x)),
            Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
        })
    }
}

/// Kernel covariance (Hz^2), symmetric positive definite.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KernelSpec {
    dim: usize,
    covariance: Vec<f64>,
}

/// Lower bound on per-dimension kernel standard deviations, Hz.
pub const BANDWIDTH_FLOOR: f64 = 1.0;

impl KernelSpec {
    /// Diagonal covariance from per-dimension standard deviations.
    pub fn diagonal(std_devs: &[f64]) -> Result<Self> {
        let k = std_devs.len();
        let mut cov = alloc::vec![0.0; k * k];
        for (i, s) in std_devs.iter().enumerate() {
            cov[i * k + i] = s * s;
        }
        Self::full(k, cov)
    }

    pub fn full(dim: usize, covariance: Vec<f64>) -> Result<Self> {
        if dim == 0 || covariance.len() != dim * dim {
            return Err(Error::InvalidKernel(format!("{} entries for a {dim}x{dim} covariance", covariance.len())));
        }
        for i in 0..dim {
            for j in 0..i {
                if (covariance[i * dim + j] - covariance[j * dim + i]).abs() > 1e-12 {
                    return Err(Error::InvalidKernel("covariance is not symmetric".into()));
                }
            }
        }
        if covariance.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidKernel("non-finite covariance".into()));
        }
        let spec = Self { dim, covariance };
        spec.cholesky()?;
        Ok(spec)
    }

    /// Silverman's rule of thumb on each dimension,
    /// `0.9 min(sd, IQR / 1.34) n^(-1/5)`, bounded below by `floor`.
    pub fn silverman(points: &PointSet, floor: f64) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::EmptyData);
        }
        let sds: Vec<f64> = (0..points.dim())
            .map(|d| (silverman_bandwidth(&points.column(d))).max(floor))
            .collect();
        Self::diagonal(&sds)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn covariance(&self) -> &[f64] {
        &self.covariance
    }

    pub fn std_devs(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.covariance[i * self.dim + i].sqrt()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.covariance[i * self.dim + j] == 0.0))
    }

    fn cholesky(&self) -> Result<DMatrix<f64>> {
        let m = DMatrix::from_row_slice(self.dim, self.dim, &self.covariance);
        m.cholesky()
            .map(|c| c.l())
            .ok_or_else(|| Error::InvalidKernel("covariance is not positive definite".into()))
    }

    pub(crate) fn whitener(&self) -> Whitener {
        let l = self.cholesky().expect("validated at construction");
        let log_det_half: f64 = (0..self.dim).map(|i| l[(i, i)].ln()).sum();
        Whitener {
            dim: self.dim,
            l,
            log_norm: -0.5 * self.dim as f64 * (2.0 * PI).ln() - log_det_half,
        }
    }
}

fn silverman_bandwidth(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let spread = (quantile(&sorted, 0.75) - quantile(&sorted, 0.25)) / 1.34;
    let scale = if spread > 0.0 { sd.min(spread) } else { sd };
    0.9 * scale * n.powf(-0.2)
}

/// Linear interpolation between order statistics of sorted data.
pub(crate) fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Maps points to coordinates where the kernel is the standard normal.
pub(crate) struct Whitener {
    dim: usize,
    l: DMatrix<f64>,
    /// `ln((2 pi)^(-k/2) |Sigma|^(-1/2))`.
    pub log_norm: f64,
}

impl Whitener {
    pub fn whiten_into(&self, x: &[f64], out: &mut [f64]) {
        // Forward substitution with the Cholesky factor.
        for i in 0..self.dim {
            let mut s = x[i];
            for (j, o) in out.iter().enumerate().take(i) {
                s -= self.l[(i, j)] * o;
            }
            out[i] = s / self.l[(i, i)];
        }
    }

    pub fn whiten(&self, points: &PointSet) -> PointSet {
        let mut out = alloc::vec![0.0; points.as_flat().len()];
        for (src, dst) in points.rows().zip(out.chunks_exact_mut(self.dim)) {
            self.whiten_into(src, dst);
        }
        PointSet { dim: self.dim, data: out }
    }

    #[allow(dead_code)]
    pub fn whiten_vec(&self, x: &[f64]) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim);
        self.whiten_into(x, out.as_mut_slice());
        out
    }

    pub fn norm(&self) -> f64 {
        self.log_norm.exp()
    }
}

/// Mean of Gaussian kernels centred on `points`, evaluated at `query`, using the
/// normalized multivariate normal density.
pub fn kde_eval(points: &PointSet, spec: &KernelSpec, query: &[f64]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyData);
    }
    if points.dim() != spec.dim() || query.len() != spec.dim() {
        return Err(Error::Dimension(format!(
            "points {}, kernel {}, query {}",
            points.dim(),
            spec.dim(),
            query.len()
        )));
    }
    if query.iter().any(|x| !x.is_finite()) {
        return Err(Error::Dimension("non-finite query".into()));
    }
    let w = spec.whitener();
    let k = spec.dim();
    let mut diff = alloc::vec![0.0; k];
    let mut z = alloc::vec![0.0; k];
    let mut sum = 0.0;
    for p in points.rows() {
        for d in 0..k {
            diff[d] = query[d] - p[d];
        }
        w.whiten_into(&diff, &mut z);
        let r2: f64 = z.iter().map(|v| v * v).sum();
        sum += (-0.5 * r2).exp();
    }
    Ok(w.norm() * sum / points.len() as f64)
}

#[allow(clippy::excessive_precision)]
const LN2_HI: f64 = 6.931_471_803_691_238_164_9e-1;
#[allow(clippy::excessive_precision)]
const LN2_LO: f64 = 1.908_214_929_270_587_700_0e-10;
const SHIFT: f64 = 6_755_399_441_055_744.0; // 1.5 * 2^52

/// `exp(x)` for `x <= 0` written with plain arithmetic so loops over it
/// vectorize. Inputs below -708 are clamped; relative error is a few ulp.
#[inline(always)]
pub(crate) fn exp_nonpositive(x: f64) -> f64 {
    let x = if x < -708.0 { -708.0 } else { x };
    let t = x * core::f64::consts::LOG2_E + SHIFT;
    let k = t - SHIFT;
    let r = (x - k * LN2_HI) - k * LN2_LO;
    let scale = f64::from_bits(t.to_bits().wrapping_add(1023) << 52);
    // Taylor series of e^r on |r| <= ln2 / 2.
    let p = 1.0 / 479_001_600.0;
    let p = p * r + 1.0 / 39_916_800.0;
    let p = p * r + 1.0 / 3_628_800.0;
    let p = p * r + 1.0 / 362_880.0;
    let p = p * r + 1.0 / 40_320.0;
    let p = p * r + 1.0 / 5_040.0;
    let p = p * r + 1.0 / 720.0;
    let p = p * r + 1.0 / 120.0;
    let p = p * r + 1.0 / 24.0;
    let p = p * r + 1.0 / 6.0;
    let p = p * r + 0.5;
    let p = p * r + 1.0;
    let p = p * r + 1.0;
    p * scale
}
