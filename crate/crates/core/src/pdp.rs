//! Probability density profiles: dense 2-D grids for the legacy scorer and
//! point evaluations for the n-dimensional scorer.

use alloc::format;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::kde::{KernelSpec, PointSet};
use crate::{Error, Result};

pub const DEFAULT_RESOLUTION: usize = 64;
/// Grid padding beyond the data range, in kernel standard deviations.
pub const GRID_PAD_SIGMAS: f64 = 2.0;

/// `n` equal cells spanning `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridAxis {
    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.width()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.center(i)).collect()
    }

    fn covering(lo: f64, hi: f64, pad: f64, n: usize) -> Self {
        Self { lo: lo - pad, hi: hi + pad, n }
    }
}

/// Normalized density on a 2-D grid; `values[i * ny + j]` is the density at
/// cell `(i, j)` and sums to one when multiplied by the cell area.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridPdp {
    pub axes: [GridAxis; 2],
    pub values: Vec<f64>,
}

impl GridPdp {
    pub fn cell_area(&self) -> f64 {
        self.axes[0].width() * self.axes[1].width()
    }

    pub fn mass(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.axes[1].n + j] * self.cell_area()
    }

    pub fn masses(&self) -> Vec<f64> {
        let a = self.cell_area();
        self.values.iter().map(|v| v * a).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    pub fn max_density(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Density evaluated at a set of sites.
#[derive(Clone, Debug, PartialEq)]
pub struct PointPdp {
    pub sites: PointSet,
    pub likelihoods: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PdpMap {
    Grid(GridPdp),
    Points(PointPdp),
}

fn require_2d(points: &PointSet, spec: &KernelSpec) -> Result<()> {
    if points.dim() != 2 {
        return Err(Error::Mode(points.dim()));
    }
    if spec.dim() != 2 {
        return Err(Error::Dimension(format!("kernel of dimension {} for 2-D data", spec.dim())));
    }
    if points.is_empty() {
        return Err(Error::EmptyData);
    }
    Ok(())
}

/// Axes covering the union of both point sets' ranges, padded by two kernel
/// standard deviations.
pub fn shared_axes(a: &PointSet, b: &PointSet, spec: &KernelSpec, resolution: usize) -> Result<[GridAxis; 2]> {
    require_2d(a, spec)?;
    require_2d(b, spec)?;
    let sd = spec.std_devs();
    let mut axes = [GridAxis { lo: 0.0, hi: 0.0, n: resolution }; 2];
    for (d, axis) in axes.iter_mut().enumerate() {
        let (lo_a, hi_a) = a.min_max(d).ok_or(Error::EmptyData)?;
        let (lo_b, hi_b) = b.min_max(d).ok_or(Error::EmptyData)?;
        *axis = GridAxis::covering(lo_a.min(lo_b), hi_a.max(hi_b), GRID_PAD_SIGMAS * sd[d], resolution);
    }
    Ok(axes)
}

/// Grid over the points' own padded range.
pub fn build_grid_pdp(points: &PointSet, spec: &KernelSpec, resolution: usize) -> Result<GridPdp> {
    let axes = shared_axes(points, points, spec, resolution)?;
    build_grid_pdp_on(points, spec, axes)
}

/// Kernel density on the given axes, renormalized to unit total mass.
pub fn build_grid_pdp_on(points: &PointSet, spec: &KernelSpec, axes: [GridAxis; 2]) -> Result<GridPdp> {
    require_2d(points, spec)?;
    if axes.iter().any(|a| a.n == 0 || !(a.hi > a.lo)) {
        return Err(Error::Dimension("empty grid axis".into()));
    }
    let mut values = if spec.is_diagonal() {
        separable_density(points, spec, &axes)
    } else {
        let w = spec.whitener();
        let norm = w.norm() / points.len() as f64;
        let (xs, ys) = (axes[0].centers(), axes[1].centers());
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        let mut z = [0.0; 2];
        for &x in &xs {
            for &y in &ys {
                let mut s = 0.0;
                for p in points.rows() {
                    let diff = [x - p[0], y - p[1]];
                    w.whiten_into(&diff, &mut z);
                    s += (-0.5 * (z[0] * z[0] + z[1] * z[1])).exp();
                }
                out.push(norm * s);
            }
        }
        out
    };
    let grid_area = axes[0].width() * axes[1].width();
    let total: f64 = values.iter().sum::<f64>() * grid_area;
    if !(total > 0.0) {
        return Err(Error::InvalidKernel("kernel mass underflows on the grid".into()));
    }
    for v in &mut values {
        *v /= total;
    }
    Ok(GridPdp { axes, values })
}

/// Diagonal kernels factor into per-axis Gaussians, turning the grid into a
/// sum of outer products.
fn separable_density(points: &PointSet, spec: &KernelSpec, axes: &[GridAxis; 2]) -> Vec<f64> {
    let sd = spec.std_devs();
    let n = points.len();
    let (nx, ny) = (axes[0].n, axes[1].n);
    let (xs, ys) = (axes[0].centers(), axes[1].centers());
    let mut gx = alloc::vec![0.0; n * nx];
    let mut gy = alloc::vec![0.0; n * ny];
    for (p, row) in points.rows().enumerate() {
        for (i, x) in xs.iter().enumerate() {
            let u = (x - row[0]) / sd[0];
            gx[p * nx + i] = (-0.5 * u * u).exp();
        }
        for (j, y) in ys.iter().enumerate() {
            let u = (y - row[1]) / sd[1];
            gy[p * ny + j] = (-0.5 * u * u).exp();
        }
    }
    let norm = 1.0 / (2.0 * core::f64::consts::PI * sd[0] * sd[1] * n as f64);
    let mut out = alloc::vec![0.0; nx * ny];
    for p in 0..n {
        let gyp = &gy[p * ny..(p + 1) * ny];
        for i in 0..nx {
            let a = gx[p * nx + i];
            if a == 0.0 {
                continue;
            }
            let cell = &mut out[i * ny..(i + 1) * ny];
            for (c, b) in cell.iter_mut().zip(gyp) {
                *c += a * b;
            }
        }
    }
    for v in &mut out {
        *v *= norm;
    }
    out
}

/// Densities of `points` at each of `sites`.
pub fn build_point_pdp(points: &PointSet, spec: &KernelSpec, sites: &PointSet) -> Result<PointPdp> {
    let likelihoods = sites.rows().map(|s| crate::kde::kde_eval(points, spec, s)).collect::<Result<Vec<_>>>()?;
    Ok(PointPdp { sites: sites.clone(), likelihoods })
}
