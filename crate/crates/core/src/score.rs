//! Distances between experimental and calculated density profiles.

use alloc::format;
use alloc::vec::Vec;


use crate::kde::{exp_nonpositive, KernelSpec, PointSet, Whitener};
use crate::pdp::{build_grid_pdp_on, shared_axes, GridPdp};
use crate::{Error, Result};

/// Sum of absolute cell-mass differences between two grids on the same axes.
/// Lies in `[0, 2]`.
pub fn score_grid(e: &GridPdp, c: &GridPdp) -> Result<f64> {
    if e.axes != c.axes || e.values.len() != c.values.len() {
        return Err(Error::Dimension("grids differ in range or resolution".into()));
    }
    let area = e.cell_area();
    let s: f64 = e.values.iter().zip(&c.values).map(|(a, b)| (a - b).abs()).sum::<f64>() * area;
    debug_assert!(s <= 2.0 + 1e-9);
    Ok(s.min(2.0))
}

/// Builds both grids on the union of the data ranges and scores them.
pub fn score_grid_data(e: &PointSet, c: &PointSet, spec: &KernelSpec, resolution: usize) -> Result<f64> {
    let axes = shared_axes(e, c, spec, resolution)?;
    score_grid(&build_grid_pdp_on(e, spec, axes)?, &build_grid_pdp_on(c, spec, axes)?)
}

/// Mean absolute density difference over the sites `e ∪ c`:
/// `(1 / |sites|) Σ |ê(s) - ĉ(s)|`.
pub fn score_points(e: &PointSet, c: &PointSet, spec: &KernelSpec) -> Result<f64> {
    PointScorer::new(e, spec)?.score(c)
}

/// Point scorer with the experimental side precomputed: whitened points in
/// column layout and `ê` at its own points.
pub struct PointScorer {
    whitener: Whitener,
    norm: f64,
    cols: Vec<Vec<f64>>,
    self_sums: Vec<f64>,
}

/// Per-call buffers, reusable across calls.
#[derive(Default)]
pub struct PointScratch {
    d2: Vec<f64>,
    ce: Vec<f64>,
    cc: Vec<f64>,
    ec: Vec<f64>,
}

impl PointScorer {
    pub fn new(e: &PointSet, spec: &KernelSpec) -> Result<Self> {
        if e.is_empty() {
            return Err(Error::EmptyData);
        }
        if e.dim() != spec.dim() {
            return Err(Error::Dimension(format!("data of dimension {}, kernel {}", e.dim(), spec.dim())));
        }
        let whitener = spec.whitener();
        let cols = columns(&whitener.whiten(e));
        let n = e.len();
        let mut self_sums = alloc::vec![0.0; n];
        let mut d2 = alloc::vec![0.0; n];
        for (j, s) in self_sums.iter_mut().enumerate() {
            let q: Vec<f64> = cols.iter().map(|c| c[j]).collect();
            sq_dist(&cols, &q, &mut d2);
            *s = d2.iter().map(|&x| exp_nonpositive(-0.5 * x)).sum();
        }
        Ok(Self { norm: whitener.norm(), whitener, cols, self_sums })
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn len(&self) -> usize {
        self.self_sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.self_sums.is_empty()
    }

    pub(crate) fn whitener(&self) -> &Whitener {
        &self.whitener
    }

    pub fn score(&self, c: &PointSet) -> Result<f64> {
        if c.is_empty() {
            return Err(Error::EmptyData);
        }
        if c.dim() != self.dim() {
            return Err(Error::Dimension(format!("data of dimension {}, kernel {}", c.dim(), self.dim())));
        }
        let cols = columns(&self.whitener.whiten(c));
        Ok(self.score_whitened(&cols, &mut PointScratch::default()))
    }

    /// Scores already-whitened calculated points given as one column per
    /// dimension.
    pub fn score_whitened(&self, c: &[Vec<f64>], scratch: &mut PointScratch) -> f64 {
        let n = self.len();
        let m = c[0].len();
        let k = self.dim();
        scratch.d2.resize(n.max(m), 0.0);
        reset(&mut scratch.ce, n);
        reset(&mut scratch.cc, m);
        reset(&mut scratch.ec, m);
        let mut q = [0.0; 16];
        let mut q_vec = Vec::new();
        let q: &mut [f64] = if k <= 16 {
            &mut q[..k]
        } else {
            q_vec.resize(k, 0.0);
            &mut q_vec
        };

        for j in 0..m {
            for (d, col) in c.iter().enumerate() {
                q[d] = col[j];
            }
            let d2 = &mut scratch.d2[..n];
            sq_dist(&self.cols, q, d2);
            scratch.ec[j] = accumulate_kernel(d2, &mut scratch.ce);

            // Calculated points against earlier calculated points.
            let d2 = &mut scratch.d2[..j];
            sq_dist_prefix(c, q, d2);
            let s = accumulate_kernel(d2, &mut scratch.cc[..j]);
            scratch.cc[j] += s + 1.0;
        }

        let (inv_n, inv_m) = (1.0 / n as f64, 1.0 / m as f64);
        let mut total = 0.0;
        for (e_self, ce) in self.self_sums.iter().zip(&scratch.ce) {
            total += (e_self * inv_n - ce * inv_m).abs();
        }
        for (ec, cc) in scratch.ec.iter().zip(&scratch.cc) {
            total += (ec * inv_n - cc * inv_m).abs();
        }
        self.norm * total / (n + m) as f64
    }
}

fn reset(v: &mut Vec<f64>, n: usize) {
    v.clear();
    v.resize(n, 0.0);
}

fn columns(p: &PointSet) -> Vec<Vec<f64>> {
    (0..p.dim()).map(|d| p.column(d)).collect()
}

#[inline]
fn sq_dist(cols: &[Vec<f64>], q: &[f64], out: &mut [f64]) {
    out.fill(0.0);
    for (col, &qd) in cols.iter().zip(q) {
        for (o, &x) in out.iter_mut().zip(col.iter()) {
            let t = x - qd;
            *o += t * t;
        }
    }
}

#[inline]
fn sq_dist_prefix(cols: &[Vec<f64>], q: &[f64], out: &mut [f64]) {
    let len = out.len();
    out.fill(0.0);
    for (col, &qd) in cols.iter().zip(q) {
        for (o, &x) in out.iter_mut().zip(col[..len].iter()) {
            let t = x - qd;
            *o += t * t;
        }
    }
}

/// Adds `exp(-d2 / 2)` into `acc` element-wise and returns the total.
#[inline]
fn accumulate_kernel(d2: &[f64], acc: &mut [f64]) -> f64 {
    let mut lanes = [0.0f64; 4];
    let mut a = d2.chunks_exact(4);
    let mut b = acc.chunks_exact_mut(4);
    for (x, y) in (&mut a).zip(&mut b) {
        for l in 0..4 {
            let v = exp_nonpositive(-0.5 * x[l]);
            y[l] += v;
            lanes[l] += v;
        }
    }
    let mut s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (x, y) in a.remainder().iter().zip(b.into_remainder()) {
        let v = exp_nonpositive(-0.5 * x);
        *y += v;
        s += v;
    }
    s
}

/// Legacy grid scorer with a fixed experimental point set; grids are rebuilt
/// per call on the shared range.
pub struct GridScorer {
    e: PointSet,
    spec: KernelSpec,
    resolution: usize,
}

impl GridScorer {
    pub fn new(e: &PointSet, spec: &KernelSpec, resolution: usize) -> Result<Self> {
        if e.dim() != 2 {
            return Err(Error::Mode(e.dim()));
        }
        if e.is_empty() {
            return Err(Error::EmptyData);
        }
        if resolution == 0 {
            return Err(Error::Config("grid resolution must be positive".into()));
        }
        shared_axes(e, e, spec, resolution)?;
        Ok(Self { e: e.clone(), spec: spec.clone(), resolution })
    }

    pub fn score(&self, c: &PointSet) -> Result<f64> {
        score_grid_data(&self.e, c, &self.spec, self.resolution)
    }
}
