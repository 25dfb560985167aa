//! Exhaustive anchor-orientation search and library screening.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::geometry::Mat3;
use crate::kde::{KernelSpec, PointSet};
use crate::rdc::{angular_basis, AlignmentSet, CartesianTensor, EulerAngles};
use crate::score::{GridScorer, PointScorer, PointScratch};
use crate::structure::{bb_rmsd, extract_vectors, ProteinStructure};
use crate::synthesis::{ChannelId, RdcDataset};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ScoreMode {
    /// 64x64 grid scorer, two channels only.
    #[cfg_attr(feature = "serde", serde(rename = "grid2d"))]
    Grid2d,
    /// Kernel densities compared at the data points, any dimension.
    #[default]
    #[cfg_attr(feature = "serde", serde(rename = "point"))]
    Point,
}

impl ScoreMode {
    pub fn label(self) -> &'static str {
        match self {
            ScoreMode::Grid2d => "grid2d",
            ScoreMode::Point => "point",
        }
    }
}

impl fmt::Display for ScoreMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ScoreMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "grid2d" | "grid-2d" | "grid" => Ok(ScoreMode::Grid2d),
            "point" | "point-nd" | "points" => Ok(ScoreMode::Point),
            other => Err(Error::Config(format!("unknown score mode '{other}' (grid2d | point)"))),
        }
    }
}

/// Euler grid: `alpha, gamma` in `[0, 360)` and `beta` in `[0, 180]`, all in
/// steps of `step` degrees, enumerated with `gamma` fastest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientationGrid {
    step: f64,
    n_alpha: usize,
    n_beta: usize,
}

impl OrientationGrid {
    pub fn new(step_deg: f64) -> Result<Self> {
        let q = 180.0 / step_deg;
        if !(step_deg > 0.0) || !step_deg.is_finite() || (q - q.round()).abs() > 1e-9 {
            return Err(Error::Config(format!("search step {step_deg} must divide 180")));
        }
        let q = q.round() as usize;
        Ok(Self { step: step_deg, n_alpha: 2 * q, n_beta: q + 1 })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.n_alpha * self.n_beta * self.n_alpha
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.n_alpha, self.n_beta, self.n_alpha)
    }

    pub fn get(&self, index: usize) -> EulerAngles {
        let g = index % self.n_alpha;
        let b = (index / self.n_alpha) % self.n_beta;
        let a = index / (self.n_alpha * self.n_beta);
        EulerAngles::new(a as f64 * self.step, b as f64 * self.step, g as f64 * self.step)
    }

    pub fn iter(&self) -> impl Iterator<Item = EulerAngles> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchConfig {
    pub step_deg: f64,
    pub mode: ScoreMode,
    pub grid_resolution: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { step_deg: 5.0, mode: ScoreMode::Point, grid_resolution: crate::pdp::DEFAULT_RESOLUTION }
    }
}

impl SearchConfig {
    pub fn with_step(step_deg: f64) -> Self {
        Self { step_deg, ..Self::default() }
    }

    pub fn with_mode(mut self, mode: ScoreMode) -> Self {
        self.mode = mode;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScoreRecord {
    pub structure: String,
    /// Best score over the orientation grid; infinite if the search failed.
    pub score: f64,
    /// Anchor orientation attaining `score`.
    pub orientation: EulerAngles,
    pub mode: ScoreMode,
    pub bb_rmsd: Option<f64>,
    /// Reason the structure could not be scored.
    pub failure: Option<String>,
}

impl ScoreRecord {
    pub fn failed(structure: &str, mode: ScoreMode, err: &Error) -> Self {
        Self {
            structure: structure.into(),
            score: f64::INFINITY,
            orientation: EulerAngles::IDENTITY,
            mode,
            bb_rmsd: None,
            failure: Some(err.to_string()),
        }
    }

    pub fn is_failure(&self) -> bool {
        self.failure.is_some()
    }
}

/// Ascending by score, failures last, ties broken by structure id.
pub fn sort_records(records: &mut [ScoreRecord]) {
    records.sort_by(|a, b| {
        a.is_failure()
            .cmp(&b.is_failure())
            .then(a.score.total_cmp(&b.score))
            .then_with(|| a.structure.cmp(&b.structure))
    });
}

enum Scorer {
    Point(PointScorer),
    Grid(GridScorer),
}

/// Search state built once per experiment and reused for every structure.
pub struct OrientationSearch {
    grid: OrientationGrid,
    mode: ScoreMode,
    channels: Vec<ChannelId>,
    media: Vec<Mat3>,
    /// Per channel, the kernel standard deviation used to scale values (diagonal
    /// kernels only); `None` means full whitening.
    scales: Option<Vec<f64>>,
    scorer: Scorer,
}

/// Subject vectors prepared for repeated back-calculation: per channel the
/// angular basis of each joint residue scaled by `Dmax`.
struct Subject {
    basis: Vec<Vec<[f64; 5]>>,
    len: usize,
}

impl OrientationSearch {
    pub fn new(alignments: &AlignmentSet, e_data: &RdcDataset, spec: &KernelSpec, config: &SearchConfig) -> Result<Self> {
        let grid = OrientationGrid::new(config.step_deg)?;
        let e = e_data.joint_points();
        if e.is_empty() {
            return Err(Error::EmptyData);
        }
        if spec.dim() != e_data.dim() {
            return Err(Error::Dimension(format!("kernel of dimension {} for {} channels", spec.dim(), e_data.dim())));
        }
        for ch in &e_data.channels {
            if ch.medium >= alignments.len() {
                return Err(Error::Config(format!(
                    "channel refers to medium {} but only {} defined",
                    ch.medium + 1,
                    alignments.len()
                )));
            }
        }
        let scorer = match config.mode {
            ScoreMode::Point => Scorer::Point(PointScorer::new(&e, spec)?),
            ScoreMode::Grid2d => Scorer::Grid(GridScorer::new(&e, spec, config.grid_resolution)?),
        };
        let scales = spec.is_diagonal().then(|| spec.std_devs());
        Ok(Self {
            grid,
            mode: config.mode,
            channels: e_data.channels.clone(),
            media: alignments.anchor_frame_matrices(),
            scales,
            scorer,
        })
    }

    pub fn grid(&self) -> &OrientationGrid {
        &self.grid
    }

    pub fn mode(&self) -> ScoreMode {
        self.mode
    }

    fn prepare(&self, subject: &ProteinStructure) -> Result<Subject> {
        // Residues carrying a vector for every channel's type.
        let mut by_type = BTreeMap::new();
        for ch in &self.channels {
            by_type.entry(ch.vtype).or_insert_with(|| {
                extract_vectors(subject, ch.vtype)
                    .vectors
                    .into_iter()
                    .map(|v| (v.residue, v.direction))
                    .collect::<BTreeMap<_, _>>()
            });
        }
        let mut residues: Vec<i32> = by_type.values().next().map(|m| m.keys().copied().collect()).unwrap_or_default();
        residues.retain(|r| by_type.values().all(|m| m.contains_key(r)));
        if residues.is_empty() {
            return Err(Error::EmptyData);
        }
        let basis = self
            .channels
            .iter()
            .map(|ch| {
                let dmax = ch.vtype.dmax();
                let dirs = &by_type[&ch.vtype];
                residues
                    .iter()
                    .map(|r| angular_basis(&dirs[r]).map(|b| b * dmax))
                    .collect()
            })
            .collect();
        Ok(Subject { basis, len: residues.len() })
    }

    /// Calculated points for the anchor at `angles`, written column-wise into
    /// `cols`, whitened when `whiten` is set.
    fn back_calculate(&self, subject: &Subject, angles: &EulerAngles, cols: &mut [Vec<f64>], whiten: bool) {
        let r = angles.to_matrix();
        let comps: Vec<[f64; 5]> =
            self.media.iter().map(|m| CartesianTensor::from_matrix(&(r * m * r.transpose())).as_array()).collect();
        for (c, ch) in self.channels.iter().enumerate() {
            let mut s = comps[ch.medium];
            if whiten {
                if let Some(scales) = &self.scales {
                    for x in &mut s {
                        *x /= scales[c];
                    }
                }
            }
            let col = &mut cols[c];
            col.clear();
            col.extend(subject.basis[c].iter().map(|b| b[0] * s[0] + b[1] * s[1] + b[2] * s[2] + b[3] * s[3] + b[4] * s[4]));
        }
        if whiten && self.scales.is_none() {
            if let Scorer::Point(p) = &self.scorer {
                let k = cols.len();
                let (mut x, mut z) = (alloc::vec![0.0; k], alloc::vec![0.0; k]);
                for i in 0..subject.len {
                    for d in 0..k {
                        x[d] = cols[d][i];
                    }
                    p.whitener().whiten_into(&x, &mut z);
                    for d in 0..k {
                        cols[d][i] = z[d];
                    }
                }
            }
        }
    }

    fn to_points(cols: &[Vec<f64>]) -> PointSet {
        let k = cols.len();
        let n = cols.first().map_or(0, |c| c.len());
        let mut flat = Vec::with_capacity(n * k);
        for i in 0..n {
            for col in cols {
                flat.push(col[i]);
            }
        }
        PointSet::from_flat(k, flat).expect("rectangular columns")
    }

    /// Back-calculated data of `subject` with the anchor PAF at `angles`.
    pub fn calculated_points(&self, subject: &ProteinStructure, angles: &EulerAngles) -> Result<PointSet> {
        let prepared = self.prepare(subject)?;
        let mut cols = alloc::vec![Vec::new(); self.channels.len()];
        self.back_calculate(&prepared, angles, &mut cols, false);
        Ok(Self::to_points(&cols))
    }

    pub fn score_at(&self, subject: &ProteinStructure, angles: &EulerAngles) -> Result<f64> {
        let prepared = self.prepare(subject)?;
        let mut cols = alloc::vec![Vec::new(); self.channels.len()];
        let mut scratch = PointScratch::default();
        self.score_prepared(&prepared, angles, &mut cols, &mut scratch)
    }

    fn score_prepared(
        &self,
        subject: &Subject,
        angles: &EulerAngles,
        cols: &mut [Vec<f64>],
        scratch: &mut PointScratch,
    ) -> Result<f64> {
        match &self.scorer {
            Scorer::Point(p) => {
                self.back_calculate(subject, angles, cols, true);
                Ok(p.score_whitened(cols, scratch))
            }
            Scorer::Grid(g) => {
                self.back_calculate(subject, angles, cols, false);
                g.score(&Self::to_points(cols))
            }
        }
    }

    /// Best `(score, grid index)` over grid indices in `range`; ties keep the
    /// lowest index.
    pub fn best_in_range(&self, subject: &ProteinStructure, range: core::ops::Range<usize>) -> Result<(f64, usize)> {
        let prepared = self.prepare(subject)?;
        let mut cols = alloc::vec![Vec::with_capacity(prepared.len); self.channels.len()];
        let mut scratch = PointScratch::default();
        let mut best = (f64::INFINITY, range.start);
        for i in range {
            let s = self.score_prepared(&prepared, &self.grid.get(i), &mut cols, &mut scratch)?;
            if s < best.0 {
                best = (s, i);
            }
        }
        Ok(best)
    }

    pub fn run(&self, subject: &ProteinStructure) -> Result<ScoreRecord> {
        let (score, index) = self.best_in_range(subject, 0..self.grid.len())?;
        Ok(self.record(subject, score, index))
    }

    /// Record for a finished search; `index` is a grid index.
    pub fn record(&self, subject: &ProteinStructure, score: f64, index: usize) -> ScoreRecord {
        ScoreRecord {
            structure: subject.id.clone(),
            score,
            orientation: self.grid.get(index),
            mode: self.mode,
            bb_rmsd: None,
            failure: None,
        }
    }

    /// Searches one structure and attaches its backbone rmsd to `reference`;
    /// failures become failed records.
    pub fn screen_one(&self, subject: &ProteinStructure, reference: Option<&ProteinStructure>) -> ScoreRecord {
        let outcome = self.run(subject).and_then(|mut rec| {
            if let Some(r) = reference {
                rec.bb_rmsd = Some(bb_rmsd(subject, r)?);
            }
            Ok(rec)
        });
        outcome.unwrap_or_else(|e| ScoreRecord::failed(&subject.id, self.mode, &e))
    }
}

/// Minimum score of `subject` over the anchor orientation grid.
pub fn search_orientation(
    subject: &ProteinStructure,
    alignments: &AlignmentSet,
    e_data: &RdcDataset,
    spec: &KernelSpec,
    config: &SearchConfig,
) -> Result<ScoreRecord> {
    OrientationSearch::new(alignments, e_data, spec, config)?.run(subject)
}

/// One record per structure, sorted ascending by score. Structures that cannot
/// be scored are reported as failed records at the end.
pub fn screen_library(
    library: &[ProteinStructure],
    alignments: &AlignmentSet,
    e_data: &RdcDataset,
    spec: &KernelSpec,
    config: &SearchConfig,
    reference: Option<&ProteinStructure>,
) -> Result<Vec<ScoreRecord>> {
    if library.is_empty() {
        return Err(Error::EmptyData);
    }
    let search = OrientationSearch::new(alignments, e_data, spec, config)?;
    let mut records: Vec<ScoreRecord> = library.iter().map(|s| search.screen_one(s, reference)).collect();
    sort_records(&mut records);
    Ok(records)
}
