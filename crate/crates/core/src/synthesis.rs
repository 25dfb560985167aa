//! Synthetic RDC datasets: back-calculation from a structure, the noise and
//! deletion model, and removal of residue assignments.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kde::PointSet;
use crate::rdc::{back_calc_direction, SaupeTensor, VectorType};
use crate::structure::{extract_vectors, ProteinStructure};
use crate::{Error, Result};

/// One RDC channel: a vector type observed in an alignment medium.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChannelId {
    /// Index into the alignment media.
    pub medium: usize,
    pub vtype: VectorType,
}

impl ChannelId {
    pub const fn new(medium: usize, vtype: VectorType) -> Self {
        Self { medium, vtype }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DatasetContent {
    /// Per channel, `(residue, value)` pairs in residue order.
    Assigned(Vec<Vec<(i32, f64)>>),
    /// Joint tuples (one value per channel, from a residue observed in every
    /// channel) and per-channel marginal values in ascending order.
    Unassigned { tuples: Vec<Vec<f64>>, marginals: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RdcDataset {
    pub channels: Vec<ChannelId>,
    pub content: DatasetContent,
}

impl RdcDataset {
    pub fn is_assigned(&self) -> bool {
        matches!(self.content, DatasetContent::Assigned(_))
    }

    pub fn dim(&self) -> usize {
        self.channels.len()
    }

    /// Values of one channel irrespective of assignment.
    pub fn channel_values(&self, channel: usize) -> Vec<f64> {
        match &self.content {
            DatasetContent::Assigned(ch) => ch[channel].iter().map(|&(_, v)| v).collect(),
            DatasetContent::Unassigned { marginals, .. } => marginals[channel].clone(),
        }
    }

    /// Joint n-dimensional points: residues observed in every channel.
    pub fn joint_points(&self) -> PointSet {
        match &self.content {
            DatasetContent::Assigned(ch) => {
                let mut out = PointSet::new(self.dim());
                for row in joint_rows(ch).values() {
                    out.push(row);
                }
                out
            }
            DatasetContent::Unassigned { tuples, .. } => {
                let mut out = PointSet::new(self.dim());
                for t in tuples {
                    out.push(t);
                }
                out
            }
        }
    }

    /// Assigned `(residue, value)` pairs of a channel, if assigned.
    pub fn assigned_channel(&self, channel: usize) -> Option<&[(i32, f64)]> {
        match &self.content {
            DatasetContent::Assigned(ch) => ch.get(channel).map(|v| v.as_slice()),
            DatasetContent::Unassigned { .. } => None,
        }
    }
}

fn joint_rows(channels: &[Vec<(i32, f64)>]) -> BTreeMap<i32, Vec<f64>> {
    let mut rows: BTreeMap<i32, Vec<Option<f64>>> = BTreeMap::new();
    let n = channels.len();
    for (c, values) in channels.iter().enumerate() {
        for &(res, v) in values {
            rows.entry(res).or_insert_with(|| alloc::vec![None; n])[c] = Some(v);
        }
    }
    rows.into_iter()
        .filter_map(|(res, row)| row.into_iter().collect::<Option<Vec<f64>>>().map(|r| (res, r)))
        .collect()
}

/// Uniform noise half-width (Hz), fraction of values deleted per channel, seed.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseSpec {
    pub half_width: f64,
    pub deletion: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub const fn ideal() -> Self {
        Self { half_width: 0.0, deletion: 0.0, seed: 0 }
    }

    /// +-1 Hz uniform noise with a quarter of each channel removed.
    pub const fn realistic(seed: u64) -> Self {
        Self { half_width: 1.0, deletion: 0.25, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width >= 0.0 && self.half_width.is_finite()) {
            return Err(Error::Config(format!("noise half-width {} must be >= 0", self.half_width)));
        }
        if !(0.0..1.0).contains(&self.deletion) {
            return Err(Error::Config(format!("deletion fraction {} outside [0, 1)", self.deletion)));
        }
        Ok(())
    }

    /// Values removed from a channel of `n` values: `ceil(fraction * n)`.
    pub fn deletion_count(&self, n: usize) -> usize {
        let k = (self.deletion * n as f64 - 1e-9).ceil().max(0.0) as usize;
        k.min(n)
    }

    pub fn is_ideal(&self) -> bool {
        self.half_width == 0.0 && self.deletion == 0.0
    }
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self::ideal()
    }
}

/// Back-calculates one value per eligible residue for each channel from the
/// absolute (molecular-frame) tensors of the media.
pub fn synthesize(structure: &ProteinStructure, media: &[SaupeTensor], channels: &[ChannelId]) -> Result<RdcDataset> {
    let mut out = Vec::with_capacity(channels.len());
    for ch in channels {
        let tensor = media.get(ch.medium).ok_or_else(|| {
            Error::Config(format!("channel refers to medium {} but only {} defined", ch.medium + 1, media.len()))
        })?;
        let cart = tensor.cartesian();
        let dmax = ch.vtype.dmax();
        let values = extract_vectors(structure, ch.vtype)
            .vectors
            .iter()
            .map(|v| (v.residue, back_calc_direction(&v.direction, &cart, dmax)))
            .collect();
        out.push(values);
    }
    Ok(RdcDataset { channels: channels.to_vec(), content: DatasetContent::Assigned(out) })
}

/// Removes `ceil(fraction * n)` values from each channel independently and adds
/// `Uniform(-w, w)` noise to the survivors.
pub fn corrupt(data: &RdcDataset, spec: &NoiseSpec) -> Result<RdcDataset> {
    spec.validate()?;
    let DatasetContent::Assigned(channels) = &data.content else {
        return Err(Error::Config("noise is applied to assigned data only".into()));
    };
    let mut out = Vec::with_capacity(channels.len());
    for (c, values) in channels.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(c as u64);
        let n = values.len();
        let mut keep = alloc::vec![true; n];
        for i in index::sample(&mut rng, n, spec.deletion_count(n)) {
            keep[i] = false;
        }
        let w = spec.half_width;
        let survivors = values
            .iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(&(res, v), _)| {
                let noise = if w > 0.0 { rng.random_range(-w..=w) } else { 0.0 };
                (res, v + noise)
            })
            .collect();
        out.push(survivors);
    }
    Ok(RdcDataset { channels: data.channels.clone(), content: DatasetContent::Assigned(out) })
}

/// Drops residue labels. Residues present in all channels become joint tuples,
/// shuffled by `seed`; every channel's values are kept as sorted marginals.
/// Already-unassigned data is returned unchanged.
pub fn strip_assignment(data: &RdcDataset, seed: u64) -> RdcDataset {
    let DatasetContent::Assigned(channels) = &data.content else {
        return data.clone();
    };
    let mut tuples: Vec<Vec<f64>> = joint_rows(channels).into_values().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    tuples.shuffle(&mut rng);
    let marginals = channels
        .iter()
        .map(|ch| {
            let mut v: Vec<f64> = ch.iter().map(|&(_, x)| x).collect();
            v.sort_by(f64::total_cmp);
            v
        })
        .collect();
    RdcDataset { channels: data.channels.clone(), content: DatasetContent::Unassigned { tuples, marginals } }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdc::{presets, back_calc_rdc, VectorType};
    use crate::structure::{build_backbone, synthetic};
    use alloc::vec;

    fn paper_channels() -> Vec<ChannelId> {
        vec![
            ChannelId::new(0, VectorType::NH),
            ChannelId::new(1, VectorType::NH),
            ChannelId::new(1, VectorType::CaHa),
        ]
    }

    fn assigned(channels: Vec<Vec<(i32, f64)>>) -> RdcDataset {
        let ids = (0..channels.len()).map(|m| ChannelId::new(m, VectorType::NH)).collect();
        RdcDataset { channels: ids, content: DatasetContent::Assigned(channels) }
    }

    #[test]
    fn synthesized_values_match_back_calculation() {
        let s = synthetic::alpha_protein();
        let media = presets::reference_media();
        let d = synthesize(&s, &media[..2], &paper_channels()).unwrap();
        assert_eq!(d.dim(), 3);
        for (c, ch) in d.channels.iter().enumerate() {
            let vs = extract_vectors(&s, ch.vtype).vectors;
            let values = d.assigned_channel(c).unwrap();
            assert_eq!(values.len(), vs.len());
            for (v, &(res, x)) in vs.iter().zip(values) {
                assert_eq!(v.residue, res);
                assert_eq!(x, back_calc_rdc(v, &media[ch.medium]));
            }
        }
    }

    #[test]
    fn values_respect_the_physical_bound() {
        let s = synthetic::alpha_beta_protein();
        let media = presets::reference_media();
        let d = synthesize(&s, &media, &paper_channels()).unwrap();
        let noisy = corrupt(&d, &NoiseSpec::realistic(4)).unwrap();
        for (c, ch) in noisy.channels.iter().enumerate() {
            let bound = 1.5 * ch.vtype.dmax().abs() * media[ch.medium].max_abs_principal() + 1.0;
            assert!(noisy.channel_values(c).iter().all(|v| v.is_finite() && v.abs() <= bound));
        }
    }

    #[test]
    fn zero_tensor_gives_zero_couplings() {
        let s = synthetic::alpha_protein();
        let d = synthesize(&s, &[SaupeTensor::zero(), SaupeTensor::zero()], &paper_channels()).unwrap();
        for c in 0..3 {
            assert!(d.channel_values(c).iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn single_residue_gives_at_most_one_value_per_channel() {
        let s = build_backbone("one", &[("ALA", -60.0, -45.0, 180.0)]).unwrap();
        let d = synthesize(&s, &presets::reference_media(), &paper_channels()).unwrap();
        for c in 0..3 {
            assert!(d.channel_values(c).len() <= 1);
        }
    }

    #[test]
    fn unknown_medium_is_a_configuration_error() {
        let s = synthetic::alpha_protein();
        let err = synthesize(&s, &[presets::m1()], &paper_channels()).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn ideal_noise_is_identity() {
        let d = assigned(vec![(1..=10).map(|r| (r, r as f64 * 1.5)).collect()]);
        assert_eq!(corrupt(&d, &NoiseSpec::ideal()).unwrap(), d);
    }

    #[test]
    fn realistic_noise_on_80_values() {
        let d = assigned(vec![(1..=80).map(|r| (r, (r as f64).sin() * 20.0)).collect()]);
        let c = corrupt(&d, &NoiseSpec::realistic(11)).unwrap();
        let out = c.assigned_channel(0).unwrap();
        assert_eq!(out.len(), 60);
        let src: BTreeMap<i32, f64> = d.assigned_channel(0).unwrap().iter().copied().collect();
        for &(res, v) in out {
            assert!((v - src[&res]).abs() <= 1.0);
        }
        assert_eq!(corrupt(&d, &NoiseSpec::realistic(11)).unwrap(), c);
    }

    #[test]
    fn deletion_uses_ceiling() {
        let spec = NoiseSpec { half_width: 0.0, deletion: 0.25, seed: 1 };
        let d = assigned(vec![(1..=4).map(|r| (r, r as f64)).collect(), (1..=10).map(|r| (r, r as f64)).collect()]);
        let c = corrupt(&d, &spec).unwrap();
        assert_eq!(c.assigned_channel(0).unwrap().len(), 3);
        assert_eq!(c.assigned_channel(1).unwrap().len(), 7);
        assert_eq!(NoiseSpec { deletion: 0.3, ..spec }.deletion_count(10), 3);
    }

    #[test]
    fn invalid_noise_is_rejected() {
        let d = assigned(vec![vec![(1, 1.0)]]);
        assert!(corrupt(&d, &NoiseSpec { half_width: -1.0, deletion: 0.0, seed: 0 }).is_err());
        assert!(corrupt(&d, &NoiseSpec { half_width: 1.0, deletion: 1.0, seed: 0 }).is_err());
    }

    #[test]
    fn stripping_builds_tuples_and_conserves_marginals() {
        let a: Vec<(i32, f64)> = (1..=10).map(|r| (r, r as f64)).collect();
        let b: Vec<(i32, f64)> = (1..=10).map(|r| (r, -(r as f64) * 2.0)).collect();
        let d = assigned(vec![a.clone(), b]);
        let s = strip_assignment(&d, 5);
        assert!(!s.is_assigned());
        let pts = s.joint_points();
        assert_eq!(pts.len(), 10);
        for i in 0..pts.len() {
            let row = pts.row(i);
            assert_eq!(row[1], -2.0 * row[0]);
        }
        let mut want: Vec<f64> = a.iter().map(|x| x.1).collect();
        want.sort_by(f64::total_cmp);
        assert_eq!(s.channel_values(0), want);
        assert_eq!(strip_assignment(&s, 99), s);
    }

    #[test]
    fn partial_tuples_are_dropped_from_joint_points_only() {
        let d = assigned(vec![vec![(1, 1.0), (2, 2.0), (3, 3.0)], vec![(1, 10.0), (3, 30.0)]]);
        let s = strip_assignment(&d, 0);
        assert_eq!(s.joint_points().len(), 2);
        assert_eq!(s.channel_values(0).len(), 3);
    }
}
