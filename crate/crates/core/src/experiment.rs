//! End-to-end preparation of a screening experiment from a reference structure:
//! synthetic data, order-tensor fits on the assigned data, unassigned
//! experimental points and the default kernel.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::kde::{KernelSpec, BANDWIDTH_FLOOR};
use crate::rdc::{fit_order_tensor, AlignmentSet, EulerAngles, SaupeTensor, TensorFit};
use crate::structure::{extract_vectors, InternuclearVector, ProteinStructure};
use crate::synthesis::{corrupt, strip_assignment, synthesize, ChannelId, DatasetContent, NoiseSpec, RdcDataset};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Experiment {
    pub alignments: AlignmentSet,
    /// Fitted absolute orientation of the anchor PAF.
    pub anchor: EulerAngles,
    pub fits: Vec<TensorFit>,
    /// Assigned data after noise and deletion.
    pub assigned: RdcDataset,
    /// Unassigned experimental data used for screening.
    pub data: RdcDataset,
    pub kernel: KernelSpec,
}

/// Media must be referenced contiguously from index 0 by `channels`.
pub fn prepare(
    reference: &ProteinStructure,
    media: &[SaupeTensor],
    channels: &[ChannelId],
    noise: &NoiseSpec,
    strip_seed: u64,
) -> Result<Experiment> {
    if channels.is_empty() {
        return Err(Error::Config("no channels".into()));
    }
    let used = channels.iter().map(|c| c.medium).max().unwrap_or(0) + 1;
    if used > media.len() {
        return Err(Error::Config(format!("channels use {used} media but {} defined", media.len())));
    }
    if let Some(m) = (0..used).find(|m| !channels.iter().any(|c| c.medium == *m)) {
        return Err(Error::Config(format!("medium {} has no channel", m + 1)));
    }
    let clean = synthesize(reference, &media[..used], channels)?;
    let assigned = if noise.is_ideal() { clean } else { corrupt(&clean, noise)? };
    let fits = fit_media(reference, &assigned, used)?;
    let labels: Vec<String> = (0..used).map(|m| format!("M{}", m + 1)).collect();
    let tensors: Vec<SaupeTensor> = fits.iter().map(|f| f.tensor).collect();
    let (alignments, anchor) = AlignmentSet::from_tensors(&labels, &tensors)?;
    let data = strip_assignment(&assigned, strip_seed);
    let kernel = KernelSpec::silverman(&data.joint_points(), BANDWIDTH_FLOOR)?;
    Ok(Experiment { alignments, anchor, fits, assigned, data, kernel })
}

/// One order-tensor fit per medium over all its assigned channels.
pub fn fit_media(structure: &ProteinStructure, data: &RdcDataset, media: usize) -> Result<Vec<TensorFit>> {
    let DatasetContent::Assigned(values) = &data.content else {
        return Err(Error::Config("tensor fitting needs assigned data".into()));
    };
    let mut by_type = BTreeMap::new();
    for ch in &data.channels {
        by_type.entry(ch.vtype).or_insert_with(|| {
            extract_vectors(structure, ch.vtype)
                .vectors
                .into_iter()
                .map(|v| (v.residue, v))
                .collect::<BTreeMap<i32, InternuclearVector>>()
        });
    }
    (0..media)
        .map(|m| {
            let mut vecs = Vec::new();
            let mut rdcs = Vec::new();
            for (ch, vals) in data.channels.iter().zip(values) {
                if ch.medium != m {
                    continue;
                }
                for (res, d) in vals {
                    if let Some(v) = by_type[&ch.vtype].get(res) {
                        vecs.push(*v);
                        rdcs.push(*d);
                    }
                }
            }
            fit_order_tensor(&vecs, &rdcs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdc::{presets, VectorType};
    use crate::structure::synthetic;
    use alloc::vec;

    #[test]
    fn noise_free_fit_recovers_media() {
        let s = synthetic::beta_protein();
        let media = presets::reference_media();
        let ch = vec![
            ChannelId::new(0, VectorType::NH),
            ChannelId::new(1, VectorType::NH),
            ChannelId::new(1, VectorType::CaHa),
        ];
        let exp = prepare(&s, &media, &ch, &NoiseSpec::ideal(), 7).unwrap();
        assert_eq!(exp.alignments.len(), 2);
        for (fit, truth) in exp.fits.iter().zip(&media) {
            assert!(fit.tensor.distance(truth) < 1e-10);
        }
        let rebuilt = exp.alignments.tensors_at(&exp.anchor);
        for (t, truth) in rebuilt.iter().zip(&media) {
            assert!(t.distance(truth) < 1e-10);
        }
        assert!(!exp.data.is_assigned());
    }

    #[test]
    fn medium_without_channel_is_rejected() {
        let s = synthetic::alpha_protein();
        let ch = vec![ChannelId::new(1, VectorType::NH)];
        assert!(matches!(
            prepare(&s, &presets::reference_media(), &ch, &NoiseSpec::ideal(), 0),
            Err(Error::Config(_))
        ));
    }
}
