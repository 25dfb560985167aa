use alloc::string::String;
use alloc::vec::Vec;

use super::euler::EulerAngles;
use super::tensor::SaupeTensor;
use crate::geometry::Mat3;
use crate::{Error, Result};

/// One alignment medium: principal order parameters and the PAF orientation
/// relative to the anchor medium's PAF (identity for the anchor itself).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AlignmentMedium {
    pub label: String,
    pub principal: [f64; 3],
    pub relative: EulerAngles,
}

/// Order tensors of `n` media with the anchor orientation left free. Medium 0 is
/// the anchor.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AlignmentSet {
    media: Vec<AlignmentMedium>,
}

impl AlignmentSet {
    pub fn new(media: Vec<AlignmentMedium>) -> Result<Self> {
        if media.is_empty() {
            return Err(Error::Config("alignment set needs at least one medium".into()));
        }
        Ok(Self { media })
    }

    /// Splits absolute (molecular-frame) tensors into relative form. Returns the
    /// set and the anchor's absolute orientation.
    pub fn from_tensors(labels: &[String], tensors: &[SaupeTensor]) -> Result<(Self, EulerAngles)> {
        if labels.len() != tensors.len() {
            return Err(Error::Dimension("one label per tensor required".into()));
        }
        let anchor = tensors.first().ok_or(Error::EmptyData)?;
        let anchor_frame = anchor.frame();
        let media = labels
            .iter()
            .zip(tensors)
            .enumerate()
            .map(|(i, (label, t))| AlignmentMedium {
                label: label.clone(),
                principal: t.principal,
                relative: if i == 0 {
                    EulerAngles::IDENTITY
                } else {
                    EulerAngles::from_matrix(&(anchor_frame.transpose() * t.frame()))
                },
            })
            .collect();
        Ok((Self { media }, anchor.orientation))
    }

    pub fn media(&self) -> &[AlignmentMedium] {
        &self.media
    }

    pub fn len(&self) -> usize {
        self.media.len()
    }

    pub fn is_empty(&self) -> bool {
        self.media.is_empty()
    }

    /// Free parameters of the relative description: two independent anchor
    /// order parameters plus five per additional medium, i.e. `5n - 3`.
    pub fn free_parameter_count(&self) -> usize {
        5 * self.media.len() - 3
    }

    /// Absolute tensors when the anchor PAF sits at `anchor`.
    pub fn tensors_at(&self, anchor: &EulerAngles) -> Vec<SaupeTensor> {
        let ra = anchor.to_matrix();
        self.media
            .iter()
            .map(|m| SaupeTensor {
                principal: m.principal,
                orientation: EulerAngles::from_matrix(&(ra * m.relative.to_matrix())),
            })
            .collect()
    }

    /// Each medium's tensor expressed in the anchor PAF, `Rrel diag(S) Rrel^T`.
    pub fn anchor_frame_matrices(&self) -> Vec<Mat3> {
        self.media
            .iter()
            .map(|m| {
                let r = m.relative.to_matrix();
                r * Mat3::from_diagonal(&m.principal.into()) * r.transpose()
            })
            .collect()
    }
}
