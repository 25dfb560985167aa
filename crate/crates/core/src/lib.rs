//! Probability density profile analysis (PDPA) of unassigned residual dipolar
//! couplings.
//!
//! The crate identifies which member of a structure library best explains a set
//! of RDCs whose residue assignment is unknown. Experimental and back-calculated
//! RDCs are turned into n-dimensional kernel density profiles and compared, with
//! the orientation of the anchor alignment medium searched exhaustively.
//!
//! Everything here is pure computation and builds without `std`; file formats,
//! the CLI and timing live in the `pdpa` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod analysis;
mod error;
pub mod experiment;
pub mod geometry;
pub mod kde;
pub mod pdp;
pub mod rdc;
pub mod score;
pub mod search;
pub mod structure;
pub mod synthesis;

pub use error::{Error, Result};

pub use analysis::{funnel, FunnelReport};
pub use kde::{kde_eval, KernelSpec, PointSet};
pub use pdp::{build_grid_pdp, GridPdp, PdpMap};
pub use rdc::{
    back_calc_rdc, dmax, euler_to_matrix, fit_order_tensor, rotate_alignment, AlignmentSet,
    EulerAngles, SaupeTensor, VectorType,
};
pub use score::{score_grid, score_points};
pub use search::{screen_library, search_orientation, ScoreMode, ScoreRecord, SearchConfig};
pub use structure::{bb_rmsd, extract_vectors, perturb_torsions, InternuclearVector, ProteinStructure};
pub use synthesis::{corrupt, strip_assignment, synthesize, NoiseSpec, RdcDataset};
