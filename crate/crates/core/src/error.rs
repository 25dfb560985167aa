use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("structure contains no residues")]
    EmptyStructure,

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("residue {0}: no preceding carbonyl carbon to place an amide hydrogen")]
    NoHydrogen(i32),

    #[error("residue {residue}: missing atom {atom}")]
    MissingAtom { residue: i32, atom: &'static str },

    #[error("unknown vector type `{0}`")]
    UnknownVectorType(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("no data points")]
    EmptyData,

    #[error("underdetermined: need at least {needed} observations, got {got}")]
    Underdetermined { needed: usize, got: usize },

    #[error("grid mode requires 2-dimensional data, got {0} dimensions")]
    Mode(usize),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("configuration error: {0}")]
    Config(String),
}
