use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("coordinate {0:?} outside domain")]
    OutsideDomain(Vec<usize>),
    #[error("length mismatch: got {got}, domain has {want} cells")]
    LengthMismatch { got: usize, want: usize },
    #[error("symbol {0} out of alphabet [0, {1})")]
    SymbolOutOfRange(usize, usize),
    #[error("rank {rank} does not fit in {width} base-{q} digits")]
    RankOverflow { rank: usize, width: usize, q: usize },
    #[error("rank {rank} out of range for a set of {size} elements")]
    RankOutOfRange { rank: usize, size: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
    #[error("corrupted input: {0}")]
    Corruption(String),
    #[error("budget exceeded: enumerating would visit {total} arrays, budget is {budget}")]
    BudgetExceeded { total: u128, budget: u128 },
    #[error("parse error: {0}")]
    Parse(String),
}
