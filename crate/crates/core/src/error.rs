use std::fmt;

use thiserror::Error;

/// Which 2×2 block of the P_π block-diagonal form an entry belongs to.
///
/// `Upper` holds (ρ₁₁, ρ₁₄, ρ₄₄); `Lower` holds (ρ₂₂, ρ₂₃, ρ₃₃).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Block {
    Upper,
    Lower,
}

impl Block {
    /// 1 for the upper block, 2 for the lower one.
    pub fn id(self) -> u8 {
        match self {
            Block::Upper => 1,
            Block::Lower => 2,
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Upper => write!(f, "upper (block 1)"),
            Block::Lower => write!(f, "lower (block 2)"),
        }
    }
}

/// A single failed state invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Trace { trace: f64 },
    NegativePopulation { index: usize, value: f64 },
    Positivity { block: Block, det: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Trace { trace } => write!(f, "trace is {trace}, expected 1"),
            Violation::NegativePopulation { index, value } => {
                write!(f, "population d{} = {value} is negative", index + 1)
            }
            Violation::Positivity { block, det } => {
                write!(f, "{block} has negative determinant {det}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("state rejected: {}", list(.0))]
    InvalidState(Vec<Violation>),
    #[error("non-finite input value")]
    NonFinite,
    #[error("matrix is not X-structured; offending entries {0:?}")]
    NotXStructured(Vec<(usize, usize)>),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not special unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("basis index {0} outside 1..=15")]
    BasisIndex(usize),
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    /// True if the rejection includes a positivity failure in `block`.
    pub fn violates_block(&self, block: Block) -> bool {
        matches!(self, Error::InvalidState(v)
            if v.iter().any(|x| matches!(x, Violation::Positivity { block: b, .. } if *b == block)))
    }
}

fn list(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
