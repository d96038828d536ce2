//! Orbit classification and separability of two-qubit X-states.

pub mod error;
pub mod linalg;
pub mod orbit;
pub mod sampler;
pub mod separability;
pub mod su4;
pub mod tolerance;
pub mod xstate;

pub use error::{Block, Error, Result, Violation};
pub use tolerance::Tolerances;
pub use xstate::{HVector, XState};
