//! Existential zones: a constraint system over markings of timed Petri
//! nets with unboundedly many tokens.

mod bound;
mod dbm;
mod entail;
mod pre;
mod system;
mod zone;

use thiserror::Error;

pub use bound::Bound;
pub use dbm::Dbm;
pub use entail::{entails, entails_single_witness};
pub use pre::pre_discrete;
pub use system::{uniform_init_satisfiable, InitCondition, Multiplicity, UniformInitSpec, ZoneSystem};
pub use zone::{ExistentialZone, Witness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZoneError {
    #[error("zone table must be {expected}x{expected}")]
    Shape { expected: usize },
    #[error("strict bounds are not accepted in zone definitions")]
    StrictBound,
    #[error("token index {index} out of range 1..={tokens}")]
    TokenIndex { index: usize, tokens: usize },
    #[error("operation requires a normalized zone")]
    UnnormalizedInput,
}
