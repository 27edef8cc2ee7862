//! Two further constraint systems: vectors and linear sum constraints for
//! broadcast protocols, and gap-order constraints for integral relational
//! automata.

mod broadcast;
mod ira;

use thiserror::Error;

pub use broadcast::{b_entails, expand_ad_to_b, AdAtom, AdClass, AdConstraint, VectorConstraint};
pub use ira::{
    expand_s2_to_s1, s1_entails, s1_satisfies, s2_entails, s2_satisfies, ConstRange,
    S1Constraint, S2Atom, S2Constraint, DEFAULT_EXPANSION_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GalleryError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("variable x{var} outside 1..={dim}")]
    VariableOutOfRange { var: usize, dim: usize },
    #[error("atom {0} repeats a variable")]
    RepeatedVariable(String),
    #[error("atoms do not fit class {0:?}")]
    ClassMismatch(AdClass),
    #[error("constraints range over different constant sets")]
    RangeMismatch,
    #[error("empty constant range {cmin}..{cmax}")]
    EmptyRange { cmin: i64, cmax: i64 },
    #[error("expansion too large: {size} exceeds cap {cap}")]
    SizeLimit { size: usize, cap: usize },
    #[error("atom {0} bounds an unbounded gap from above")]
    NotExpressible(String),
    #[error("{0}")]
    Parse(String),
}
