//! Backward-reachability coverability checking for well-structured
//! transition systems.
//!
//! The [`engine`] saturates a set of upward-closed constraints under
//! predecessors; backends plug in through [`engine::ConstraintSystem`].
//! [`ezone`] is the flagship backend for timed Petri nets; [`lcs`] covers
//! lossy channel systems; [`gallery`] holds constraint systems for
//! broadcast protocols and integral relational automata.

pub mod check;
pub mod engine;
pub mod ezone;
pub mod fischer;
pub mod gallery;
pub mod lcs;
pub mod model;
pub mod qo;
pub mod tpn;
