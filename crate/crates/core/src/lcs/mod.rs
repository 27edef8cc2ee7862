//! Lossy channel systems: upward-closed word constraints per channel.

mod expr;
mod system;
mod word;

pub use expr::{expr_entails, normalize_expr, ExprParseError, L1Set, L2Expr};
pub use system::{
    lcs_entails, lcs_pre, lcs_pre_labelled, LcsConstraint, LcsError, LcsModel, LcsOp, LcsSystem,
    LcsTransition,
};
pub use word::{minimal_common_supersequences, minimize_words, subword, word_order};
