//! Rado's structure: a well quasi-ordered constraint family whose
//! disjunctive closure is not well quasi-ordered.
//!
//! Constraints denote subsets of `{(c, d) | c < d}`. `Phi { a, b }` holds at
//! `(c, d)` when `c > b` or (`c == a` and `d >= b`); `Psi(j)` is the
//! disjunction of `Phi { a, b: j }` over `a < j`.

/// Default upper bound on the constants a constraint may mention.
pub const DEFAULT_MAX_INDEX: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RadoConstraint {
    Phi { a: u32, b: u32 },
    Psi(u32),
}

impl RadoConstraint {
    pub fn phi(a: u32, b: u32) -> Option<Self> {
        Self::phi_within(a, b, DEFAULT_MAX_INDEX)
    }

    pub fn phi_within(a: u32, b: u32, max_index: u32) -> Option<Self> {
        (a < b && b <= max_index).then_some(RadoConstraint::Phi { a, b })
    }

    pub fn psi(j: u32) -> Option<Self> {
        Self::psi_within(j, DEFAULT_MAX_INDEX)
    }

    pub fn psi_within(j: u32, max_index: u32) -> Option<Self> {
        (j >= 1 && j <= max_index).then_some(RadoConstraint::Psi(j))
    }

    /// Largest constant mentioned.
    pub fn max_constant(&self) -> u32 {
        match *self {
            RadoConstraint::Phi { b, .. } => b,
            RadoConstraint::Psi(j) => j,
        }
    }

    pub fn contains(&self, c: u32, d: u32) -> bool {
        if c >= d {
            return false;
        }
        match *self {
            RadoConstraint::Phi { a, b } => c > b || (c == a && d >= b),
            RadoConstraint::Psi(j) => (0..j).any(|a| c > j || (c == a && d >= j)),
        }
    }
}

/// `[[stronger]] ⊆ [[weaker]]`, decided on the grid `c < d <= max + 2`.
///
/// Both memberships are constant in `c` once `c` exceeds every constant, and
/// constant in `d` once `d` reaches every constant, so the grid is a complete
/// witness set.
pub fn rado_entails(weaker: &RadoConstraint, stronger: &RadoConstraint) -> bool {
    let bound = weaker.max_constant().max(stronger.max_constant()) + 2;
    rado_entails_bounded(weaker, stronger, bound)
}

/// Inclusion checked on every grid point `c < d <= bound`.
pub fn rado_entails_bounded(weaker: &RadoConstraint, stronger: &RadoConstraint, bound: u32) -> bool {
    (0..=bound).all(|d| (0..d).all(|c| !stronger.contains(c, d) || weaker.contains(c, d)))
}
