use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::tpn::Age;

/// A DBM entry: `≤ c`, `< c`, or unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    Finite { value: i64, strict: bool },
    Infinite,
}

impl Bound {
    pub const INF: Bound = Bound::Infinite;
    pub const ZERO: Bound = Bound::Finite {
        value: 0,
        strict: false,
    };

    pub const fn le(value: i64) -> Bound {
        Bound::Finite {
            value,
            strict: false,
        }
    }

    pub const fn lt(value: i64) -> Bound {
        Bound::Finite {
            value,
            strict: true,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Bound::Infinite)
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, Bound::Finite { strict: true, .. })
    }

    pub fn value(&self) -> Option<i64> {
        match *self {
            Bound::Finite { value, .. } => Some(value),
            Bound::Infinite => None,
        }
    }

    /// Bound of the complementary half-space: `¬(x ≤ c)` is `-x < -c`.
    /// Undefined for `∞` (the complement is empty).
    pub fn complement(&self) -> Option<Bound> {
        match *self {
            Bound::Finite { value, strict } => Some(Bound::Finite {
                value: -value,
                strict: !strict,
            }),
            Bound::Infinite => None,
        }
    }

    /// Whether a sum of differences around a cycle bounded by `self`
    /// makes the system infeasible.
    pub fn is_negative_cycle(&self) -> bool {
        match *self {
            Bound::Finite { value, strict } => value < 0 || (value == 0 && strict),
            Bound::Infinite => false,
        }
    }

    pub fn admits(&self, diff: Age) -> bool {
        match *self {
            Bound::Finite { value, strict } => {
                let c = Age::from_integer(value);
                if strict {
                    diff < c
                } else {
                    diff <= c
                }
            }
            Bound::Infinite => true,
        }
    }
}

impl Add for Bound {
    type Output = Bound;

    fn add(self, rhs: Bound) -> Bound {
        match (self, rhs) {
            (
                Bound::Finite { value: a, strict: s },
                Bound::Finite { value: b, strict: t },
            ) => Bound::Finite {
                value: a + b,
                strict: s || t,
            },
            _ => Bound::Infinite,
        }
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Infinite, Bound::Infinite) => Ordering::Equal,
            (Bound::Infinite, _) => Ordering::Greater,
            (_, Bound::Infinite) => Ordering::Less,
            (
                Bound::Finite { value: a, strict: s },
                Bound::Finite { value: b, strict: t },
            ) => a.cmp(b).then_with(|| t.cmp(s)),
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Bound::Finite { value, strict: false } => write!(f, "{value}"),
            Bound::Finite { value, strict: true } => write!(f, "<{value}"),
            Bound::Infinite => f.write_str("inf"),
        }
    }
}
