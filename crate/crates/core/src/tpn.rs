//! Timed Petri nets: tokens carry real-valued ages, arcs carry age
//! intervals. Ages are exact rationals.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Age = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlaceId(pub usize);

/// Closed interval `[lo, hi]` of natural bounds; `hi == None` is `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: i64,
    hi: Option<i64>,
}

impl Interval {
    pub fn new(lo: i64, hi: Option<i64>) -> Result<Self, TpnError> {
        if lo < 0 || hi.is_some_and(|h| h < lo) {
            return Err(TpnError::BadInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn closed(lo: i64, hi: i64) -> Self {
        Self::new(lo, Some(hi)).expect("closed interval with lo <= hi")
    }

    pub fn at_least(lo: i64) -> Self {
        Self::new(lo, None).expect("nonnegative lower bound")
    }

    /// `[0, ∞)`.
    pub fn any() -> Self {
        Interval { lo: 0, hi: None }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> Option<i64> {
        self.hi
    }

    pub fn contains(&self, age: &Age) -> bool {
        *age >= Age::from_integer(self.lo) && self.hi.is_none_or(|h| *age <= Age::from_integer(h))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) => write!(f, "[{},{}]", self.lo, h),
            None => write!(f, "[{},inf)", self.lo),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub place: PlaceId,
    pub interval: Interval,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub name: String,
    pub inputs: Vec<Arc>,
    pub outputs: Vec<Arc>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TpnError {
    #[error("interval lower bound {lo} exceeds upper bound {hi:?} or is negative")]
    BadInterval { lo: i64, hi: Option<i64> },
    #[error("transition `{transition}` references unknown place #{place}")]
    UnknownPlace { transition: String, place: usize },
    #[error("duplicate place name `{0}`")]
    DuplicatePlace(String),
    #[error("age {age} is not a multiple of 1/{denom}")]
    OffGrid { age: Age, denom: i64 },
    #[error("grid denominator must be positive")]
    BadDenominator,
    #[error("negative delay")]
    NegativeDelay,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    places: Vec<String>,
    transitions: Vec<Transition>,
    cmax: i64,
}

impl Net {
    pub fn new(places: Vec<String>, transitions: Vec<Transition>) -> Result<Self, TpnError> {
        let mut seen = BTreeSet::new();
        for p in &places {
            if !seen.insert(p.as_str()) {
                return Err(TpnError::DuplicatePlace(p.clone()));
            }
        }
        let mut cmax = 0;
        for t in &transitions {
            for arc in t.inputs.iter().chain(&t.outputs) {
                if arc.place.0 >= places.len() {
                    return Err(TpnError::UnknownPlace {
                        transition: t.name.clone(),
                        place: arc.place.0,
                    });
                }
                cmax = cmax.max(arc.interval.lo);
                if let Some(h) = arc.interval.hi {
                    cmax = cmax.max(h);
                }
            }
        }
        Ok(Net {
            places,
            transitions,
            cmax,
        })
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, name: &str) -> Option<&Transition> {
        self.transitions.iter().find(|t| t.name == name)
    }

    pub fn place_id(&self, name: &str) -> Option<PlaceId> {
        self.places.iter().position(|p| p == name).map(PlaceId)
    }

    pub fn place_name(&self, id: PlaceId) -> &str {
        &self.places[id.0]
    }

    /// Largest finite constant on any arc.
    pub fn cmax(&self) -> i64 {
        self.cmax
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token {
    pub place: PlaceId,
    pub age: Age,
}

/// A finite multiset of tokens, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Marking {
    tokens: Vec<Token>,
}

impl Marking {
    pub fn new(mut tokens: Vec<Token>) -> Self {
        tokens.sort();
        Marking { tokens }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, Age)>>(pairs: I) -> Self {
        Self::new(
            pairs
                .into_iter()
                .map(|(p, age)| Token {
                    place: PlaceId(p),
                    age,
                })
                .collect(),
        )
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Multiset inclusion with exact `(place, age)` equality.
    pub fn is_sub_multiset(&self, other: &Marking) -> bool {
        let mut rest = other.tokens.iter().peekable();
        'outer: for t in &self.tokens {
            for o in rest.by_ref() {
                match o.cmp(t) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn add(&self, extra: &[Token]) -> Marking {
        let mut tokens = self.tokens.clone();
        tokens.extend_from_slice(extra);
        Marking::new(tokens)
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "(p{},{})", t.place.0, t.age)?;
        }
        f.write_str(">")
    }
}

pub fn delay_successor(marking: &Marking, delta: Age) -> Result<Marking, TpnError> {
    if delta < Age::zero() {
        return Err(TpnError::NegativeDelay);
    }
    Ok(Marking::new(
        marking
            .tokens
            .iter()
            .map(|t| Token {
                place: t.place,
                age: t.age + delta,
            })
            .collect(),
    ))
}

/// All results of firing `t` where each produced token's age is drawn from
/// `age_choices` restricted to its arc interval.
pub fn discrete_successors(marking: &Marking, t: &Transition, age_choices: &[Age]) -> Vec<Marking> {
    let mut consumed_sets = BTreeSet::new();
    let mut used = vec![false; marking.len()];
    choose_inputs(marking, &t.inputs, 0, &mut used, &mut consumed_sets);

    let mut out = BTreeSet::new();
    for used in consumed_sets {
        let rest: Vec<Token> = marking
            .tokens
            .iter()
            .zip(&used)
            .filter(|(_, &u)| !u)
            .map(|(t, _)| t.clone())
            .collect();
        let mut produced = Vec::with_capacity(t.outputs.len());
        produce(&rest, &t.outputs, age_choices, &mut produced, &mut out);
    }
    out.into_iter().collect()
}

fn choose_inputs(
    marking: &Marking,
    arcs: &[Arc],
    k: usize,
    used: &mut Vec<bool>,
    found: &mut BTreeSet<Vec<bool>>,
) {
    if k == arcs.len() {
        found.insert(used.clone());
        return;
    }
    let arc = arcs[k];
    for (i, tok) in marking.tokens.iter().enumerate() {
        if !used[i] && tok.place == arc.place && arc.interval.contains(&tok.age) {
            used[i] = true;
            choose_inputs(marking, arcs, k + 1, used, found);
            used[i] = false;
        }
    }
}

fn produce(
    rest: &[Token],
    arcs: &[Arc],
    age_choices: &[Age],
    produced: &mut Vec<Token>,
    out: &mut BTreeSet<Marking>,
) {
    let k = produced.len();
    if k == arcs.len() {
        let mut tokens = rest.to_vec();
        tokens.extend(produced.iter().cloned());
        out.insert(Marking::new(tokens));
        return;
    }
    let arc = arcs[k];
    for age in age_choices.iter().filter(|a| arc.interval.contains(a)) {
        produced.push(Token {
            place: arc.place,
            age: *age,
        });
        produce(rest, arcs, age_choices, produced, out);
        produced.pop();
    }
}

/// Multiples of `1/denom` in `[0, cap]`.
pub fn age_grid(denom: i64, cap: i64) -> Vec<Age> {
    (0..=cap * denom).map(|k| Age::new(k, denom)).collect()
}

/// One-step successors on the `1/denom` age grid, with ages above
/// `cmax + 1` clamped to `cmax + 1`.
pub fn grid_successors(
    marking: &Marking,
    net: &Net,
    denom: i64,
    age_cap: i64,
) -> Result<Vec<Marking>, TpnError> {
    if denom <= 0 {
        return Err(TpnError::BadDenominator);
    }
    for t in marking.tokens() {
        if !(t.age * denom).is_integer() || t.age < Age::zero() {
            return Err(TpnError::OffGrid { age: t.age, denom });
        }
    }
    let ceiling = Age::from_integer(net.cmax() + 1);
    let clamp = |m: Marking| {
        Marking::new(
            m.tokens
                .into_iter()
                .map(|t| Token {
                    place: t.place,
                    age: t.age.min(ceiling),
                })
                .collect(),
        )
    };
    let grid = age_grid(denom, age_cap);
    let mut out = BTreeSet::new();
    for delta in &grid {
        out.insert(clamp(delay_successor(marking, *delta)?));
    }
    for t in net.transitions() {
        for m in discrete_successors(marking, t, &grid) {
            out.insert(clamp(m));
        }
    }
    Ok(out.into_iter().collect())
}
