use std::collections::BTreeMap;
use std::fmt;

use super::bound::Bound;
use super::dbm::Dbm;
use super::ZoneError;
use crate::tpn::{Age, Interval, Marking, PlaceId};

/// An upward-closed set of markings: at least `m` tokens, token `i` in
/// place `placing[i-1]`, ages constrained by a difference bound matrix over
/// indices `0..=m` (index 0 is the reference).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExistentialZone {
    placing: Vec<PlaceId>,
    dbm: Dbm,
}

/// Injection from zone tokens (0-based here) to marking token positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness(pub Vec<usize>);

impl ExistentialZone {
    /// Builds a zone from a full `(m+1)×(m+1)` table. Only non-strict finite
    /// bounds and `∞` are accepted; diagonal entries are ignored.
    pub fn new(placing: Vec<PlaceId>, rows: Vec<Vec<Bound>>) -> Result<Self, ZoneError> {
        let dim = placing.len() + 1;
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(ZoneError::Shape {
                expected: dim,
            });
        }
        let mut dbm = Dbm::unconstrained(placing.len());
        for (j, row) in rows.iter().enumerate() {
            for (i, &b) in row.iter().enumerate() {
                if i == j {
                    continue;
                }
                if b.is_strict() {
                    return Err(ZoneError::StrictBound);
                }
                dbm.set(j, i, b);
            }
        }
        Ok(ExistentialZone { placing, dbm })
    }

    /// Convenience constructor from `Option<i64>` entries (`None` is `∞`).
    pub fn from_table(placing: &[usize], rows: &[&[Option<i64>]]) -> Result<Self, ZoneError> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.map_or(Bound::INF, Bound::le))
                    .collect()
            })
            .collect();
        Self::new(placing.iter().map(|&p| PlaceId(p)).collect(), rows)
    }

    /// Tokens in the given places with no age restriction.
    pub fn unconstrained(placing: Vec<PlaceId>) -> Self {
        let mut dbm = Dbm::unconstrained(placing.len());
        for i in 1..=placing.len() {
            dbm.set(0, i, Bound::ZERO);
        }
        ExistentialZone { placing, dbm }
    }

    pub fn token_count(&self) -> usize {
        self.placing.len()
    }

    pub fn placing(&self) -> &[PlaceId] {
        &self.placing
    }

    pub fn dbm(&self) -> &Dbm {
        &self.dbm
    }

    /// `D(j, i)`, the bound on `x_j - x_i`.
    pub fn bound(&self, j: usize, i: usize) -> Bound {
        self.dbm.get(j, i)
    }

    /// Closure under the triangle inequality, after clamping lower bounds
    /// so that every age is nonnegative. Empty zones collapse to one
    /// canonical matrix.
    pub fn normalize(&self) -> Self {
        let mut dbm = self.dbm.clone();
        for i in 0..dbm.dim() {
            dbm.tighten(i, i, Bound::ZERO);
            dbm.tighten(0, i, Bound::ZERO);
        }
        dbm.close();
        if !dbm.closed_is_consistent() {
            dbm = Dbm::empty(self.token_count());
        }
        ExistentialZone {
            placing: self.placing.clone(),
            dbm,
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.normalize() == *self
    }

    pub fn is_consistent(&self) -> bool {
        self.normalize().dbm.closed_is_consistent()
    }

    /// Number of required tokens per place.
    pub fn place_counts(&self) -> BTreeMap<PlaceId, usize> {
        let mut counts = BTreeMap::new();
        for &p in &self.placing {
            *counts.entry(p).or_insert(0) += 1;
        }
        counts
    }

    /// The first witness (in lexicographic order of images) under which
    /// `marking` satisfies the zone.
    pub fn member(&self, marking: &Marking) -> Option<Witness> {
        let m = self.token_count();
        if m > marking.len() || (0..=m).any(|i| !self.bound(i, i).admits(Age::from_integer(0))) {
            return None;
        }
        let counts = self.place_counts();
        for (p, need) in &counts {
            if marking.tokens().iter().filter(|t| t.place == *p).count() < *need {
                return None;
            }
        }
        let mut assignment = Vec::with_capacity(m);
        let mut used = vec![false; marking.len()];
        self.extend_witness(marking, &mut assignment, &mut used)
            .then_some(Witness(assignment))
    }

    fn extend_witness(&self, marking: &Marking, assignment: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let k = assignment.len();
        if k == self.token_count() {
            return true;
        }
        let zi = k + 1;
        let tokens = marking.tokens();
        for (pos, tok) in tokens.iter().enumerate() {
            if used[pos] || tok.place != self.placing[k] {
                continue;
            }
            let x = tok.age;
            if !self.bound(zi, 0).admits(x) || !self.bound(0, zi).admits(-x) {
                continue;
            }
            let fits = assignment.iter().enumerate().all(|(prev, &ppos)| {
                let y = tokens[ppos].age;
                let zj = prev + 1;
                self.bound(zi, zj).admits(x - y) && self.bound(zj, zi).admits(y - x)
            });
            if !fits {
                continue;
            }
            used[pos] = true;
            assignment.push(pos);
            if self.extend_witness(marking, assignment, used) {
                return true;
            }
            assignment.pop();
            used[pos] = false;
        }
        false
    }

    pub fn contains(&self, marking: &Marking) -> bool {
        self.member(marking).is_some()
    }

    /// Restricts the age of token `i` (1-based) to `interval`. The result is
    /// not re-normalized.
    pub fn conjunction(&self, interval: Interval, i: usize) -> Result<Self, ZoneError> {
        self.check_index(i)?;
        let mut dbm = self.dbm.clone();
        let upper = interval.hi().map_or(Bound::INF, Bound::le);
        dbm.tighten(i, 0, upper);
        dbm.tighten(0, i, Bound::le(-interval.lo()));
        Ok(ExistentialZone {
            placing: self.placing.clone(),
            dbm,
        })
    }

    /// Requires one more token in `place` with age in `interval`,
    /// unrelated to the existing tokens. Not re-normalized.
    pub fn addition(&self, place: PlaceId, interval: Interval) -> Self {
        let mut dbm = self.dbm.push_clock();
        let k = self.token_count() + 1;
        dbm.set(k, 0, interval.hi().map_or(Bound::INF, Bound::le));
        dbm.set(0, k, Bound::le(-interval.lo()));
        let mut placing = self.placing.clone();
        placing.push(place);
        ExistentialZone { placing, dbm }
    }

    /// Forgets token `i` (1-based). Not re-normalized; on a normalized zone
    /// this is exact projection.
    pub fn abstraction(&self, i: usize) -> Result<Self, ZoneError> {
        self.check_index(i)?;
        let mut placing = self.placing.clone();
        placing.remove(i - 1);
        Ok(ExistentialZone {
            placing,
            dbm: self.dbm.remove_clock(i),
        })
    }

    fn check_index(&self, i: usize) -> Result<(), ZoneError> {
        if i == 0 || i > self.token_count() {
            return Err(ZoneError::TokenIndex {
                index: i,
                tokens: self.token_count(),
            });
        }
        Ok(())
    }

    pub(crate) fn require_normalized(&self) -> Result<(), ZoneError> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(ZoneError::UnnormalizedInput)
        }
    }

    /// Markings that reach the zone by letting time pass: lower age bounds
    /// are dropped to zero, everything else is kept.
    pub fn pre_time(&self) -> Result<Self, ZoneError> {
        self.require_normalized()?;
        let mut dbm = self.dbm.clone();
        for i in 1..dbm.dim() {
            dbm.set(0, i, Bound::ZERO);
        }
        Ok(ExistentialZone {
            placing: self.placing.clone(),
            dbm,
        })
    }

    /// Tokens sorted by place, then by their bounds against the reference;
    /// the byte serialization of that arrangement.
    pub fn canonical_key(&self) -> Vec<u8> {
        let m = self.token_count();
        let mut order: Vec<usize> = (1..=m).collect();
        order.sort_by(|&a, &b| {
            (self.placing[a - 1], self.bound(a, 0), self.bound(0, a))
                .cmp(&(self.placing[b - 1], self.bound(b, 0), self.bound(0, b)))
        });
        let mut idx = vec![0];
        idx.extend(order.iter().copied());
        let mut key = Vec::with_capacity(8 + m * 8 + idx.len() * idx.len() * 9);
        key.extend((m as u64).to_be_bytes());
        for &i in &order {
            key.extend((self.placing[i - 1].0 as u64).to_be_bytes());
        }
        for &j in &idx {
            for &i in &idx {
                match self.bound(j, i) {
                    Bound::Finite { value, strict } => {
                        key.push(if strict { 0 } else { 1 });
                        // order-preserving encoding of signed values
                        key.extend(((value as u64) ^ (1 << 63)).to_be_bytes());
                    }
                    Bound::Infinite => {
                        key.push(2);
                        key.extend([0u8; 8]);
                    }
                }
            }
        }
        key
    }

    /// Largest absolute finite constant in the matrix.
    pub fn max_constant(&self) -> i64 {
        self.dbm
            .cells()
            .iter()
            .filter_map(|b| b.value())
            .map(i64::abs)
            .max()
            .unwrap_or(0)
    }

    /// Tightens every token to the single age `age`. Used by init checks.
    pub(crate) fn with_fixed_ages(&self, ages: &[Age]) -> Option<Dbm> {
        let mut dbm = self.dbm.clone();
        for (k, a) in ages.iter().enumerate() {
            if !a.is_integer() {
                return None;
            }
            let v = a.to_integer();
            dbm.tighten(k + 1, 0, Bound::le(v));
            dbm.tighten(0, k + 1, Bound::le(-v));
        }
        Some(dbm)
    }
}

impl fmt::Display for ExistentialZone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.token_count();
        write!(f, "m={m} placing=[")?;
        for (i, p) in self.placing.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "p{}", p.0)?;
        }
        f.write_str("]")?;
        for j in 0..=m {
            f.write_str(if j == 0 { " | " } else { "; " })?;
            for i in 0..=m {
                if i > 0 {
                    f.write_str(" ")?;
                }
                if i == j {
                    f.write_str("-")?;
                } else {
                    write!(f, "{}", self.bound(j, i))?;
                }
            }
        }
        Ok(())
    }
}
