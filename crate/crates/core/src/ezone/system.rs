use std::collections::BTreeMap;

use super::entail::entails_normalized;
use super::pre::pre_discrete;
use super::zone::ExistentialZone;
use super::ZoneError;
use crate::engine::ConstraintSystem;
use crate::tpn::{Age, Marking, Net, PlaceId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(u64),
    Omega,
}

impl Multiplicity {
    pub fn admits(&self, n: usize) -> bool {
        match *self {
            Multiplicity::Finite(k) => n as u64 <= k,
            Multiplicity::Omega => true,
        }
    }
}

/// A family of initial markings: for each listed place, any number of
/// tokens up to the multiplicity, all of the given age. Unlisted places
/// are empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UniformInitSpec {
    pub places: BTreeMap<PlaceId, (Multiplicity, i64)>,
}

impl UniformInitSpec {
    pub fn with(mut self, place: PlaceId, count: Multiplicity, age: i64) -> Self {
        self.places.insert(place, (count, age));
        self
    }
}

/// Whether some marking of the family satisfies `zone`. Every token's
/// place fixes its age, so only the per-place counts and the matrix with
/// those ages pinned need checking.
pub fn uniform_init_satisfiable(zone: &ExistentialZone, spec: &UniformInitSpec) -> bool {
    let mut ages = Vec::with_capacity(zone.token_count());
    for p in zone.placing() {
        match spec.places.get(p) {
            Some((_, age)) => ages.push(Age::from_integer(*age)),
            None => return false,
        }
    }
    for (p, n) in zone.place_counts() {
        if !spec.places[&p].0.admits(n) {
            return false;
        }
    }
    match zone.with_fixed_ages(&ages) {
        Some(mut dbm) => {
            dbm.close();
            dbm.closed_is_consistent()
        }
        None => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitCondition {
    Uniform(UniformInitSpec),
    Marking(Marking),
}

/// Existential zones over a fixed net, as an engine backend.
#[derive(Debug, Clone)]
pub struct ZoneSystem {
    net: Net,
}

impl ZoneSystem {
    pub fn new(net: Net) -> Self {
        ZoneSystem { net }
    }

    pub fn net(&self) -> &Net {
        &self.net
    }
}

impl ConstraintSystem for ZoneSystem {
    type Constraint = ExistentialZone;
    type Init = InitCondition;
    type Error = ZoneError;

    fn entails(&self, weaker: &ExistentialZone, stronger: &ExistentialZone) -> bool {
        entails_normalized(weaker, stronger)
    }

    fn pre(&self, zone: &ExistentialZone) -> Result<Vec<(String, ExistentialZone)>, ZoneError> {
        let mut out = vec![("time".to_string(), zone.pre_time()?.normalize())];
        for t in self.net.transitions() {
            for z in pre_discrete(zone, t)? {
                out.push((t.name.clone(), z));
            }
        }
        Ok(out)
    }

    fn init_satisfiable(&self, zone: &ExistentialZone, init: &InitCondition) -> bool {
        match init {
            InitCondition::Uniform(spec) => uniform_init_satisfiable(zone, spec),
            InitCondition::Marking(m) => zone.contains(m),
        }
    }

    fn canonical_key(&self, zone: &ExistentialZone) -> Vec<u8> {
        zone.canonical_key()
    }
}
