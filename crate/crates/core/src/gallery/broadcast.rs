use std::fmt;
use std::str::FromStr;

use super::GalleryError;
use crate::qo;

/// `⟨b1,…,bn⟩`, denoting every configuration that dominates it
/// componentwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorConstraint(pub Vec<u64>);

impl VectorConstraint {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn satisfied_by(&self, config: &[u64]) -> bool {
        qo::vector_leq(&self.0, config)
    }
}

impl fmt::Display for VectorConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (k, b) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(">")
    }
}

pub fn b_entails(b1: &VectorConstraint, b2: &VectorConstraint) -> Result<bool, GalleryError> {
    if b1.dim() != b2.dim() {
        return Err(GalleryError::DimensionMismatch {
            left: b1.dim(),
            right: b2.dim(),
        });
    }
    Ok(qo::vector_leq(&b1.0, &b2.0))
}

/// `x_{i1}+…+x_{ik} ≥ bound` over 1-based variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdAtom {
    pub vars: Vec<usize>,
    pub bound: u64,
}

impl fmt::Display for AdAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.vars.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            write!(f, "x{v}")?;
        }
        write!(f, ">={}", self.bound)
    }
}

impl FromStr for AdAtom {
    type Err = GalleryError;

    /// Parses `x1+x3>=2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GalleryError::Parse(format!("expected 'x<i>+...>=<n>', got '{s}'"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (lhs, rhs) = compact.split_once(">=").ok_or_else(bad)?;
        let bound = rhs.parse::<u64>().map_err(|_| bad())?;
        let vars = lhs
            .split('+')
            .map(|v| v.strip_prefix('x').and_then(|i| i.parse::<usize>().ok()).ok_or_else(bad))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AdAtom { vars, bound })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdClass {
    /// General sums.
    Ad,
    /// Single-variable atoms only.
    Na,
    /// Atoms over pairwise disjoint variable sets.
    Dv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdConstraint {
    atoms: Vec<AdAtom>,
    class: AdClass,
}

impl AdConstraint {
    /// Builds the constraint tagged with its most specific class.
    pub fn new(atoms: Vec<AdAtom>) -> Result<Self, GalleryError> {
        for a in &atoms {
            if a.vars.is_empty() {
                return Err(GalleryError::Parse("atom without variables".into()));
            }
            let mut sorted = a.vars.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(GalleryError::RepeatedVariable(a.to_string()));
            }
            if sorted[0] == 0 {
                return Err(GalleryError::VariableOutOfRange { var: 0, dim: 0 });
            }
        }
        let class = if atoms.iter().all(|a| a.vars.len() == 1) {
            AdClass::Na
        } else if disjoint(&atoms) {
            AdClass::Dv
        } else {
            AdClass::Ad
        };
        Ok(AdConstraint { atoms, class })
    }

    /// Builds the constraint with an explicit class tag, which must fit the
    /// atom shapes.
    pub fn with_class(atoms: Vec<AdAtom>, class: AdClass) -> Result<Self, GalleryError> {
        let c = AdConstraint::new(atoms)?;
        let fits = match class {
            AdClass::Ad => true,
            AdClass::Na => c.class == AdClass::Na,
            AdClass::Dv => disjoint(&c.atoms),
        };
        if !fits {
            return Err(GalleryError::ClassMismatch(class));
        }
        Ok(AdConstraint { class, ..c })
    }

    pub fn atoms(&self) -> &[AdAtom] {
        &self.atoms
    }

    pub fn class(&self) -> AdClass {
        self.class
    }

    pub fn satisfied_by(&self, config: &[u64]) -> bool {
        self.atoms.iter().all(|a| {
            a.vars
                .iter()
                .map(|&v| config.get(v - 1).copied().unwrap_or(0))
                .sum::<u64>()
                >= a.bound
        })
    }
}

fn disjoint(atoms: &[AdAtom]) -> bool {
    let mut seen = std::collections::HashSet::new();
    atoms.iter().flat_map(|a| &a.vars).all(|v| seen.insert(*v))
}

/// All ways of writing `total` as an ordered sum of `parts` naturals.
fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The minimal vectors whose upward closure equals the constraint's
/// denotation in dimension `n`.
pub fn expand_ad_to_b(c: &AdConstraint, n: usize) -> Result<Vec<VectorConstraint>, GalleryError> {
    for v in c.atoms.iter().flat_map(|a| &a.vars) {
        if *v > n {
            return Err(GalleryError::VariableOutOfRange { var: *v, dim: n });
        }
    }
    let mut acc = vec![vec![0u64; n]];
    for atom in &c.atoms {
        let mut next = Vec::new();
        for comp in compositions(atom.bound, atom.vars.len()) {
            for base in &acc {
                let mut v = base.clone();
                for (&var, &b) in atom.vars.iter().zip(&comp) {
                    v[var - 1] = v[var - 1].max(b);
                }
                next.push(v);
            }
        }
        next.sort();
        next.dedup();
        acc = qo::minimize(&next, |a, b| qo::vector_leq(a, b));
    }
    let mut out: Vec<VectorConstraint> = acc.into_iter().map(VectorConstraint).collect();
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}
