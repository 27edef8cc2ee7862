//! Exact entailment between existential zones.
//!
//! `weaker ⪯ stronger` holds iff every age valuation of `stronger`'s tokens
//! is covered by one of the matrices obtained by pulling `weaker`'s
//! constraints back along a place-respecting injection. We decide this by
//! subtracting those matrices from `stronger` piece by piece.

use super::bound::Bound;
use super::dbm::Dbm;
use super::zone::ExistentialZone;
use super::ZoneError;

/// One pulled-back constraint `x_j - x_i ≤ b` over the stronger zone's
/// indices.
#[derive(Debug, Clone, Copy)]
struct Atom {
    j: usize,
    i: usize,
    bound: Bound,
}

pub fn entails(weaker: &ExistentialZone, stronger: &ExistentialZone) -> Result<bool, ZoneError> {
    weaker.require_normalized()?;
    stronger.require_normalized()?;
    Ok(entails_normalized(weaker, stronger))
}

/// Fast-path test only: a single injection under which every pulled-back
/// bound is already implied entry-wise. Sound, not complete.
pub fn entails_single_witness(
    weaker: &ExistentialZone,
    stronger: &ExistentialZone,
) -> Result<bool, ZoneError> {
    weaker.require_normalized()?;
    stronger.require_normalized()?;
    if !stronger.dbm().closed_is_consistent() {
        return Ok(true);
    }
    let sd = stronger.dbm();
    Ok(pullbacks(weaker, stronger)
        .iter()
        .any(|atoms| atoms.iter().all(|a| sd.get(a.j, a.i) <= a.bound)))
}

pub(crate) fn entails_normalized(weaker: &ExistentialZone, stronger: &ExistentialZone) -> bool {
    if !stronger.dbm().closed_is_consistent() {
        return true;
    }
    if !weaker.dbm().closed_is_consistent() {
        return false;
    }
    if weaker.token_count() > stronger.token_count() {
        return false;
    }
    let have = stronger.place_counts();
    if weaker
        .place_counts()
        .iter()
        .any(|(p, n)| have.get(p).copied().unwrap_or(0) < *n)
    {
        return false;
    }

    let cover = pullbacks(weaker, stronger);
    let sd = stronger.dbm();
    if cover
        .iter()
        .any(|atoms| atoms.iter().all(|a| sd.get(a.j, a.i) <= a.bound))
    {
        return true;
    }

    let mut pieces = vec![sd.clone()];
    for atoms in &cover {
        let mut next = Vec::new();
        for piece in &pieces {
            subtract(piece, atoms, &mut next);
        }
        pieces = next;
        if pieces.is_empty() {
            return true;
        }
    }
    false
}

fn pullbacks(weaker: &ExistentialZone, stronger: &ExistentialZone) -> Vec<Vec<Atom>> {
    let m = weaker.token_count();
    let mut out = Vec::new();
    let mut image = Vec::with_capacity(m);
    let mut used = vec![false; stronger.token_count() + 1];
    injections(weaker, stronger, &mut image, &mut used, &mut out);
    out
}

fn injections(
    weaker: &ExistentialZone,
    stronger: &ExistentialZone,
    image: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vec<Atom>>,
) {
    let k = image.len();
    if k == weaker.token_count() {
        out.push(atoms_for(weaker, image));
        return;
    }
    let place = weaker.placing()[k];
    for target in 1..=stronger.token_count() {
        if !used[target] && stronger.placing()[target - 1] == place {
            used[target] = true;
            image.push(target);
            injections(weaker, stronger, image, used, out);
            image.pop();
            used[target] = false;
        }
    }
}

fn atoms_for(weaker: &ExistentialZone, image: &[usize]) -> Vec<Atom> {
    let mut atoms = Vec::new();
    let at = |k: usize| if k == 0 { 0 } else { image[k - 1] };
    let m = weaker.token_count();
    for j in 0..=m {
        for i in 0..=m {
            if i == j {
                continue;
            }
            let bound = weaker.bound(j, i);
            if !bound.is_infinite() {
                atoms.push(Atom {
                    j: at(j),
                    i: at(i),
                    bound,
                });
            }
        }
    }
    atoms
}

/// Pushes the pieces of `piece \ ⋀atoms` (pairwise disjoint, each closed
/// and consistent) onto `out`.
fn subtract(piece: &Dbm, atoms: &[Atom], out: &mut Vec<Dbm>) {
    let mut rest = piece.clone();
    for a in atoms {
        if rest.get(a.j, a.i) <= a.bound {
            continue;
        }
        let negated = a.bound.complement().expect("finite atom");
        if rest.get(a.i, a.j) + a.bound < Bound::ZERO {
            // rest and the atom are disjoint: nothing of rest is removed
            out.push(rest);
            return;
        }
        let mut outside = rest.clone();
        outside.tighten(a.i, a.j, negated);
        outside.close();
        if outside.closed_is_consistent() {
            out.push(outside);
        }
        rest.tighten(a.j, a.i, a.bound);
        rest.close();
        if !rest.closed_is_consistent() {
            return;
        }
    }
}
