//! Decidable quasi-orderings over finite structures.
//!
//! Every constraint backend reduces its entailment check to one of these
//! combinators: subsequence embedding for words, injective embedding for
//! multisets, and domination between finite sets of constraints.

mod rado;

pub use rado::{rado_entails, rado_entails_bounded, RadoConstraint};

/// Subsequence embedding lifted through an element order.
///
/// `u` embeds into `v` when a strictly monotone injection maps every
/// position of `u` to a position of `v` holding a larger-or-equal element.
/// Greedy leftmost matching is exact for this relation.
pub fn word_embeds<A, B, F>(u: &[A], v: &[B], leq: F) -> bool
where
    F: Fn(&A, &B) -> bool,
{
    let mut rest = v.iter();
    'outer: for a in u {
        for b in rest.by_ref() {
            if leq(a, b) {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Multiset embedding: an arbitrary injection with element-wise domination.
///
/// Decided with augmenting-path bipartite matching.
pub fn multiset_embeds<A, B, F>(u: &[A], v: &[B], leq: F) -> bool
where
    F: Fn(&A, &B) -> bool,
{
    if u.len() > v.len() {
        return false;
    }
    let adj: Vec<Vec<usize>> = u
        .iter()
        .map(|a| (0..v.len()).filter(|&j| leq(a, &v[j])).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; v.len()];
    for i in 0..u.len() {
        let mut seen = vec![false; v.len()];
        if !augment(i, &adj, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        let free = match owner[j] {
            None => true,
            Some(k) => augment(k, adj, owner, seen),
        };
        if free {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}

/// The set ordering: every member of `stronger` is entailed by some member
/// of `weaker`.
pub fn set_dominates<T, F>(weaker: &[T], stronger: &[T], entails: F) -> bool
where
    F: Fn(&T, &T) -> bool,
{
    stronger
        .iter()
        .all(|s| weaker.iter().any(|w| entails(w, s)))
}

/// Reduces a constraint set to its minimal generators.
///
/// Among mutually entailing constraints the one with the smaller key
/// survives; equal keys keep the earliest occurrence. The output keeps
/// input order.
pub fn minimize_by_key<T, K, F, G>(items: &[T], entails: F, key: G) -> Vec<T>
where
    T: Clone,
    K: Ord,
    F: Fn(&T, &T) -> bool,
    G: Fn(&T) -> K,
{
    let keys: Vec<K> = items.iter().map(&key).collect();
    let beats = |w: usize, s: usize| -> bool {
        if !entails(&items[w], &items[s]) {
            return false;
        }
        if !entails(&items[s], &items[w]) {
            return true;
        }
        (&keys[w], w) < (&keys[s], s)
    };
    (0..items.len())
        .filter(|&s| !(0..items.len()).any(|w| w != s && beats(w, s)))
        .map(|s| items[s].clone())
        .collect()
}

/// [`minimize_by_key`] with the item's own ordering as the key.
pub fn minimize<T, F>(items: &[T], entails: F) -> Vec<T>
where
    T: Clone + Ord,
    F: Fn(&T, &T) -> bool,
{
    minimize_by_key(items, entails, |t| t.clone())
}

/// Componentwise order on natural vectors; shared by several backends.
pub fn vector_leq(a: &[u64], b: &[u64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}
