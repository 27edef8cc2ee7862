//! Generic symbolic backward reachability.
//!
//! A backend describes upward-closed sets of configurations by constraints
//! and supplies entailment, one-step predecessors, and an initial-state
//! test. The engine saturates the target set under predecessors while
//! keeping only minimal constraints, then reports whether the initial
//! states meet the saturated set.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::qo;

/// The contract a constraint backend offers the engine.
pub trait ConstraintSystem {
    type Constraint: Clone;
    type Init;
    type Error: std::error::Error;

    /// `[[stronger]] ⊆ [[weaker]]`. Must be reflexive and transitive.
    fn entails(&self, weaker: &Self::Constraint, stronger: &Self::Constraint) -> bool;

    /// One-step predecessors, each tagged with a provenance label (a
    /// transition name, or `"time"`).
    fn pre(
        &self,
        constraint: &Self::Constraint,
    ) -> Result<Vec<(String, Self::Constraint)>, Self::Error>;

    fn init_satisfiable(&self, constraint: &Self::Constraint, init: &Self::Init) -> bool;

    /// Deterministic serialization used for tie-breaking and queue order.
    fn canonical_key(&self, constraint: &Self::Constraint) -> Vec<u8>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    pub max_constraints: usize,
    pub max_seconds: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_constraints: 100_000,
            max_seconds: 300.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Reachable,
    Unreachable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Reachable => "REACHABLE",
            Verdict::Unreachable => "UNREACHABLE",
        })
    }
}

#[derive(Debug, Clone)]
pub struct FixpointResult<C> {
    pub verdict: Verdict,
    /// Minimal constraint set; on a REACHABLE early exit this is the set
    /// built so far.
    pub fixpoint: Vec<C>,
    /// Worklist pops.
    pub iterations: usize,
    pub pre_calls: usize,
    /// Provenance labels from the initial-satisfiable constraint back to a
    /// target (forward execution order).
    pub witness_trace: Option<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum EngineError<E: std::error::Error> {
    #[error("no target constraints given")]
    NoTargets,
    #[error("limit exceeded: {what} (after {iterations} iterations, {constraints} constraints)")]
    LimitExceeded {
        what: &'static str,
        iterations: usize,
        constraints: usize,
    },
    #[error("backend error: {0}")]
    Backend(#[source] E),
}

pub struct ReachabilityProblem<'a, S: ConstraintSystem> {
    pub system: &'a S,
    pub targets: Vec<S::Constraint>,
    pub init: &'a S::Init,
}

struct Entry<C> {
    constraint: C,
    key: Vec<u8>,
    label: Option<String>,
    parent: Option<usize>,
    live: bool,
}

/// Worklist saturation with eager minimization.
pub fn backward_reach<S: ConstraintSystem>(
    problem: &ReachabilityProblem<'_, S>,
    limits: Limits,
) -> Result<FixpointResult<S::Constraint>, EngineError<S::Error>> {
    let sys = problem.system;
    if problem.targets.is_empty() {
        return Err(EngineError::NoTargets);
    }
    // an infinite budget never reads the clock, which some targets lack
    let clock = limits.max_seconds.is_finite().then(|| {
        (Instant::now(), Duration::from_secs_f64(limits.max_seconds.max(0.0)))
    });

    let mut targets: Vec<(Vec<u8>, S::Constraint)> = problem
        .targets
        .iter()
        .map(|c| (sys.canonical_key(c), c.clone()))
        .collect();
    targets.sort_by(|a, b| a.0.cmp(&b.0));
    let minimal = qo::minimize_by_key(&targets, |a, b| sys.entails(&a.1, &b.1), |t| t.0.clone());

    let mut entries: Vec<Entry<S::Constraint>> = Vec::new();
    let mut live = 0usize;
    let mut queue = VecDeque::new();
    for (key, c) in minimal {
        let idx = entries.len();
        entries.push(Entry {
            constraint: c,
            key,
            label: None,
            parent: None,
            live: true,
        });
        live += 1;
        if sys.init_satisfiable(&entries[idx].constraint, problem.init) {
            return Ok(finish(entries, Verdict::Reachable, 0, 0, Some(idx)));
        }
        queue.push_back(idx);
    }

    let mut iterations = 0usize;
    let mut pre_calls = 0usize;
    while let Some(idx) = queue.pop_front() {
        if !entries[idx].live {
            continue;
        }
        if clock.is_some_and(|(started, deadline)| started.elapsed() > deadline) {
            return Err(EngineError::LimitExceeded {
                what: "max_seconds",
                iterations,
                constraints: live,
            });
        }
        iterations += 1;
        pre_calls += 1;
        let mut preds = sys
            .pre(&entries[idx].constraint)
            .map_err(EngineError::Backend)?;
        let mut keyed: Vec<(Vec<u8>, String, S::Constraint)> = preds
            .drain(..)
            .map(|(label, c)| (sys.canonical_key(&c), label, c))
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

        for (key, label, c) in keyed {
            let covered = entries
                .iter()
                .any(|e| e.live && sys.entails(&e.constraint, &c));
            if covered {
                continue;
            }
            for e in entries.iter_mut().filter(|e| e.live) {
                if sys.entails(&c, &e.constraint) {
                    e.live = false;
                    live -= 1;
                }
            }
            let new_idx = entries.len();
            entries.push(Entry {
                constraint: c,
                key,
                label: Some(label),
                parent: Some(idx),
                live: true,
            });
            live += 1;
            if sys.init_satisfiable(&entries[new_idx].constraint, problem.init) {
                return Ok(finish(
                    entries,
                    Verdict::Reachable,
                    iterations,
                    pre_calls,
                    Some(new_idx),
                ));
            }
            if live > limits.max_constraints {
                return Err(EngineError::LimitExceeded {
                    what: "max_constraints",
                    iterations,
                    constraints: live,
                });
            }
            queue.push_back(new_idx);
        }
    }

    let hit = entries
        .iter()
        .position(|e| e.live && sys.init_satisfiable(&e.constraint, problem.init));
    let verdict = if hit.is_some() {
        Verdict::Reachable
    } else {
        Verdict::Unreachable
    };
    Ok(finish(entries, verdict, iterations, pre_calls, hit))
}

fn finish<C: Clone>(
    entries: Vec<Entry<C>>,
    verdict: Verdict,
    iterations: usize,
    pre_calls: usize,
    hit: Option<usize>,
) -> FixpointResult<C> {
    let witness_trace = hit.map(|mut i| {
        let mut labels = Vec::new();
        while let Some(parent) = entries[i].parent {
            if let Some(l) = &entries[i].label {
                labels.push(l.clone());
            }
            i = parent;
        }
        labels
    });
    let mut live: Vec<&Entry<C>> = entries.iter().filter(|e| e.live).collect();
    live.sort_by(|a, b| a.key.cmp(&b.key));
    FixpointResult {
        verdict,
        fixpoint: live.into_iter().map(|e| e.constraint.clone()).collect(),
        iterations,
        pre_calls,
        witness_trace,
    }
}
