//! Runs every target of a loaded model through the engine.

use thiserror::Error;

use crate::engine::{backward_reach, ConstraintSystem, EngineError, Limits, ReachabilityProblem, Verdict};
use crate::ezone::{InitCondition, ZoneSystem};
use crate::lcs::LcsSystem;
use crate::model::{lcs_target_spec, Problem, ZoneSpec};
use crate::tpn::Marking;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetReport {
    pub name: String,
    pub verdict: Verdict,
    pub iterations: usize,
    pub constraints: usize,
    pub pre_calls: usize,
    pub witness_trace: Option<Vec<String>>,
    /// The minimized constraint set in model-file syntax, when requested.
    pub fixpoint: Option<String>,
}

impl TargetReport {
    pub fn line(&self) -> String {
        format!(
            "{}: {} iterations={} constraints={} pre_calls={}",
            self.name, self.verdict, self.iterations, self.constraints, self.pre_calls
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("no target named `{0}`")]
    UnknownTarget(String),
    #[error("model has no targets")]
    NoTargets,
    #[error("a literal initial marking only applies to timed Petri nets")]
    MarkingForLcs,
    #[error("target `{target}`: {message}")]
    Engine { target: String, message: String },
}

#[derive(Debug, Clone, Default)]
pub struct CheckOptions {
    pub target: Option<String>,
    pub limits: Limits,
    pub dump_fixpoint: bool,
    pub init_marking: Option<Marking>,
}

fn run<S: ConstraintSystem>(
    sys: &S,
    name: &str,
    targets: Vec<S::Constraint>,
    init: &S::Init,
    opts: &CheckOptions,
    dump: impl Fn(&[S::Constraint]) -> String,
) -> Result<TargetReport, CheckError> {
    let problem = ReachabilityProblem {
        system: sys,
        targets,
        init,
    };
    let r = backward_reach(&problem, opts.limits).map_err(|e| CheckError::Engine {
        target: name.to_string(),
        message: match e {
            EngineError::NoTargets => "empty target".to_string(),
            other => other.to_string(),
        },
    })?;
    Ok(TargetReport {
        name: name.to_string(),
        verdict: r.verdict,
        iterations: r.iterations,
        constraints: r.fixpoint.len(),
        pre_calls: r.pre_calls,
        fixpoint: opts.dump_fixpoint.then(|| dump(&r.fixpoint)),
        witness_trace: r.witness_trace,
    })
}

fn selected<'a, T>(targets: &'a [(String, T)], want: &Option<String>) -> Result<Vec<&'a (String, T)>, CheckError> {
    if targets.is_empty() {
        return Err(CheckError::NoTargets);
    }
    match want {
        None => Ok(targets.iter().collect()),
        Some(n) => {
            let hits: Vec<_> = targets.iter().filter(|t| &t.0 == n).collect();
            if hits.is_empty() {
                Err(CheckError::UnknownTarget(n.clone()))
            } else {
                Ok(hits)
            }
        }
    }
}

/// One report per selected target, in file order. Stops at the first
/// engine error.
pub fn check_problem(problem: &Problem, opts: &CheckOptions) -> Result<Vec<TargetReport>, CheckError> {
    match problem {
        Problem::Tpn(p) => {
            let sys = ZoneSystem::new(p.net.clone());
            let init = match &opts.init_marking {
                Some(m) => InitCondition::Marking(m.clone()),
                None => InitCondition::Uniform(p.init.clone()),
            };
            let places = p.net.places();
            selected(&p.targets, &opts.target)?
                .into_iter()
                .map(|(name, zone)| {
                    run(&sys, name, vec![zone.clone()], &init, opts, |fix| {
                        let specs: Vec<ZoneSpec> = fix
                            .iter()
                            .enumerate()
                            .map(|(k, z)| ZoneSpec::from_zone(&format!("{name}_{k}"), z, places))
                            .collect();
                        serde_json::to_string_pretty(&specs).expect("zones serialize")
                    })
                })
                .collect()
        }
        Problem::Lcs(p) => {
            if opts.init_marking.is_some() {
                return Err(CheckError::MarkingForLcs);
            }
            let sys = LcsSystem::new(p.model.clone());
            selected(&p.targets, &opts.target)?
                .into_iter()
                .map(|(name, cs)| {
                    run(&sys, name, cs.clone(), &p.init, opts, |fix| {
                        let specs: Vec<_> = fix
                            .iter()
                            .enumerate()
                            .map(|(k, c)| lcs_target_spec(&format!("{name}_{k}"), c, &p.model))
                            .collect();
                        serde_json::to_string_pretty(&specs).expect("constraints serialize")
                    })
                })
                .collect()
        }
    }
}
