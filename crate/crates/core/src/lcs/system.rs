use std::convert::Infallible;
use std::fmt;

use thiserror::Error;

use super::word::subword;
use crate::engine::ConstraintSystem;
use crate::qo;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LcsOp {
    Send { channel: usize, letter: char },
    Recv { channel: usize, letter: char },
    Nop,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcsTransition {
    pub from: usize,
    pub to: usize,
    pub op: LcsOp,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LcsError {
    #[error("transition {index}: unknown state {state}")]
    UnknownState { index: usize, state: usize },
    #[error("transition {index}: unknown channel {channel}")]
    UnknownChannel { index: usize, channel: usize },
    #[error("letter '{letter}' is not in the alphabet")]
    UnknownLetter { letter: char },
    #[error("expected {expected} channel words, got {got}")]
    ChannelCount { expected: usize, got: usize },
    #[error("empty state set")]
    NoStates,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcsModel {
    states: Vec<String>,
    channels: Vec<String>,
    alphabet: Vec<char>,
    transitions: Vec<LcsTransition>,
}

impl LcsModel {
    pub fn new(
        states: Vec<String>,
        channels: Vec<String>,
        alphabet: Vec<char>,
        transitions: Vec<LcsTransition>,
    ) -> Result<Self, LcsError> {
        if states.is_empty() {
            return Err(LcsError::NoStates);
        }
        for (index, t) in transitions.iter().enumerate() {
            for state in [t.from, t.to] {
                if state >= states.len() {
                    return Err(LcsError::UnknownState { index, state });
                }
            }
            if let LcsOp::Send { channel, letter } | LcsOp::Recv { channel, letter } = t.op {
                if channel >= channels.len() {
                    return Err(LcsError::UnknownChannel { index, channel });
                }
                if !alphabet.contains(&letter) {
                    return Err(LcsError::UnknownLetter { letter });
                }
            }
        }
        Ok(LcsModel {
            states,
            channels,
            alphabet,
            transitions,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn channels(&self) -> &[String] {
        &self.channels
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn transitions(&self) -> &[LcsTransition] {
        &self.transitions
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn channel_id(&self, name: &str) -> Option<usize> {
        self.channels.iter().position(|c| c == name)
    }

    /// Checks a word list against the channel count and alphabet.
    pub fn check_words(&self, words: &[String]) -> Result<(), LcsError> {
        if words.len() != self.channels.len() {
            return Err(LcsError::ChannelCount {
                expected: self.channels.len(),
                got: words.len(),
            });
        }
        for letter in words.iter().flat_map(|w| w.chars()) {
            if !self.alphabet.contains(&letter) {
                return Err(LcsError::UnknownLetter { letter });
            }
        }
        Ok(())
    }

    pub fn describe(&self, t: &LcsTransition) -> String {
        let op = match t.op {
            LcsOp::Send { channel, letter } => format!("send({},{letter})", self.channels[channel]),
            LcsOp::Recv { channel, letter } => format!("recv({},{letter})", self.channels[channel]),
            LcsOp::Nop => "nop".to_string(),
        };
        format!("{}-{op}->{}", self.states[t.from], self.states[t.to])
    }
}

/// A control state together with a lower bound (under the subword order)
/// on every channel's content. Also used for concrete configurations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LcsConstraint {
    pub state: usize,
    pub words: Vec<String>,
}

impl LcsConstraint {
    pub fn new(state: usize, words: Vec<String>) -> Self {
        LcsConstraint { state, words }
    }

    pub fn canonical_key(&self) -> Vec<u8> {
        let mut key = (self.state as u64).to_be_bytes().to_vec();
        for w in &self.words {
            key.extend((w.len() as u64).to_be_bytes());
            key.extend(w.as_bytes());
        }
        key
    }
}

impl fmt::Display for LcsConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.state)?;
        for w in &self.words {
            write!(f, ", \"{w}\"")?;
        }
        f.write_str(")")
    }
}

/// Same control state and per-channel subword embedding.
pub fn lcs_entails(weaker: &LcsConstraint, stronger: &LcsConstraint) -> bool {
    weaker.state == stronger.state
        && weaker.words.len() == stronger.words.len()
        && weaker
            .words
            .iter()
            .zip(&stronger.words)
            .all(|(u, v)| subword(u, v))
}

fn pre_one(phi: &LcsConstraint, t: &LcsTransition) -> Option<LcsConstraint> {
    if t.to != phi.state {
        return None;
    }
    let mut words = phi.words.clone();
    match t.op {
        LcsOp::Nop => {}
        LcsOp::Send { channel, letter } => {
            if words[channel].ends_with(letter) {
                words[channel].pop();
            }
        }
        LcsOp::Recv { channel, letter } => words[channel].insert(0, letter),
    }
    Some(LcsConstraint::new(t.from, words))
}

/// Predecessors tagged with the transition description, minimized.
pub fn lcs_pre_labelled(phi: &LcsConstraint, model: &LcsModel) -> Vec<(String, LcsConstraint)> {
    let all: Vec<(String, LcsConstraint)> = model
        .transitions
        .iter()
        .filter_map(|t| pre_one(phi, t).map(|c| (model.describe(t), c)))
        .collect();
    qo::minimize_by_key(
        &all,
        |a, b| lcs_entails(&a.1, &b.1),
        |x| (x.1.canonical_key(), x.0.clone()),
    )
}

pub fn lcs_pre(phi: &LcsConstraint, model: &LcsModel) -> Vec<LcsConstraint> {
    lcs_pre_labelled(phi, model)
        .into_iter()
        .map(|(_, c)| c)
        .collect()
}

/// A lossy channel system as an engine backend; the initial condition is a
/// single configuration.
#[derive(Debug, Clone)]
pub struct LcsSystem {
    model: LcsModel,
}

impl LcsSystem {
    pub fn new(model: LcsModel) -> Self {
        LcsSystem { model }
    }

    pub fn model(&self) -> &LcsModel {
        &self.model
    }
}

impl ConstraintSystem for LcsSystem {
    type Constraint = LcsConstraint;
    type Init = LcsConstraint;
    type Error = Infallible;

    fn entails(&self, weaker: &LcsConstraint, stronger: &LcsConstraint) -> bool {
        lcs_entails(weaker, stronger)
    }

    fn pre(&self, c: &LcsConstraint) -> Result<Vec<(String, LcsConstraint)>, Infallible> {
        Ok(lcs_pre_labelled(c, &self.model))
    }

    fn init_satisfiable(&self, c: &LcsConstraint, init: &LcsConstraint) -> bool {
        lcs_entails(c, init)
    }

    fn canonical_key(&self, c: &LcsConstraint) -> Vec<u8> {
        c.canonical_key()
    }
}
