//! JSON model files for timed Petri nets and lossy channel systems.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ezone::{Bound, ExistentialZone, Multiplicity, UniformInitSpec};
use crate::lcs::{normalize_expr, L2Expr, LcsConstraint, LcsModel, LcsOp, LcsTransition};
use crate::tpn::{Age, Arc, Interval, Marking, Net, PlaceId, Token, Transition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for ModelError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        let message = match message.find(" at line ") {
            Some(k) => message[..k].to_string(),
            None => message,
        };
        ModelError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

fn invalid(msg: impl Into<String>) -> ModelError {
    ModelError::Invalid(msg.into())
}

/// A natural bound or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limit(pub Option<i64>);

impl Limit {
    pub const INF: Limit = Limit(None);

    fn inf() -> Self {
        Limit::INF
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntOrWord {
    Int(i64),
    Word(String),
}

impl Serialize for Limit {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Limit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match IntOrWord::deserialize(d)? {
            IntOrWord::Int(v) => Ok(Limit(Some(v))),
            IntOrWord::Word(w) if w == "inf" => Ok(Limit(None)),
            IntOrWord::Word(w) => Err(de::Error::custom(format!("expected integer or \"inf\", got \"{w}\""))),
        }
    }
}

/// A natural count or `"omega"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Count(pub Multiplicity);

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Multiplicity::Finite(n) => s.serialize_u64(n),
            Multiplicity::Omega => s.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match IntOrWord::deserialize(d)? {
            IntOrWord::Int(v) if v >= 0 => Ok(Count(Multiplicity::Finite(v as u64))),
            IntOrWord::Word(w) if w == "omega" => Ok(Count(Multiplicity::Omega)),
            _ => Err(de::Error::custom("expected a natural count or \"omega\"")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelFile {
    Tpn(TpnFile),
    Lcs(LcsFile),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TpnFile {
    pub places: Vec<String>,
    pub transitions: Vec<TransitionSpec>,
    #[serde(default)]
    pub init: Vec<InitSpec>,
    #[serde(default)]
    pub targets: Vec<ZoneSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub name: String,
    #[serde(rename = "in", default)]
    pub inputs: Vec<ArcSpec>,
    #[serde(rename = "out", default)]
    pub outputs: Vec<ArcSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    pub place: String,
    #[serde(default)]
    pub lo: i64,
    #[serde(default = "Limit::inf")]
    pub hi: Limit,
}

impl ArcSpec {
    pub fn new(place: &str, lo: i64, hi: Option<i64>) -> Self {
        ArcSpec {
            place: place.to_string(),
            lo,
            hi: Limit(hi),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitSpec {
    pub place: String,
    pub count: Count,
    #[serde(default)]
    pub age: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TokenSpec {
    pub place: String,
}

/// Per-token bounds, indexed from 0 over the target's tokens. Missing
/// entries default to `upper = inf`, `lower = 0`, `diff = inf`;
/// `diff[j][i]` bounds `x_j - x_i`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<Limit>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diff: Option<Vec<Vec<Limit>>>,
}

impl BoundsSpec {
    fn is_empty(&self) -> bool {
        self.upper.is_none() && self.lower.is_none() && self.diff.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZoneSpec {
    pub name: String,
    pub tokens: Vec<TokenSpec>,
    #[serde(default, skip_serializing_if = "BoundsSpec::is_empty")]
    pub bounds: BoundsSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LcsFile {
    pub states: Vec<String>,
    pub channels: Vec<String>,
    pub alphabet: Vec<String>,
    pub transitions: Vec<LcsTransitionSpec>,
    pub init: LcsInitSpec,
    #[serde(default)]
    pub targets: Vec<LcsTargetSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LcsTransitionSpec {
    pub from: String,
    pub to: String,
    pub op: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LcsInitSpec {
    pub state: String,
    #[serde(default)]
    pub channels: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LcsTargetSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub state: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub words: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<String>,
}

/// A checked timed-Petri-net problem.
#[derive(Debug, Clone)]
pub struct TpnProblem {
    pub net: Net,
    pub init: UniformInitSpec,
    pub targets: Vec<(String, ExistentialZone)>,
}

/// A checked lossy-channel problem. Each target may expand into several
/// constraints.
#[derive(Debug, Clone)]
pub struct LcsProblem {
    pub model: LcsModel,
    pub init: LcsConstraint,
    pub targets: Vec<(String, Vec<LcsConstraint>)>,
}

#[derive(Debug, Clone)]
pub enum Problem {
    Tpn(TpnProblem),
    Lcs(LcsProblem),
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes") + "\n"
    }

    pub fn compile(&self) -> Result<Problem, ModelError> {
        match self {
            ModelFile::Tpn(f) => f.compile().map(Problem::Tpn),
            ModelFile::Lcs(f) => f.compile().map(Problem::Lcs),
        }
    }
}

/// Parses and checks a model file in one step.
pub fn load_problem(text: &str) -> Result<Problem, ModelError> {
    ModelFile::parse(text)?.compile()
}

fn place_of(places: &[String], name: &str, context: &str) -> Result<PlaceId, ModelError> {
    places
        .iter()
        .position(|p| p == name)
        .map(PlaceId)
        .ok_or_else(|| invalid(format!("{context}: unknown place `{name}`")))
}

impl TpnFile {
    pub fn compile(&self) -> Result<TpnProblem, ModelError> {
        let mut transitions = Vec::new();
        for t in &self.transitions {
            let ctx = format!("transition `{}`", t.name);
            let arcs = |specs: &[ArcSpec]| -> Result<Vec<Arc>, ModelError> {
                specs
                    .iter()
                    .map(|a| {
                        let interval = Interval::new(a.lo, a.hi.0).map_err(|_| {
                            invalid(format!(
                                "{ctx}: bad interval [{}, {}] on place `{}`",
                                a.lo,
                                a.hi.0.map_or("inf".to_string(), |h| h.to_string()),
                                a.place
                            ))
                        })?;
                        Ok(Arc {
                            place: place_of(&self.places, &a.place, &ctx)?,
                            interval,
                        })
                    })
                    .collect()
            };
            transitions.push(Transition {
                name: t.name.clone(),
                inputs: arcs(&t.inputs)?,
                outputs: arcs(&t.outputs)?,
            });
        }
        let net = Net::new(self.places.clone(), transitions).map_err(|e| invalid(e.to_string()))?;

        let mut init = UniformInitSpec::default();
        for i in &self.init {
            let p = place_of(&self.places, &i.place, "init")?;
            if i.age < 0 {
                return Err(invalid(format!("init: negative age for `{}`", i.place)));
            }
            if init.places.contains_key(&p) {
                return Err(invalid(format!("init: place `{}` listed twice", i.place)));
            }
            init = init.with(p, i.count.0, i.age);
        }

        let targets = self
            .targets
            .iter()
            .map(|z| Ok((z.name.clone(), z.to_zone(&self.places)?)))
            .collect::<Result<Vec<_>, ModelError>>()?;
        Ok(TpnProblem { net, init, targets })
    }
}

impl ZoneSpec {
    pub fn to_zone(&self, places: &[String]) -> Result<ExistentialZone, ModelError> {
        let ctx = format!("target `{}`", self.name);
        let m = self.tokens.len();
        let placing = self
            .tokens
            .iter()
            .map(|t| place_of(places, &t.place, &ctx))
            .collect::<Result<Vec<_>, _>>()?;
        let b = &self.bounds;
        let check_len = |what: &str, len: usize| {
            if len == m {
                Ok(())
            } else {
                Err(invalid(format!("{ctx}: `{what}` has {len} entries, expected {m}")))
            }
        };
        let to_bound = |l: &Limit| l.0.map_or(Bound::INF, Bound::le);
        let mut rows = vec![vec![Bound::INF; m + 1]; m + 1];
        for i in 1..=m {
            rows[0][i] = Bound::ZERO;
        }
        if let Some(upper) = &b.upper {
            check_len("upper", upper.len())?;
            for (k, u) in upper.iter().enumerate() {
                rows[k + 1][0] = to_bound(u);
            }
        }
        if let Some(lower) = &b.lower {
            check_len("lower", lower.len())?;
            for (k, l) in lower.iter().enumerate() {
                rows[0][k + 1] = Bound::le(-l);
            }
        }
        if let Some(diff) = &b.diff {
            check_len("diff", diff.len())?;
            for (j, row) in diff.iter().enumerate() {
                check_len("diff row", row.len())?;
                for (i, d) in row.iter().enumerate() {
                    if i != j {
                        rows[j + 1][i + 1] = to_bound(d);
                    }
                }
            }
        }
        let zone = ExistentialZone::new(placing, rows).map_err(|e| invalid(format!("{ctx}: {e}")))?;
        Ok(zone.normalize())
    }

    /// The file form of a zone; every bound is written out.
    pub fn from_zone(name: &str, zone: &ExistentialZone, places: &[String]) -> Self {
        let m = zone.token_count();
        let limit = |b: Bound| Limit(b.value());
        ZoneSpec {
            name: name.to_string(),
            tokens: zone
                .placing()
                .iter()
                .map(|p| TokenSpec {
                    place: places[p.0].clone(),
                })
                .collect(),
            bounds: BoundsSpec {
                upper: Some((1..=m).map(|i| limit(zone.bound(i, 0))).collect()),
                lower: Some((1..=m).map(|i| -zone.bound(0, i).value().unwrap_or(0)).collect()),
                diff: Some(
                    (1..=m)
                        .map(|j| {
                            (1..=m)
                                .map(|i| if i == j { Limit(Some(0)) } else { limit(zone.bound(j, i)) })
                                .collect()
                        })
                        .collect(),
                ),
            },
        }
    }
}

fn parse_op(op: &str, model_channels: &[String], ctx: &str) -> Result<LcsOp, ModelError> {
    let compact: String = op.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "nop" {
        return Ok(LcsOp::Nop);
    }
    let bad = || invalid(format!("{ctx}: cannot read op `{op}`"));
    let (kind, args) = compact.split_once('(').ok_or_else(bad)?;
    let args = args.strip_suffix(')').ok_or_else(bad)?;
    let (c, a) = args.split_once(',').ok_or_else(bad)?;
    let channel = model_channels
        .iter()
        .position(|x| x == c)
        .ok_or_else(|| invalid(format!("{ctx}: unknown channel `{c}`")))?;
    let mut letters = a.chars();
    let letter = match (letters.next(), letters.next()) {
        (Some(l), None) => l,
        _ => return Err(bad()),
    };
    match kind {
        "send" => Ok(LcsOp::Send { channel, letter }),
        "recv" => Ok(LcsOp::Recv { channel, letter }),
        _ => Err(bad()),
    }
}

impl LcsFile {
    pub fn compile(&self) -> Result<LcsProblem, ModelError> {
        let state = |name: &str, ctx: &str| {
            self.states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| invalid(format!("{ctx}: unknown state `{name}`")))
        };
        let mut alphabet = Vec::new();
        for a in &self.alphabet {
            let mut cs = a.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) => alphabet.push(c),
                _ => return Err(invalid(format!("alphabet: `{a}` is not a single letter"))),
            }
        }
        let mut transitions = Vec::new();
        for (k, t) in self.transitions.iter().enumerate() {
            let ctx = format!("transition {k} ({} -> {})", t.from, t.to);
            transitions.push(LcsTransition {
                from: state(&t.from, &ctx)?,
                to: state(&t.to, &ctx)?,
                op: parse_op(&t.op, &self.channels, &ctx)?,
            });
        }
        let model = LcsModel::new(self.states.clone(), self.channels.clone(), alphabet, transitions)
            .map_err(|e| invalid(e.to_string()))?;

        let words_of = |map: &BTreeMap<String, String>, ctx: &str| -> Result<Vec<String>, ModelError> {
            for c in map.keys() {
                if model.channel_id(c).is_none() {
                    return Err(invalid(format!("{ctx}: unknown channel `{c}`")));
                }
            }
            let words: Vec<String> = self
                .channels
                .iter()
                .map(|c| map.get(c).cloned().unwrap_or_default())
                .collect();
            model.check_words(&words).map_err(|e| invalid(format!("{ctx}: {e}")))?;
            Ok(words)
        };

        let init = LcsConstraint::new(
            state(&self.init.state, "init")?,
            words_of(&self.init.channels, "init")?,
        );

        let mut targets = Vec::new();
        for (k, t) in self.targets.iter().enumerate() {
            let name = t.name.clone().unwrap_or_else(|| format!("target{k}"));
            let ctx = format!("target `{name}`");
            let q = state(&t.state, &ctx)?;
            let constraints = match (&t.words, &t.expr) {
                (Some(words), None) => vec![LcsConstraint::new(q, words_of(words, &ctx)?)],
                (None, Some(expr)) => {
                    let e: L2Expr = expr
                        .parse()
                        .map_err(|e| invalid(format!("{ctx}: expression {e}")))?;
                    let channel = match &t.channel {
                        Some(c) => c.clone(),
                        None if self.channels.len() == 1 => self.channels[0].clone(),
                        None => return Err(invalid(format!("{ctx}: `expr` needs a `channel`"))),
                    };
                    normalize_expr(&e)
                        .words()
                        .iter()
                        .map(|w| {
                            let map = BTreeMap::from([(channel.clone(), w.clone())]);
                            Ok(LcsConstraint::new(q, words_of(&map, &ctx)?))
                        })
                        .collect::<Result<Vec<_>, ModelError>>()?
                }
                (None, None) => vec![LcsConstraint::new(q, vec![String::new(); self.channels.len()])],
                (Some(_), Some(_)) => {
                    return Err(invalid(format!("{ctx}: give either `words` or `expr`")))
                }
            };
            targets.push((name, constraints));
        }
        Ok(LcsProblem {
            model,
            init,
            targets,
        })
    }
}

/// The file form of an LCS constraint.
pub fn lcs_target_spec(name: &str, c: &LcsConstraint, model: &LcsModel) -> LcsTargetSpec {
    LcsTargetSpec {
        name: Some(name.to_string()),
        state: model.states()[c.state].clone(),
        words: Some(
            model
                .channels()
                .iter()
                .cloned()
                .zip(c.words.iter().cloned())
                .collect(),
        ),
        expr: None,
        channel: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MarkingTokenSpec {
    place: String,
    #[serde(default)]
    age: AgeSpec,
}

/// An integer or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum AgeSpec {
    Int(i64),
    Ratio(String),
}

impl Default for AgeSpec {
    fn default() -> Self {
        AgeSpec::Int(0)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MarkingFile {
    Bare(Vec<MarkingTokenSpec>),
    Wrapped { marking: Vec<MarkingTokenSpec> },
}

/// Reads a literal marking: `[{"place": "A", "age": 0}, …]` or the same
/// list under a `"marking"` key. Ages are integers or `"p/q"` strings.
pub fn parse_marking(text: &str, net: &Net) -> Result<Marking, ModelError> {
    let tokens = match serde_json::from_str::<MarkingFile>(text)? {
        MarkingFile::Bare(t) | MarkingFile::Wrapped { marking: t } => t,
    };
    let mut out = Vec::with_capacity(tokens.len());
    for t in tokens {
        let place = place_of(net.places(), &t.place, "marking")?;
        let age = match &t.age {
            AgeSpec::Int(v) => Age::from_integer(*v),
            AgeSpec::Ratio(s) => s
                .parse::<Age>()
                .map_err(|_| invalid(format!("marking: cannot read age `{s}`")))?,
        };
        if age < Age::from_integer(0) {
            return Err(invalid(format!("marking: negative age on `{}`", t.place)));
        }
        out.push(Token { place, age });
    }
    Ok(Marking::new(out))
}

impl fmt::Display for ModelFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}
