use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::word::{minimal_common_supersequences, minimize_words, subword};
use crate::qo;

/// A finite antichain of words under the subword order, denoting the union
/// of their upward closures.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct L1Set {
    words: Vec<String>,
}

impl L1Set {
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        L1Set {
            words: minimize_words(words.into_iter().map(Into::into).collect()),
        }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &str) -> bool {
        self.words.iter().any(|u| subword(u, w))
    }

    /// `[[other]] ⊆ [[self]]`.
    pub fn dominates(&self, other: &L1Set) -> bool {
        qo::set_dominates(&self.words, &other.words, |a, b| subword(a, b))
    }
}

impl fmt::Display for L1Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, w) in self.words.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            f.write_str(w)?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum L2Expr {
    Atom(char),
    Concat(Box<L2Expr>, Box<L2Expr>),
    And(Box<L2Expr>, Box<L2Expr>),
    Or(Box<L2Expr>, Box<L2Expr>),
}

impl L2Expr {
    pub fn concat(a: L2Expr, b: L2Expr) -> Self {
        L2Expr::Concat(Box::new(a), Box::new(b))
    }

    pub fn and(a: L2Expr, b: L2Expr) -> Self {
        L2Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: L2Expr, b: L2Expr) -> Self {
        L2Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn letters(&self) -> BTreeSet<char> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<char>) {
        match self {
            L2Expr::Atom(a) => {
                out.insert(*a);
            }
            L2Expr::Concat(x, y) | L2Expr::And(x, y) | L2Expr::Or(x, y) => {
                x.collect_letters(out);
                y.collect_letters(out);
            }
        }
    }

    /// Membership by structural evaluation of the denotation.
    pub fn denotes(&self, w: &str) -> bool {
        let chars: Vec<char> = w.chars().collect();
        self.denotes_chars(&chars)
    }

    fn denotes_chars(&self, w: &[char]) -> bool {
        match self {
            L2Expr::Atom(a) => w.contains(a),
            L2Expr::Or(x, y) => x.denotes_chars(w) || y.denotes_chars(w),
            L2Expr::And(x, y) => x.denotes_chars(w) && y.denotes_chars(w),
            L2Expr::Concat(x, y) => {
                (0..=w.len()).any(|k| x.denotes_chars(&w[..k]) && y.denotes_chars(&w[k..]))
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            L2Expr::Or(..) => 1,
            L2Expr::And(..) => 2,
            L2Expr::Concat(..) => 3,
            L2Expr::Atom(_) => 4,
        }
    }
}

impl fmt::Display for L2Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, op, y) = match self {
            L2Expr::Atom(a) => return write!(f, "{a}"),
            L2Expr::Concat(x, y) => (x, ".", y),
            L2Expr::And(x, y) => (x, "&", y),
            L2Expr::Or(x, y) => (x, "+", y),
        };
        let p = self.precedence();
        if x.precedence() < p {
            write!(f, "({x})")?;
        } else {
            write!(f, "{x}")?;
        }
        f.write_str(op)?;
        if y.precedence() <= p {
            write!(f, "({y})")
        } else {
            write!(f, "{y}")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ExprParseError {
    pub column: usize,
    pub message: String,
}

impl FromStr for L2Expr {
    type Err = ExprParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            chars: s.chars().collect(),
            pos: 0,
        };
        let e = p.or()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
        }
        Ok(e)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: String) -> ExprParseError {
        ExprParseError {
            column: self.pos + 1,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, ops: &[char]) -> bool {
        self.skip_ws();
        if self.pos < self.chars.len() && ops.contains(&self.chars[self.pos]) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<L2Expr, ExprParseError> {
        let mut e = self.and()?;
        while self.eat(&['+']) {
            e = L2Expr::or(e, self.and()?);
        }
        Ok(e)
    }

    fn and(&mut self) -> Result<L2Expr, ExprParseError> {
        let mut e = self.concat()?;
        while self.eat(&['&']) {
            e = L2Expr::and(e, self.concat()?);
        }
        Ok(e)
    }

    fn concat(&mut self) -> Result<L2Expr, ExprParseError> {
        let mut e = self.primary()?;
        while self.eat(&['.', '•']) {
            e = L2Expr::concat(e, self.primary()?);
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<L2Expr, ExprParseError> {
        self.skip_ws();
        let Some(&c) = self.chars.get(self.pos) else {
            return Err(self.error("unexpected end of expression".into()));
        };
        if c == '(' {
            self.pos += 1;
            let e = self.or()?;
            if !self.eat(&[')']) {
                return Err(self.error("expected ')'".into()));
            }
            return Ok(e);
        }
        if c.is_alphanumeric() {
            self.pos += 1;
            return Ok(L2Expr::Atom(c));
        }
        Err(self.error(format!("expected a letter or '(', found '{c}'")))
    }
}

/// The unique minimal L1 set with the same denotation as `e`.
pub fn normalize_expr(e: &L2Expr) -> L1Set {
    L1Set {
        words: normal_words(e),
    }
}

fn normal_words(e: &L2Expr) -> Vec<String> {
    match e {
        L2Expr::Atom(a) => vec![a.to_string()],
        L2Expr::Or(x, y) => {
            let mut all = normal_words(x);
            all.extend(normal_words(y));
            minimize_words(all)
        }
        L2Expr::Concat(x, y) => {
            let (xs, ys) = (normal_words(x), normal_words(y));
            let mut all = Vec::with_capacity(xs.len() * ys.len());
            for u in &xs {
                for v in &ys {
                    all.push(format!("{u}{v}"));
                }
            }
            minimize_words(all)
        }
        L2Expr::And(x, y) => {
            let (xs, ys) = (normal_words(x), normal_words(y));
            let mut all = Vec::new();
            for u in &xs {
                for v in &ys {
                    all.extend(minimal_common_supersequences(u, v));
                }
            }
            minimize_words(all)
        }
    }
}

/// `[[e2]] ⊆ [[e1]]`.
pub fn expr_entails(e1: &L2Expr, e2: &L2Expr) -> bool {
    normalize_expr(e1).dominates(&normalize_expr(e2))
}
