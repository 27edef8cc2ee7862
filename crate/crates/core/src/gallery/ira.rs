use std::fmt;
use std::str::FromStr;

use super::GalleryError;
use crate::qo;

/// The constant range `C = {cmin, …, cmax}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstRange {
    cmin: i64,
    cmax: i64,
}

impl ConstRange {
    pub fn new(cmin: i64, cmax: i64) -> Result<Self, GalleryError> {
        if cmin > cmax {
            return Err(GalleryError::EmptyRange { cmin, cmax });
        }
        Ok(ConstRange { cmin, cmax })
    }

    pub fn single(c: i64) -> Self {
        ConstRange { cmin: c, cmax: c }
    }

    pub fn cmin(&self) -> i64 {
        self.cmin
    }

    pub fn cmax(&self) -> i64 {
        self.cmax
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.cmin..=self.cmax
    }
}

/// A sparser-than constraint: one value per variable, constants fixed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct S1Constraint {
    values: Vec<i64>,
    consts: (i64, i64),
}

impl S1Constraint {
    pub fn new(values: Vec<i64>, consts: ConstRange) -> Self {
        S1Constraint {
            values,
            consts: (consts.cmin, consts.cmax),
        }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn consts(&self) -> ConstRange {
        ConstRange {
            cmin: self.consts.0,
            cmax: self.consts.1,
        }
    }
}

impl fmt::Display for S1Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(">")
    }
}

/// Literal membership: same order pattern over variables and constants,
/// and every non-negative difference at least as large as in `phi`.
pub fn s1_satisfies(gamma: &[i64], phi: &S1Constraint) -> bool {
    if gamma.len() != phi.values.len() {
        return false;
    }
    let pairs: Vec<(i64, i64)> = phi
        .values
        .iter()
        .copied()
        .zip(gamma.iter().copied())
        .chain(phi.consts().iter().map(|c| (c, c)))
        .collect();
    pairs.iter().all(|&(px, gx)| {
        pairs.iter().all(|&(py, gy)| {
            let ordered = px <= py;
            ordered == (gx <= gy) && (!ordered || py - px <= gy - gx)
        })
    })
}

/// `[[phi2]] ⊆ [[phi1]]`, decided by testing `phi2` itself for membership.
pub fn s1_entails(phi1: &S1Constraint, phi2: &S1Constraint) -> Result<bool, GalleryError> {
    if phi1.values.len() != phi2.values.len() {
        return Err(GalleryError::DimensionMismatch {
            left: phi1.values.len(),
            right: phi2.values.len(),
        });
    }
    if phi1.consts != phi2.consts {
        return Err(GalleryError::RangeMismatch);
    }
    Ok(s1_satisfies(&phi2.values, phi1))
}

/// One gap-order atom over 1-based variable indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum S2Atom {
    /// `c ≤ x`
    AtLeast { var: usize, c: i64 },
    /// `x ≤ c`
    AtMost { var: usize, c: i64 },
    /// `c ≤ y − x`
    Gap { x: usize, y: usize, c: i64 },
}

impl S2Atom {
    fn vars(&self) -> Vec<usize> {
        match *self {
            S2Atom::AtLeast { var, .. } | S2Atom::AtMost { var, .. } => vec![var],
            S2Atom::Gap { x, y, .. } => vec![x, y],
        }
    }

    pub fn satisfied_by(&self, gamma: &[i64]) -> bool {
        let v = |i: usize| gamma[i - 1];
        match *self {
            S2Atom::AtLeast { var, c } => c <= v(var),
            S2Atom::AtMost { var, c } => v(var) <= c,
            S2Atom::Gap { x, y, c } => c <= v(y) - v(x),
        }
    }
}

impl fmt::Display for S2Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            S2Atom::AtLeast { var, c } => write!(f, "{c}<=x{var}"),
            S2Atom::AtMost { var, c } => write!(f, "x{var}<={c}"),
            S2Atom::Gap { x, y, c } => write!(f, "{c}<=x{y}-x{x}"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Term {
    Const(i64),
    Var(usize),
    Diff(usize, usize),
}

fn parse_term(s: &str) -> Option<Term> {
    let var = |t: &str| t.strip_prefix('x')?.parse::<usize>().ok().filter(|&i| i > 0);
    if let Ok(c) = s.parse::<i64>() {
        return Some(Term::Const(c));
    }
    if let Some(v) = var(s) {
        return Some(Term::Var(v));
    }
    let (y, x) = s.split_once('-')?;
    Some(Term::Diff(var(y)?, var(x)?))
}

impl FromStr for S2Atom {
    type Err = GalleryError;

    /// Accepts `c<=x`, `x<=c`, `c<=y-x`, `x<y`, with any of `<=`, `<`, `>=`,
    /// `>`; strict forms become non-strict integer atoms.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GalleryError::Parse(format!("cannot read gap atom '{s}'"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (lhs, op, rhs) = ["<=", ">=", "<", ">"]
            .iter()
            .find_map(|op| compact.split_once(op).map(|(l, r)| (l, *op, r)))
            .ok_or_else(bad)?;
        let (l, r) = (parse_term(lhs).ok_or_else(bad)?, parse_term(rhs).ok_or_else(bad)?);
        // rewrite as small ≤ big - strict
        let (small, big, strict) = match op {
            "<=" => (l, r, 0),
            "<" => (l, r, 1),
            ">=" => (r, l, 0),
            _ => (r, l, 1),
        };
        match (small, big) {
            (Term::Const(c), Term::Var(var)) => Ok(S2Atom::AtLeast { var, c: c + strict }),
            (Term::Var(var), Term::Const(c)) => Ok(S2Atom::AtMost { var, c: c - strict }),
            (Term::Const(c), Term::Diff(y, x)) => Ok(S2Atom::Gap { x, y, c: c + strict }),
            (Term::Var(x), Term::Var(y)) => Ok(S2Atom::Gap { x, y, c: strict }),
            _ => Err(bad()),
        }
    }
}

/// A conjunction of gap-order atoms over `vars` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S2Constraint {
    vars: usize,
    atoms: Vec<S2Atom>,
}

impl S2Constraint {
    pub fn new(vars: usize, atoms: Vec<S2Atom>) -> Result<Self, GalleryError> {
        for a in &atoms {
            for v in a.vars() {
                if v == 0 || v > vars {
                    return Err(GalleryError::VariableOutOfRange { var: v, dim: vars });
                }
            }
        }
        Ok(S2Constraint { vars, atoms })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn atoms(&self) -> &[S2Atom] {
        &self.atoms
    }
}

impl fmt::Display for S2Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("true");
        }
        for (k, a) in self.atoms.iter().enumerate() {
            if k > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

pub fn s2_satisfies(gamma: &[i64], psi: &S2Constraint) -> bool {
    gamma.len() == psi.vars && psi.atoms.iter().all(|a| a.satisfied_by(gamma))
}

/// Default bound on order patterns and on gap-grid size per pattern.
pub const DEFAULT_EXPANSION_CAP: usize = 100_000;

/// Where a variable sits relative to the constant range. Ranks number the
/// blocks of equal variables on each side from left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Below(usize),
    At(i64),
    Above(usize),
}

struct Pattern {
    slots: Vec<Slot>,
    below: usize,
    above: usize,
}

/// `base + Σ coef·gap`, with one gap per block boundary: below blocks to
/// their right neighbour, above blocks to their left neighbour.
struct Affine {
    base: i64,
    coef: Vec<i64>,
}

impl Affine {
    fn of(p: &Pattern, consts: ConstRange, var: usize) -> Affine {
        let mut coef = vec![0; p.below + p.above];
        let base = match p.slots[var] {
            Slot::At(c) => c,
            Slot::Below(r) => {
                coef[r..p.below].iter_mut().for_each(|c| *c = -1);
                consts.cmin
            }
            Slot::Above(r) => {
                coef[p.below..=p.below + r].iter_mut().for_each(|c| *c = 1);
                consts.cmax
            }
        };
        Affine { base, coef }
    }

    fn minus(mut self, other: &Affine) -> Affine {
        self.base -= other.base;
        for (a, b) in self.coef.iter_mut().zip(&other.coef) {
            *a -= b;
        }
        self
    }

    fn eval(&self, gaps: &[u64]) -> i64 {
        self.base
            + self
                .coef
                .iter()
                .zip(gaps)
                .map(|(c, g)| c * *g as i64)
                .sum::<i64>()
    }
}

/// An atom as `lhs ≥ rhs`.
fn atom_affine(p: &Pattern, consts: ConstRange, a: &S2Atom) -> (Affine, i64) {
    let val = |v: usize| Affine::of(p, consts, v - 1);
    match *a {
        S2Atom::AtLeast { var, c } => (val(var), c),
        S2Atom::AtMost { var, c } => {
            let zero = Affine {
                base: 0,
                coef: vec![0; p.below + p.above],
            };
            (zero.minus(&val(var)), -c)
        }
        S2Atom::Gap { x, y, c } => (val(y).minus(&val(x)), c),
    }
}

/// All surjections from `items` onto ranks `0..k`, for every `k`.
fn weak_orders(items: usize) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    let mut ranks = vec![0; items];
    fn go(i: usize, ranks: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, usize)>) {
        if i == ranks.len() {
            let k = ranks.iter().map(|r| r + 1).max().unwrap_or(0);
            if (0..k).all(|r| ranks.contains(&r)) {
                out.push((ranks.clone(), k));
            }
            return;
        }
        for r in 0..ranks.len() {
            ranks[i] = r;
            go(i + 1, ranks, out);
        }
    }
    go(0, &mut ranks, &mut out);
    out
}

fn patterns(vars: usize, consts: ConstRange, cap: usize) -> Result<Vec<Pattern>, GalleryError> {
    // 0 = below, 1 = above, 2.. = constants
    let sides = 2 + (consts.cmax - consts.cmin + 1) as usize;
    let mut out = Vec::new();
    let mut code = vec![0usize; vars];
    loop {
        let below: Vec<usize> = (0..vars).filter(|&v| code[v] == 0).collect();
        let above: Vec<usize> = (0..vars).filter(|&v| code[v] == 1).collect();
        for (br, bk) in weak_orders(below.len()) {
            for (ar, ak) in weak_orders(above.len()) {
                let mut slots = vec![Slot::At(0); vars];
                for v in 0..vars {
                    if code[v] >= 2 {
                        slots[v] = Slot::At(consts.cmin + (code[v] - 2) as i64);
                    }
                }
                for (k, &v) in below.iter().enumerate() {
                    slots[v] = Slot::Below(br[k]);
                }
                for (k, &v) in above.iter().enumerate() {
                    slots[v] = Slot::Above(ar[k]);
                }
                out.push(Pattern {
                    slots,
                    below: bk,
                    above: ak,
                });
                if out.len() > cap {
                    return Err(GalleryError::SizeLimit { size: out.len(), cap });
                }
            }
        }
        // next code in mixed radix
        let mut i = 0;
        while i < vars && code[i] + 1 == sides {
            code[i] = 0;
            i += 1;
        }
        if i == vars {
            return Ok(out);
        }
        code[i] += 1;
    }
}

fn gap_grid(dims: usize, k: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::with_capacity(dims)];
    for _ in 0..dims {
        out = out
            .into_iter()
            .flat_map(|g| {
                (1..=k).map(move |x| {
                    let mut g = g.clone();
                    g.push(x);
                    g
                })
            })
            .collect();
    }
    out
}

/// The minimal sparser-than constraints whose disjunction denotes the same
/// configurations as `psi`, relative to the constant range `consts`.
///
/// Fails with `NotExpressible` when some order pattern bounds a growable
/// gap from above, since such a set is not a finite union of sparser-than
/// constraints over `consts`.
pub fn expand_s2_to_s1(
    psi: &S2Constraint,
    consts: ConstRange,
    cap: usize,
) -> Result<Vec<S1Constraint>, GalleryError> {
    let mut found = Vec::new();
    for p in patterns(psi.vars, consts, cap)? {
        let dims = p.below + p.above;
        let atoms: Vec<(Affine, i64, &S2Atom)> = psi
            .atoms
            .iter()
            .map(|a| {
                let (lhs, rhs) = atom_affine(&p, consts, a);
                (lhs, rhs, a)
            })
            .collect();
        // beyond this every positive atom is met by any gap it touches
        let k = atoms
            .iter()
            .filter(|(l, _, _)| l.coef.iter().any(|&c| c > 0))
            .map(|(l, r, _)| r - l.base)
            .max()
            .unwrap_or(1)
            .max(1) as u64;
        let grid_size = (k as u128).saturating_pow(dims as u32);
        if grid_size > cap as u128 {
            return Err(GalleryError::SizeLimit {
                size: grid_size.min(usize::MAX as u128) as usize,
                cap,
            });
        }
        let sols: Vec<Vec<u64>> = gap_grid(dims, k)
            .into_iter()
            .filter(|g| atoms.iter().all(|(l, r, _)| l.eval(g) >= *r))
            .collect();
        if sols.is_empty() {
            continue;
        }
        if let Some((_, _, a)) = atoms.iter().find(|(l, _, _)| l.coef.iter().any(|&c| c < 0)) {
            return Err(GalleryError::NotExpressible(a.to_string()));
        }
        for g in qo::minimize(&sols, |a, b| qo::vector_leq(a, b)) {
            let values = (0..psi.vars)
                .map(|v| Affine::of(&p, consts, v).eval(&g))
                .collect();
            found.push(S1Constraint::new(values, consts));
        }
    }
    found.sort();
    found.dedup();
    Ok(qo::minimize(&found, |a, b| s1_satisfies(&b.values, a)))
}

/// `[[psi2]] ⊆ [[psi1]]` via domination between the expansions.
pub fn s2_entails(
    psi1: &S2Constraint,
    psi2: &S2Constraint,
    consts: ConstRange,
    cap: usize,
) -> Result<bool, GalleryError> {
    if psi1.vars != psi2.vars {
        return Err(GalleryError::DimensionMismatch {
            left: psi1.vars,
            right: psi2.vars,
        });
    }
    let e1 = expand_s2_to_s1(psi1, consts, cap)?;
    let e2 = expand_s2_to_s1(psi2, consts, cap)?;
    Ok(qo::set_dominates(&e1, &e2, |a, b| s1_satisfies(&b.values, a)))
}
