//! Brute-force reference semantics and random instance generators.
//!
//! Each oracle decides a question directly from the definitions, on a grid
//! or by explicit search, without calling the symbolic code it is used to
//! check.

use std::collections::{HashSet, VecDeque};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use wsts::engine::{backward_reach, Limits, ReachabilityProblem, Verdict};
use wsts::ezone::{Bound, ExistentialZone, InitCondition, ZoneSystem};
use wsts::lcs::{LcsConstraint, LcsModel, LcsOp, LcsTransition};
use wsts::tpn::{Age, Arc, Interval, Marking, Net, PlaceId, Token, Transition};

/// Seeded from `WSTS_SEED` when set; `salt` separates the streams of
/// different suites.
pub fn rng(salt: u64) -> ChaCha8Rng {
    let seed = std::env::var("WSTS_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(0x5eed);
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

// ---------------------------------------------------------------- zones

/// A raw (unnormalized) zone over `places` places with constants in
/// `-c..=c`.
pub fn random_zone(rng: &mut impl Rng, max_tokens: usize, places: usize, c: i64) -> ExistentialZone {
    let m = rng.gen_range(0..=max_tokens);
    let placing = (0..m).map(|_| PlaceId(rng.gen_range(0..places))).collect();
    let mut rows = vec![vec![Bound::INF; m + 1]; m + 1];
    for i in 1..=m {
        rows[0][i] = Bound::ZERO;
    }
    for j in 0..=m {
        for i in 0..=m {
            if i == j || !rng.gen_bool(0.35) {
                continue;
            }
            let v = match (j, i) {
                (_, 0) => rng.gen_range(0..=c),
                (0, _) => -rng.gen_range(0..=c),
                _ => rng.gen_range(-c..=c),
            };
            rows[j][i] = Bound::le(v);
        }
    }
    // fixed differences and ages make several witnesses necessary more often
    for j in 0..=m {
        for i in j + 1..=m {
            if let (Some(v), true) = (rows[j][i].value(), rng.gen_bool(0.25)) {
                rows[i][j] = Bound::le(-v);
            }
        }
    }
    ExistentialZone::new(placing, rows).unwrap()
}

/// A normalized zone, consistent with high probability.
pub fn random_normal_zone(rng: &mut impl Rng, max_tokens: usize, places: usize, c: i64) -> ExistentialZone {
    for _ in 0..20 {
        let z = random_zone(rng, max_tokens, places, c).normalize();
        if z.is_consistent() || rng.gen_bool(0.1) {
            return z;
        }
    }
    random_zone(rng, 0, places, c).normalize()
}

fn table(z: &ExistentialZone) -> Vec<Vec<Bound>> {
    let m = z.token_count();
    (0..=m)
        .map(|j| (0..=m).map(|i| if i == j { Bound::ZERO } else { z.bound(j, i) }).collect())
        .collect()
}

/// All tokens in place 0, each age in a narrow window, some differences
/// fixed: pairs where only several witnesses together cover the stronger
/// zone come up often.
pub fn random_window_zone(rng: &mut impl Rng, max_tokens: usize, c: i64) -> ExistentialZone {
    let m = rng.gen_range(1..=max_tokens);
    let mut rows = vec![vec![Bound::INF; m + 1]; m + 1];
    for i in 1..=m {
        let lo = rng.gen_range(0..=c);
        rows[0][i] = Bound::le(-lo);
        rows[i][0] = Bound::le((lo + rng.gen_range(0..=2)).min(c));
        for j in 1..i {
            if rng.gen_bool(0.5) {
                let d = rng.gen_range(-2..=2);
                rows[i][j] = Bound::le(d);
                rows[j][i] = Bound::le(-d);
            }
        }
    }
    ExistentialZone::new(vec![PlaceId(0); m], rows).unwrap().normalize()
}

/// A two-token zone `y2 = y1 + d` with `y1` in a window, against a
/// one-token window that may only cover it through both tokens together.
pub fn split_pair(rng: &mut impl Rng) -> (ExistentialZone, ExistentialZone) {
    // (0, 2, 1, 1, 2) is the one split case with constants up to 3
    let (a, w, d, lo, hi) = if rng.gen_bool(0.5) {
        (0, 2, 1, 1, 2)
    } else {
        let a = rng.gen_range(0..=1);
        let w = rng.gen_range(1..=2 - a);
        let lo = rng.gen_range(0..=2);
        (a, w, rng.gen_range(1..=3 - a - w), lo, rng.gen_range(lo..=3))
    };
    let stronger = ExistentialZone::from_table(
        &[0, 0],
        &[
            &[None, Some(-a), Some(-a - d)],
            &[Some(a + w), None, Some(-d)],
            &[Some(a + w + d), Some(d), None],
        ],
    )
    .unwrap()
    .normalize();
    let weaker = ExistentialZone::from_table(&[0], &[&[None, Some(-lo)], &[Some(hi), None]])
        .unwrap()
        .normalize();
    (weaker, stronger)
}

/// Tokens reordered by `perm` (new index k holds old token `perm[k]`).
pub fn permute(z: &ExistentialZone, perm: &[usize]) -> ExistentialZone {
    let old = table(z);
    let idx: Vec<usize> = std::iter::once(0).chain(perm.iter().map(|p| p + 1)).collect();
    let rows = idx
        .iter()
        .map(|&j| idx.iter().map(|&i| old[j][i]).collect())
        .collect();
    let placing = perm.iter().map(|&p| z.placing()[p]).collect();
    ExistentialZone::new(placing, rows).unwrap()
}

/// A zone whose denotation is contained in `z`'s: extra tokens, tighter
/// bounds, shuffled token order.
pub fn strengthen(
    rng: &mut impl Rng,
    z: &ExistentialZone,
    places: usize,
    c: i64,
    max_tokens: usize,
) -> ExistentialZone {
    let mut rows = table(z);
    let mut placing = z.placing().to_vec();
    if placing.len() < max_tokens && rng.gen_bool(0.4) {
        placing.push(PlaceId(rng.gen_range(0..places)));
        let m = placing.len();
        for r in rows.iter_mut() {
            r.push(Bound::INF);
        }
        rows.push(vec![Bound::INF; m + 1]);
        rows[0][m] = Bound::ZERO;
        rows[m][m] = Bound::ZERO;
    }
    let m = placing.len();
    for _ in 0..rng.gen_range(0..=2) {
        if m == 0 {
            break;
        }
        let j = rng.gen_range(0..=m);
        let i = rng.gen_range(0..=m);
        if i == j {
            continue;
        }
        let v = Bound::le(rng.gen_range(-c..=c));
        if v < rows[j][i] {
            rows[j][i] = v;
        }
    }
    let zone = ExistentialZone::new(placing, rows).unwrap().normalize();
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    permute(&zone, &perm).normalize()
}

/// Ages are integers scaled by a common denominator.
pub type GridToken = (usize, i64);

/// Whether scaled ages (index 0 is the reference, age 0) meet every bound.
pub fn dbm_holds(z: &ExistentialZone, ages: &[i64], denom: i64, upto: usize) -> bool {
    for j in 0..=upto {
        for i in 0..=upto {
            if i == j {
                continue;
            }
            if let Bound::Finite { value, strict } = z.bound(j, i) {
                let d = ages[j] - ages[i];
                let c = value * denom;
                if d > c || (strict && d == c) {
                    return false;
                }
            }
        }
    }
    true
}

/// Membership by trying every place-respecting injection.
pub fn member(z: &ExistentialZone, marking: &[GridToken], denom: i64) -> bool {
    let m = z.token_count();
    let mut ages = vec![0i64; m + 1];
    let mut used = vec![false; marking.len()];
    fn go(
        z: &ExistentialZone,
        marking: &[GridToken],
        denom: i64,
        k: usize,
        ages: &mut Vec<i64>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == z.token_count() {
            return dbm_holds(z, ages, denom, k);
        }
        for t in 0..marking.len() {
            if used[t] || marking[t].0 != z.placing()[k].0 {
                continue;
            }
            used[t] = true;
            ages[k + 1] = marking[t].1;
            let ok = dbm_holds(z, ages, denom, k + 1) && go(z, marking, denom, k + 1, ages, used);
            used[t] = false;
            if ok {
                return true;
            }
        }
        false
    }
    go(z, marking, denom, 0, &mut ages, &mut used)
}

/// `[[stronger]] ⊆ [[weaker]]`, decided on the minimal markings of
/// `stronger` over a grid fine and wide enough to hit every region of
/// difference constraints with these constants.
pub fn entails_on_grid(weaker: &ExistentialZone, stronger: &ExistentialZone) -> bool {
    let n = stronger.token_count();
    let denom = n as i64 + 1;
    let c = weaker.max_constant().max(stronger.max_constant());
    let cap = (n as i64).max(1) * (c + 1) * denom;
    let mut ages = vec![0i64; n + 1];
    fn go(
        weaker: &ExistentialZone,
        stronger: &ExistentialZone,
        denom: i64,
        cap: i64,
        k: usize,
        ages: &mut Vec<i64>,
    ) -> bool {
        let n = stronger.token_count();
        if k == n {
            let marking: Vec<GridToken> = (1..=n).map(|i| (stronger.placing()[i - 1].0, ages[i])).collect();
            return member(weaker, &marking, denom);
        }
        for a in 0..=cap {
            ages[k + 1] = a;
            if dbm_holds(stronger, ages, denom, k + 1) && !go(weaker, stronger, denom, cap, k + 1, ages) {
                return false;
            }
        }
        true
    }
    go(weaker, stronger, denom, cap, 0, &mut ages)
}

// ------------------------------------------------------------- timed nets

pub fn random_interval(rng: &mut impl Rng, c: i64) -> Interval {
    let lo = rng.gen_range(0..=c);
    if rng.gen_bool(0.4) {
        Interval::at_least(lo)
    } else {
        Interval::closed(lo, rng.gen_range(lo..=c))
    }
}

fn random_arcs(rng: &mut impl Rng, n: usize, places: usize, c: i64) -> Vec<Arc> {
    (0..n)
        .map(|_| Arc {
            place: PlaceId(rng.gen_range(0..places)),
            interval: random_interval(rng, c),
        })
        .collect()
}

pub fn random_timed_net(rng: &mut impl Rng, places: usize, c: i64) -> Net {
    let transitions = (0..rng.gen_range(1..=2))
        .map(|k| {
            let (n_in, n_out) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
            let inputs = random_arcs(rng, n_in, places, c);
            let outputs = random_arcs(rng, n_out, places, c);
            Transition {
                name: format!("t{k}"),
                inputs,
                outputs,
            }
        })
        .collect();
    Net::new((0..places).map(|p| format!("p{p}")).collect(), transitions).unwrap()
}

/// All one-step successors on the `1/denom` grid: delays up to
/// `max_delay`, produced ages up to `max_age` (both scaled).
pub fn forward_successors(
    net: &Net,
    marking: &[GridToken],
    denom: i64,
    max_delay: i64,
    max_age: i64,
) -> Vec<Vec<GridToken>> {
    let mut out = Vec::new();
    for d in 0..=max_delay {
        out.push(marking.iter().map(|&(p, a)| (p, a + d)).collect());
    }
    let fits = |iv: &Interval, a: i64| a >= iv.lo() * denom && iv.hi().is_none_or(|h| a <= h * denom);
    for t in net.transitions() {
        // choose distinct input tokens
        let mut picks: Vec<Vec<usize>> = vec![vec![]];
        for arc in &t.inputs {
            let mut next = Vec::new();
            for p in &picks {
                for (k, tok) in marking.iter().enumerate() {
                    if !p.contains(&k) && tok.0 == arc.place.0 && fits(&arc.interval, tok.1) {
                        let mut q = p.clone();
                        q.push(k);
                        next.push(q);
                    }
                }
            }
            picks = next;
        }
        for p in picks {
            let rest: Vec<GridToken> = marking
                .iter()
                .enumerate()
                .filter(|(k, _)| !p.contains(k))
                .map(|(_, t)| *t)
                .collect();
            let mut produced: Vec<Vec<GridToken>> = vec![rest];
            for arc in &t.outputs {
                let mut next = Vec::new();
                for m in &produced {
                    for a in 0..=max_age {
                        if fits(&arc.interval, a) {
                            let mut m2 = m.clone();
                            m2.push((arc.place.0, a));
                            next.push(m2);
                        }
                    }
                }
                produced = next;
            }
            out.extend(produced);
        }
    }
    out
}

/// Every multiset of at most `size` tokens over `places` places with
/// scaled ages in `0..=max_age`.
pub fn small_markings(places: usize, max_age: i64, size: usize) -> Vec<Vec<GridToken>> {
    let kinds: Vec<GridToken> = (0..places)
        .flat_map(|p| (0..=max_age).map(move |a| (p, a)))
        .collect();
    let mut out = vec![vec![]];
    let mut frontier: Vec<(Vec<GridToken>, usize)> = vec![(vec![], 0)];
    for _ in 0..size {
        let mut next = Vec::new();
        for (m, from) in &frontier {
            for k in *from..kinds.len() {
                let mut m2 = m.clone();
                m2.push(kinds[k]);
                out.push(m2.clone());
                next.push((m2, k));
            }
        }
        frontier = next;
    }
    out
}

// ----------------------------------------------------------- untimed nets

/// Input and output count vectors per transition.
#[derive(Debug, Clone)]
pub struct VectorNet {
    pub places: usize,
    pub transitions: Vec<(Vec<u64>, Vec<u64>)>,
}

impl VectorNet {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let places = rng.gen_range(2..=4);
        let vec_of = |rng: &mut R| {
            let mut v = vec![0u64; places];
            for _ in 0..rng.gen_range(0..=2) {
                v[rng.gen_range(0..places)] += 1;
            }
            v
        };
        let n = rng.gen_range(1..=4);
        let transitions = (0..n).map(|_| (vec_of(rng), vec_of(rng))).collect();
        VectorNet { places, transitions }
    }

    /// The same net with untimed arcs.
    pub fn to_net(&self) -> Net {
        let arcs = |v: &Vec<u64>| -> Vec<Arc> {
            v.iter()
                .enumerate()
                .flat_map(|(p, &n)| {
                    std::iter::repeat_n(
                        Arc {
                            place: PlaceId(p),
                            interval: Interval::any(),
                        },
                        n as usize,
                    )
                })
                .collect()
        };
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .map(|(k, (i, o))| Transition {
                name: format!("t{k}"),
                inputs: arcs(i),
                outputs: arcs(o),
            })
            .collect();
        Net::new((0..self.places).map(|p| format!("p{p}")).collect(), transitions).unwrap()
    }
}

/// At most `max_tokens` tokens spread over `places` places.
pub fn random_counts(rng: &mut impl Rng, places: usize, max_tokens: u64) -> Vec<u64> {
    let mut v = vec![0u64; places];
    for _ in 0..rng.gen_range(0..=max_tokens) {
        v[rng.gen_range(0..places)] += 1;
    }
    v
}

/// Coverability decided by the zone engine on the untimed net.
pub fn engine_covers(net: &VectorNet, init: &[u64], target: &[u64]) -> bool {
    let tokens = |counts: &[u64]| -> Vec<PlaceId> {
        counts
            .iter()
            .enumerate()
            .flat_map(|(p, &n)| std::iter::repeat_n(PlaceId(p), n as usize))
            .collect()
    };
    let marking = Marking::new(
        tokens(init)
            .into_iter()
            .map(|place| Token {
                place,
                age: Age::from_integer(0),
            })
            .collect(),
    );
    let system = ZoneSystem::new(net.to_net());
    let init = InitCondition::Marking(marking);
    let problem = ReachabilityProblem {
        system: &system,
        targets: vec![ExistentialZone::unconstrained(tokens(target))],
        init: &init,
    };
    backward_reach(&problem, Limits::default()).unwrap().verdict == Verdict::Reachable
}

/// Explicit forward search over markings. `None` when some reachable
/// marking holds more than `cap` tokens.
pub fn bfs_covers(net: &VectorNet, init: &[u64], target: &[u64], cap: u64) -> Option<bool> {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(init.to_vec());
    queue.push_back(init.to_vec());
    let mut covered = false;
    while let Some(m) = queue.pop_front() {
        if m.iter().sum::<u64>() > cap {
            return None;
        }
        covered |= m.iter().zip(target).all(|(a, t)| a >= t);
        for (input, output) in &net.transitions {
            if m.iter().zip(input).any(|(x, i)| x < i) {
                continue;
            }
            let next: Vec<u64> = m
                .iter()
                .zip(input.iter().zip(output))
                .map(|(x, (i, o))| x - i + o)
                .collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Some(covered)
}

/// Coverability through a Karp–Miller tree; `None` components are ω.
pub fn karp_miller_covers(net: &VectorNet, init: &[u64], target: &[u64]) -> bool {
    type Omega = Vec<Option<u64>>;
    let covers = |m: &Omega| m.iter().zip(target).all(|(a, &t)| a.is_none_or(|a| a >= t));
    let leq = |a: &Omega, b: &Omega| {
        a.iter().zip(b).all(|(x, y)| match (x, y) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(x), Some(y)) => x <= y,
        })
    };
    let root: Omega = init.iter().map(|&x| Some(x)).collect();
    // nodes: (marking, parent)
    let mut nodes: Vec<(Omega, Option<usize>)> = vec![(root, None)];
    let mut work = vec![0usize];
    while let Some(n) = work.pop() {
        let m = nodes[n].0.clone();
        if covers(&m) {
            return true;
        }
        // stop if an ancestor carries the same marking
        let mut a = nodes[n].1;
        let mut repeated = false;
        while let Some(k) = a {
            if nodes[k].0 == m {
                repeated = true;
                break;
            }
            a = nodes[k].1;
        }
        if repeated {
            continue;
        }
        for (input, output) in &net.transitions {
            let enabled = m.iter().zip(input).all(|(x, &i)| x.is_none_or(|x| x >= i));
            if !enabled {
                continue;
            }
            let mut next: Omega = m
                .iter()
                .zip(input.iter().zip(output))
                .map(|(x, (&i, &o))| x.map(|x| x - i + o))
                .collect();
            let mut a = Some(n);
            while let Some(k) = a {
                let anc = &nodes[k].0;
                if leq(anc, &next) && anc != &next {
                    for (x, y) in next.iter_mut().zip(anc) {
                        if *x != *y {
                            *x = None;
                        }
                    }
                }
                a = nodes[k].1;
            }
            nodes.push((next, Some(n)));
            work.push(nodes.len() - 1);
        }
    }
    false
}

// ------------------------------------------------------------------- lcs

pub fn random_lcs(rng: &mut impl Rng) -> LcsModel {
    let states = rng.gen_range(1..=3);
    let transitions = (0..rng.gen_range(1..=5))
        .map(|_| {
            let letter = if rng.gen_bool(0.5) { 'a' } else { 'b' };
            let op = match rng.gen_range(0..5) {
                0 | 1 => LcsOp::Send { channel: 0, letter },
                2 | 3 => LcsOp::Recv { channel: 0, letter },
                _ => LcsOp::Nop,
            };
            LcsTransition {
                from: rng.gen_range(0..states),
                to: rng.gen_range(0..states),
                op,
            }
        })
        .collect();
    LcsModel::new(
        (0..states).map(|q| format!("q{q}")).collect(),
        vec!["c".into()],
        vec!['a', 'b'],
        transitions,
    )
    .unwrap()
}

fn is_subsequence(u: &str, v: &str) -> bool {
    let mut it = v.chars();
    u.chars().all(|c| it.any(|d| d == c))
}

/// Explicit search with channel contents capped at `bound` letters and
/// single-letter losses as extra moves. `None` when the cap was hit
/// without finding a covering configuration.
pub fn lcs_bfs(model: &LcsModel, init: &LcsConstraint, target: &LcsConstraint, bound: usize) -> Option<bool> {
    let mut seen: HashSet<(usize, String)> = HashSet::new();
    let mut queue = VecDeque::new();
    let start = (init.state, init.words[0].clone());
    seen.insert(start.clone());
    queue.push_back(start);
    let mut truncated = false;
    while let Some((q, w)) = queue.pop_front() {
        if q == target.state && is_subsequence(&target.words[0], &w) {
            return Some(true);
        }
        let mut next = Vec::new();
        for k in 0..w.len() {
            let mut lost = w.clone();
            lost.remove(k);
            next.push((q, lost));
        }
        for t in model.transitions().iter().filter(|t| t.from == q) {
            match t.op {
                LcsOp::Nop => next.push((t.to, w.clone())),
                LcsOp::Send { letter, .. } => {
                    if w.len() < bound {
                        next.push((t.to, format!("{w}{letter}")));
                    } else {
                        truncated = true;
                    }
                }
                LcsOp::Recv { letter, .. } => {
                    if let Some(rest) = w.strip_prefix(letter) {
                        next.push((t.to, rest.to_string()));
                    }
                }
            }
        }
        for n in next {
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    if truncated {
        None
    } else {
        Some(false)
    }
}

pub fn random_word(rng: &mut impl Rng, letters: &[char], max_len: usize) -> String {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| letters[rng.gen_range(0..letters.len())]).collect()
}

// ------------------------------------------------------------------- ira

/// Sparser-than membership straight from its definition.
pub fn sparser_member(gamma: &[i64], phi: &[i64], consts: std::ops::RangeInclusive<i64>) -> bool {
    let mut pts: Vec<(i64, i64)> = phi.iter().copied().zip(gamma.iter().copied()).collect();
    pts.extend(consts.map(|c| (c, c)));
    for &(p1, g1) in &pts {
        for &(p2, g2) in &pts {
            if (p1 <= p2) != (g1 <= g2) {
                return false;
            }
            if p1 <= p2 && p2 - p1 > g2 - g1 {
                return false;
            }
        }
    }
    true
}

/// Every integer vector of length `n` over `lo..=hi`.
pub fn int_grid(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}
