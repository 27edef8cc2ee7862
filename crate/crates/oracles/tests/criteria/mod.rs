//! One routine per acceptance criterion. Each returns whether the
//! criterion holds and a one-line summary of what was checked.

use std::time::Instant;

use rand::prelude::*;

use wsts::check::{check_problem, CheckOptions};
use wsts::engine::{backward_reach, ConstraintSystem, Limits, ReachabilityProblem, Verdict};
use wsts::ezone::{entails, entails_single_witness, ExistentialZone, InitCondition, ZoneSystem};
use wsts::fischer::fischer_model;
use wsts::gallery::{
    expand_s2_to_s1, s1_entails, s1_satisfies, ConstRange, S1Constraint, S2Constraint,
    DEFAULT_EXPANSION_CAP,
};
use wsts::lcs::{lcs_entails, minimize_words, normalize_expr, LcsConstraint, LcsSystem, L2Expr};
use wsts::model::ModelFile;
use wsts::qo::{self, RadoConstraint};
use wsts::tpn::{Age, Interval, Marking, PlaceId, Token};

use wsts_oracles::*;

pub struct Outcome {
    pub pass: bool,
    pub summary: String,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome {
            pass,
            summary: summary.into(),
        }
    }
}

// ------------------------------------------------------------ criterion 1

pub fn fischer() -> Outcome {
    let limits = Limits {
        max_constraints: 10_000,
        max_seconds: 60.0,
    };
    let run = |mutate: bool| {
        let problem = ModelFile::Tpn(fischer_model(mutate)).compile().unwrap();
        let opts = CheckOptions {
            limits,
            ..CheckOptions::default()
        };
        check_problem(&problem, &opts)
    };
    let started = Instant::now();
    let safe = match run(false) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("safe net: {e}")),
    };
    let elapsed = started.elapsed().as_secs_f64();
    let unreachable = safe.len() == 3 && safe.iter().all(|r| r.verdict == Verdict::Unreachable);
    let largest = safe.iter().map(|r| r.constraints).max().unwrap_or(0);
    let flipped = match run(true) {
        Ok(r) => r.iter().filter(|r| r.verdict == Verdict::Reachable).count(),
        Err(e) => return Outcome::new(false, format!("mutated net: {e}")),
    };
    let verdicts: Vec<String> = safe.iter().map(|r| format!("{} {}", r.name, r.verdict)).collect();
    Outcome::new(
        unreachable && elapsed <= 60.0 && largest <= 10_000 && flipped >= 1,
        format!(
            "{}; {elapsed:.2}s, at most {largest} constraints; mutation flips {flipped} target(s)",
            verdicts.join(", ")
        ),
    )
}

// ------------------------------------------------------------ criterion 2

fn tables() -> Vec<(&'static str, bool)> {
    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;
    let z = ExistentialZone::from_table(
        &[B, C],
        &[
            &[None, Some(0), Some(0)],
            &[Some(8), None, Some(8)],
            &[Some(8), Some(4), None],
        ],
    )
    .unwrap();
    let conj = ExistentialZone::from_table(
        &[B, C],
        &[
            &[None, Some(-1), Some(0)],
            &[Some(6), None, Some(8)],
            &[Some(8), Some(4), None],
        ],
    )
    .unwrap();
    let added = ExistentialZone::from_table(
        &[B, C, A],
        &[
            &[None, Some(0), Some(0), Some(-1)],
            &[Some(8), None, Some(8), None],
            &[Some(8), Some(4), None, None],
            &[Some(2), None, None, None],
        ],
    )
    .unwrap();
    let three = ExistentialZone::from_table(
        &[B, C, A],
        &[
            &[None, Some(0), Some(0), Some(-1)],
            &[Some(8), None, Some(6), Some(7)],
            &[Some(8), Some(4), None, Some(7)],
            &[Some(2), Some(2), Some(2), None],
        ],
    )
    .unwrap();
    let abstracted = ExistentialZone::from_table(
        &[B, A],
        &[
            &[None, Some(0), Some(-1)],
            &[Some(8), None, Some(7)],
            &[Some(2), Some(2), None],
        ],
    )
    .unwrap();
    vec![
        ("conjunction [1,6] on token 1", z.conjunction(Interval::closed(1, 6), 1).ok() == Some(conj)),
        ("addition of A with [1,2]", z.addition(PlaceId(A), Interval::closed(1, 2)) == added),
        ("abstraction of token 2", three.abstraction(2).ok() == Some(abstracted)),
    ]
}

pub fn goldens() -> Outcome {
    let mut checks = tables();

    let e: L2Expr = "(a&b).(b+c)".parse().unwrap();
    let words = normalize_expr(&e).words().to_vec();
    checks.push(("(a&b).(b+c) word set", words == ["abb", "abc", "bab", "bac"]));

    let phi = S1Constraint::new(vec![10, 5, 12], ConstRange::single(5));
    checks.push((
        "membership triple for <10,5,12>",
        s1_satisfies(&[12, 5, 17], &phi) && !s1_satisfies(&[8, 5, 16], &phi) && !s1_satisfies(&[12, 4, 17], &phi),
    ));

    let psi = S2Constraint::new(2, vec!["6<=x2".parse().unwrap()]).unwrap();
    let got = expand_s2_to_s1(&psi, ConstRange::single(5), DEFAULT_EXPANSION_CAP).unwrap();
    let expected: Vec<S1Constraint> = [4, 5, 6, 7, 8]
        .iter()
        .map(|&x1| S1Constraint::new(vec![x1, 7], ConstRange::single(5)))
        .collect();
    let shown: Vec<String> = got.iter().map(|c| c.to_string()).collect();
    checks.push(("expansion of 6<=x2 over {5}", got == expected));

    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    let summary = if failed.is_empty() {
        format!("{} goldens reproduced", checks.len())
    } else {
        format!(
            "{}/{} goldens reproduced; mismatched: {} (expansion computed {{{}}})",
            checks.len() - failed.len(),
            checks.len(),
            failed.join(", "),
            shown.join(", ")
        )
    };
    Outcome::new(failed.is_empty(), summary)
}

// ------------------------------------------------------------ criterion 3

pub fn zone_entailment(pairs: usize) -> Outcome {
    let mut rng = rng(31);
    let (mut mismatches, mut positive, mut several) = (0, 0, 0);
    for k in 0..pairs {
        let (weaker, stronger) = match k % 4 {
            0 => {
                let w = random_normal_zone(&mut rng, 3, 2, 3);
                let s = strengthen(&mut rng, &w, 2, 3, 3);
                (w, s)
            }
            1 => (random_normal_zone(&mut rng, 3, 2, 3), random_normal_zone(&mut rng, 3, 2, 3)),
            2 => (random_window_zone(&mut rng, 2, 3), random_window_zone(&mut rng, 3, 3)),
            _ => split_pair(&mut rng),
        };
        let want = entails_on_grid(&weaker, &stronger);
        positive += want as usize;
        several += (want && !entails_single_witness(&weaker, &stronger).unwrap()) as usize;
        if entails(&weaker, &stronger).unwrap() != want {
            mismatches += 1;
        }
    }
    Outcome::new(
        mismatches == 0,
        format!("{pairs} pairs ({positive} entailed, {several} only via several witnesses), {mismatches} mismatches"),
    )
}

/// Whether some one-step successor of `marking` lies in `zone`.
fn forward_hits(net: &wsts::tpn::Net, zone: &ExistentialZone, marking: &[GridToken]) -> bool {
    const DENOM: i64 = 2;
    let c = zone.max_constant().max(0);
    let oldest = marking.iter().map(|t| t.1).max().unwrap_or(0);
    let max_delay = (c + 1) * DENOM;
    let max_age = oldest + (c + net.cmax() + 1) * DENOM;
    forward_successors(net, marking, DENOM, max_delay, max_age)
        .iter()
        .any(|m| member(zone, m, DENOM))
}

pub fn zone_pre(pairs: usize) -> Outcome {
    let mut rng = rng(32);
    let (mut mismatches, mut markings, mut hits) = (0usize, 0usize, 0usize);
    for _ in 0..pairs {
        let net = random_timed_net(&mut rng, 2, 2);
        let zone = random_normal_zone(&mut rng, 2, 2, 2);
        let pre: Vec<ExistentialZone> = ZoneSystem::new(net.clone())
            .pre(&zone)
            .unwrap()
            .into_iter()
            .map(|(_, z)| z)
            .collect();
        let max_in = net.transitions().iter().map(|t| t.inputs.len()).max().unwrap_or(0);
        for m in small_markings(2, 4, zone.token_count() + max_in) {
            let got = pre.iter().any(|z| member(z, &m, 2));
            let want = forward_hits(&net, &zone, &m);
            markings += 1;
            hits += want as usize;
            if got != want {
                mismatches += 1;
            }
        }
    }
    Outcome::new(
        mismatches == 0,
        format!("{pairs} (net, zone) pairs, {markings} markings ({hits} in Pre), {mismatches} mismatches"),
    )
}

pub fn untimed_engine(wanted: usize) -> Outcome {
    let mut rng = rng(33);
    let (mut eligible, mut attempts, mut mismatches, mut reachable) = (0, 0, 0, 0);
    while eligible < wanted && attempts < 100 * wanted {
        attempts += 1;
        let vnet = VectorNet::random(&mut rng);
        let init = random_counts(&mut rng, vnet.places, 3);
        let mut target = random_counts(&mut rng, vnet.places, 3);
        if target.iter().all(|&t| t == 0) {
            target[0] = 1;
        }
        let Some(want) = bfs_covers(&vnet, &init, &target, 6) else {
            continue;
        };
        eligible += 1;
        let got = engine_covers(&vnet, &init, &target);
        reachable += want as usize;
        if got != want {
            mismatches += 1;
        }
    }
    Outcome::new(
        mismatches == 0 && eligible >= wanted,
        format!("{eligible} bounded nets of {attempts} drawn ({reachable} coverable), {mismatches} mismatches"),
    )
}

pub fn lcs_engine(wanted: usize) -> Outcome {
    let mut rng = rng(34);
    let (mut conclusive, mut attempts, mut mismatches, mut reachable) = (0, 0, 0, 0);
    while conclusive < wanted && attempts < 100 * wanted {
        attempts += 1;
        let model = random_lcs(&mut rng);
        let init = LcsConstraint::new(0, vec![String::new()]);
        let target = LcsConstraint::new(
            rng.gen_range(0..model.states().len()),
            vec![random_word(&mut rng, &['a', 'b'], 2)],
        );
        let Some(want) = lcs_bfs(&model, &init, &target, 4) else {
            continue;
        };
        conclusive += 1;
        reachable += want as usize;
        let system = LcsSystem::new(model);
        let problem = ReachabilityProblem {
            system: &system,
            targets: vec![target],
            init: &init,
        };
        let got = backward_reach(&problem, Limits::default()).unwrap().verdict == Verdict::Reachable;
        if got != want {
            mismatches += 1;
        }
    }
    Outcome::new(
        mismatches == 0 && conclusive >= wanted,
        format!("{conclusive} conclusive of {attempts} ({reachable} reachable), {mismatches} mismatches"),
    )
}

pub fn sparser_entailment(pairs: usize) -> Outcome {
    let mut rng = rng(35);
    let (mut mismatches, mut positive) = (0, 0);
    for _ in 0..pairs {
        let vars = rng.gen_range(1..=3);
        let cmin = rng.gen_range(-2..=3);
        let cmax = cmin + rng.gen_range(0..=2);
        let (lo, hi) = (cmin - 2, cmax + 4);
        let consts = ConstRange::new(cmin, cmax).unwrap();
        let v1: Vec<i64> = (0..vars).map(|_| rng.gen_range(lo..=hi)).collect();
        let v2: Vec<i64> = if rng.gen_bool(0.5) {
            // stretch the gaps of v1 to bias towards entailment
            let mut v: Vec<(i64, usize)> = v1.iter().copied().zip(0..).collect();
            v.sort();
            let mut out = vec![0; vars];
            let mut shift = 0;
            for (x, k) in v {
                if x > cmax {
                    shift += rng.gen_range(0..=1);
                }
                out[k] = (x + shift).min(hi);
            }
            out
        } else {
            (0..vars).map(|_| rng.gen_range(lo..=hi)).collect()
        };
        let want = int_grid(vars, lo, hi).iter().all(|g| {
            !sparser_member(g, &v2, cmin..=cmax) || sparser_member(g, &v1, cmin..=cmax)
        });
        positive += want as usize;
        let got = s1_entails(&S1Constraint::new(v1, consts), &S1Constraint::new(v2, consts)).unwrap();
        if got != want {
            mismatches += 1;
        }
    }
    Outcome::new(
        mismatches == 0,
        format!("{pairs} pairs ({positive} entailed), {mismatches} mismatches"),
    )
}

// ------------------------------------------------------------ criterion 4

fn all_words(letters: &[char], max_len: usize) -> Vec<Vec<char>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<char>| {
                letters.iter().map(move |&c| {
                    let mut w = w.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn embeds_exhaustive<T>(u: &[T], v: &[T], leq: &impl Fn(&T, &T) -> bool) -> bool {
    match u.split_first() {
        None => true,
        Some((a, rest)) => (0..v.len()).any(|k| leq(a, &v[k]) && embeds_exhaustive(rest, &v[k + 1..], leq)),
    }
}

fn injects_exhaustive<T>(u: &[T], v: &[T], used: &mut Vec<bool>, leq: &impl Fn(&T, &T) -> bool) -> bool {
    match u.split_first() {
        None => true,
        Some((a, rest)) => (0..v.len()).any(|k| {
            if used[k] || !leq(a, &v[k]) {
                return false;
            }
            used[k] = true;
            let ok = injects_exhaustive(rest, v, used, leq);
            used[k] = false;
            ok
        }),
    }
}

pub fn orderings() -> Outcome {
    let mut bad = Vec::new();

    let words = all_words(&['a', 'b', 'c'], 6);
    let eq = |a: &char, b: &char| a == b;
    let chain = |a: &char, b: &char| a <= b;
    let mut word_pairs = 0usize;
    for u in &words {
        for v in &words {
            word_pairs += 1;
            if qo::word_embeds(u, v, eq) != embeds_exhaustive(u, v, &eq)
                || qo::word_embeds(u, v, chain) != embeds_exhaustive(u, v, &chain)
            {
                bad.push("word embedding");
            }
        }
    }

    // multisets over {0,1}^2 under the componentwise order
    let elems = [(0u8, 0u8), (0, 1), (1, 0), (1, 1)];
    let mut multisets: Vec<Vec<(u8, u8)>> = vec![vec![]];
    let mut layer: Vec<(Vec<(u8, u8)>, usize)> = vec![(vec![], 0)];
    for _ in 0..6 {
        let mut next = Vec::new();
        for (m, from) in &layer {
            for k in *from..elems.len() {
                let mut m2 = m.clone();
                m2.push(elems[k]);
                multisets.push(m2.clone());
                next.push((m2, k));
            }
        }
        layer = next;
    }
    let leq = |a: &(u8, u8), b: &(u8, u8)| a.0 <= b.0 && a.1 <= b.1;
    let mut ms_pairs = 0usize;
    for u in &multisets {
        for v in &multisets {
            ms_pairs += 1;
            let mut used = vec![false; v.len()];
            if qo::multiset_embeds(u, v, leq) != injects_exhaustive(u, v, &mut used, &leq) {
                bad.push("multiset embedding");
            }
        }
    }

    for i in 1..=30 {
        for j in i + 1..=30 {
            if qo::rado_entails(&RadoConstraint::Psi(i), &RadoConstraint::Psi(j)) {
                bad.push("Rado antichain");
            }
        }
    }

    for (n, fact) in [(2, 2), (3, 6), (4, 24)] {
        let e = ['a', 'b', 'c', 'd'][..n]
            .iter()
            .map(|&c| L2Expr::Atom(c))
            .reduce(L2Expr::and)
            .unwrap();
        if normalize_expr(&e).len() != fact {
            bad.push("conjunction sizes");
        }
    }

    bad.dedup();
    Outcome::new(
        bad.is_empty(),
        format!(
            "{word_pairs} word pairs, {ms_pairs} multiset pairs, Rado psi_1..psi_30, n! sizes; failing: {}",
            if bad.is_empty() { "none".to_string() } else { bad.join(", ") }
        ),
    )
}

// ------------------------------------------------------------ criterion 5

pub fn invariants() -> Outcome {
    let mut rng = rng(51);
    let mut bad: Vec<&str> = Vec::new();

    for _ in 0..500 {
        let raw = random_zone(&mut rng, 3, 2, 3);
        let n = raw.normalize();
        if n.normalize() != n {
            bad.push("normalize idempotent");
        }
        let m = raw.token_count();
        let same = int_grid(m, 0, 8).iter().all(|g| {
            let ages: Vec<i64> = std::iter::once(0).chain(g.iter().copied()).collect();
            dbm_holds(&raw, &ages, 2, m) == dbm_holds(&n, &ages, 2, m)
        });
        if !same {
            bad.push("normalize preserves denotation");
        }
        if !n.is_consistent() {
            continue;
        }
        let p = n.pre_time().unwrap().normalize();
        if p.pre_time().unwrap().normalize() != p {
            bad.push("pre_time idempotent");
        }
        if entails(&p, &n) != Ok(true) {
            bad.push("pre_time entails its input");
        }
    }

    for _ in 0..200 {
        let zones: Vec<ExistentialZone> = (0..8).map(|_| random_normal_zone(&mut rng, 2, 2, 2)).collect();
        let ent = |a: &ExistentialZone, b: &ExistentialZone| entails(a, b).unwrap();
        let min = qo::minimize_by_key(&zones, ent, |z| z.canonical_key());
        if !antichain(&min, ent) || !qo::set_dominates(&min, &zones, ent) {
            bad.push("zone minimization");
        }

        let vectors: Vec<Vec<u64>> = (0..8)
            .map(|_| (0..3).map(|_| rng.gen_range(0..=3)).collect())
            .collect();
        let vent = |a: &Vec<u64>, b: &Vec<u64>| qo::vector_leq(a, b);
        let min = qo::minimize(&vectors, vent);
        if !antichain(&min, vent) || !qo::set_dominates(&min, &vectors, vent) {
            bad.push("vector minimization");
        }

        let words: Vec<String> = (0..8).map(|_| random_word(&mut rng, &['a', 'b'], 4)).collect();
        let went = |a: &String, b: &String| wsts::lcs::subword(a, b);
        let min = minimize_words(words.clone());
        if !antichain(&min, went) || !qo::set_dominates(&min, &words, went) {
            bad.push("word minimization");
        }

        let configs: Vec<LcsConstraint> = (0..8)
            .map(|_| LcsConstraint::new(rng.gen_range(0..2), vec![random_word(&mut rng, &['a', 'b'], 3)]))
            .collect();
        let min = qo::minimize_by_key(&configs, lcs_entails, |c| c.canonical_key());
        if !antichain(&min, lcs_entails) || !qo::set_dominates(&min, &configs, lcs_entails) {
            bad.push("lcs minimization");
        }
    }

    if !deterministic() {
        bad.push("engine determinism");
    }

    bad.dedup();
    Outcome::new(
        bad.is_empty(),
        format!(
            "500 random zones, 800 minimized sets, repeated engine runs; failing: {}",
            if bad.is_empty() { "none".to_string() } else { bad.join(", ") }
        ),
    )
}

fn antichain<T>(items: &[T], entails: impl Fn(&T, &T) -> bool) -> bool {
    (0..items.len()).all(|i| (0..items.len()).all(|j| i == j || !entails(&items[i], &items[j])))
}

fn deterministic() -> bool {
    let run = || {
        let problem = ModelFile::Tpn(fischer_model(false)).compile().unwrap();
        let opts = CheckOptions {
            dump_fixpoint: true,
            ..CheckOptions::default()
        };
        check_problem(&problem, &opts).unwrap()
    };
    if run() != run() {
        return false;
    }
    let mut rng = rng(52);
    (0..20).all(|_| {
        let net = VectorNet::random(&mut rng).to_net();
        let target = ExistentialZone::unconstrained(vec![PlaceId(0), PlaceId(1)]);
        let system = ZoneSystem::new(net);
        let init = InitCondition::Marking(Marking::new(vec![Token {
            place: PlaceId(0),
            age: Age::from_integer(0),
        }]));
        let once = || {
            let problem = ReachabilityProblem {
                system: &system,
                targets: vec![target.clone()],
                init: &init,
            };
            let r = backward_reach(&problem, Limits::default()).unwrap();
            let keys: Vec<Vec<u8>> = r.fixpoint.iter().map(|z| z.canonical_key()).collect();
            (r.verdict, r.iterations, r.pre_calls, r.witness_trace, keys)
        };
        once() == once()
    })
}
