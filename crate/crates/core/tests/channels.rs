use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use wsts::lcs::{
    expr_entails, lcs_entails, lcs_pre, minimal_common_supersequences, normalize_expr, subword, LcsConstraint,
    LcsOp, L2Expr,
};
use wsts_oracles::{random_lcs, random_word, rng};

fn is_subsequence(u: &[char], w: &[char]) -> bool {
    let mut it = w.iter();
    u.iter().all(|c| it.any(|d| d == c))
}

/// Structural membership, evaluated straight from the grammar.
fn holds(e: &L2Expr, w: &[char]) -> bool {
    match e {
        L2Expr::Atom(a) => w.contains(a),
        L2Expr::Or(x, y) => holds(x, w) || holds(y, w),
        L2Expr::And(x, y) => holds(x, w) && holds(y, w),
        L2Expr::Concat(x, y) => (0..=w.len()).any(|k| holds(x, &w[..k]) && holds(y, &w[k..])),
    }
}

fn words_upto(letters: &[char], n: usize) -> Vec<Vec<char>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<char>> = vec![vec![]];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| {
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

fn atoms(e: &L2Expr) -> usize {
    match e {
        L2Expr::Atom(_) => 1,
        L2Expr::Concat(x, y) | L2Expr::And(x, y) | L2Expr::Or(x, y) => atoms(x) + atoms(y),
    }
}

/// Expressions with at most six atoms, so every minimal word has length
/// at most six.
fn expr() -> impl Strategy<Value = L2Expr> {
    let leaf = prop::sample::select(vec!['a', 'b', 'c']).prop_map(L2Expr::Atom);
    leaf.prop_recursive(3, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| L2Expr::concat(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| L2Expr::and(x, y)),
            (inner.clone(), inner).prop_map(|(x, y)| L2Expr::or(x, y)),
        ]
    })
    .prop_filter("at most six atoms", |e| atoms(e) <= 6)
}

proptest! {
    #[test]
    fn normal_form_is_an_antichain_with_the_same_denotation(e in expr()) {
        let words: Vec<Vec<char>> = normalize_expr(&e).words().iter().map(|w| w.chars().collect()).collect();
        for (i, u) in words.iter().enumerate() {
            for (j, v) in words.iter().enumerate() {
                prop_assert!(i == j || !is_subsequence(u, v));
            }
        }
        for w in words_upto(&['a', 'b', 'c'], 6) {
            let up = words.iter().any(|u| is_subsequence(u, &w));
            prop_assert_eq!(up, holds(&e, &w), "{} on {:?}", e, w);
        }
    }

    #[test]
    fn entailment_matches_bounded_words(e1 in expr(), e2 in expr()) {
        let want = words_upto(&['a', 'b', 'c'], 6).iter().all(|w| !holds(&e2, w) || holds(&e1, w));
        prop_assert_eq!(expr_entails(&e1, &e2), want);
    }
}

#[test]
fn supersequences_match_brute_force() {
    let all = words_upto(&['a', 'b'], 8);
    let mut rng = rng(501);
    for _ in 0..150 {
        let u: Vec<char> = random_word(&mut rng, &['a', 'b'], 4).chars().collect();
        let v: Vec<char> = random_word(&mut rng, &['a', 'b'], 4).chars().collect();
        let common: Vec<&Vec<char>> = all
            .iter()
            .filter(|w| w.len() <= u.len() + v.len() && is_subsequence(&u, w) && is_subsequence(&v, w))
            .collect();
        let want: BTreeSet<String> = common
            .iter()
            .filter(|w| !common.iter().any(|x| x.len() < w.len() && is_subsequence(x, w)))
            .map(|w| w.iter().collect())
            .collect();
        let u: String = u.into_iter().collect();
        let v: String = v.into_iter().collect();
        let got: BTreeSet<String> = minimal_common_supersequences(&u, &v).into_iter().collect();
        assert_eq!(got, want, "{u} {v}");
    }
}

#[test]
fn pre_matches_one_step_search() {
    // c is in [[pre(phi)]] iff losing letters then taking one step lands in [[phi]]
    let mut rng = rng(502);
    let letters = ['a', 'b'];
    let contents = words_upto(&letters, 5);
    for _ in 0..100 {
        let model = random_lcs(&mut rng);
        let phi = LcsConstraint::new(
            rng.gen_range(0..model.states().len()),
            vec![random_word(&mut rng, &letters, 2)],
        );
        let target: Vec<char> = phi.words[0].chars().collect();
        let pre = lcs_pre(&phi, &model);
        for q in 0..model.states().len() {
            for w in &contents {
                let conf = LcsConstraint::new(q, vec![w.iter().collect()]);
                let got = pre.iter().any(|p| lcs_entails(p, &conf));
                let kept = contents.iter().filter(|k| is_subsequence(k, w));
                let want = kept.flat_map(|w| model.transitions().iter().filter(|t| t.from == q && t.to == phi.state).map(move |t| (w, t))).any(|(w, t)| {
                    let next: Option<Vec<char>> = match t.op {
                        LcsOp::Nop => Some(w.clone()),
                        LcsOp::Send { letter, .. } => Some(w.iter().copied().chain([letter]).collect()),
                        LcsOp::Recv { letter, .. } => w.split_first().filter(|(c, _)| **c == letter).map(|(_, r)| r.to_vec()),
                    };
                    next.is_some_and(|n| is_subsequence(&target, &n))
                });
                assert_eq!(got, want, "{:?} {:?} at q{q} with {:?}", model.transitions(), phi, w);
            }
        }
    }
}

#[test]
fn subword_order_is_transitive() {
    let mut rng = rng(503);
    for _ in 0..500 {
        let [u, v, w] = [0; 3].map(|_| random_word(&mut rng, &['a', 'b'], 5));
        assert!(subword(&u, &u));
        if subword(&u, &v) && subword(&v, &w) {
            assert!(subword(&u, &w));
        }
    }
}
