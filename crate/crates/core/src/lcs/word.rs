use std::collections::HashMap;

use crate::qo;

/// `u ⪯_w v`: `u` is a (not necessarily contiguous) subsequence of `v`.
pub fn subword(u: &str, v: &str) -> bool {
    let u: Vec<char> = u.chars().collect();
    let v: Vec<char> = v.chars().collect();
    qo::word_embeds(&u, &v, |a, b| a == b)
}

/// Orders words by length, then lexicographically.
pub fn word_order(a: &String, b: &String) -> std::cmp::Ordering {
    a.chars()
        .count()
        .cmp(&b.chars().count())
        .then_with(|| a.cmp(b))
}

/// Minimal elements under the subword order, deduplicated and sorted by
/// [`word_order`].
pub fn minimize_words(words: Vec<String>) -> Vec<String> {
    let mut words = words;
    words.sort_by(word_order);
    words.dedup();
    // shorter words come first, so a word is dropped iff an earlier one embeds
    let mut out: Vec<String> = Vec::new();
    for w in words {
        if !out.iter().any(|m| subword(m, &w)) {
            out.push(w);
        }
    }
    out
}

/// All minimal words containing both `u` and `v` as subwords.
pub fn minimal_common_supersequences(u: &str, v: &str) -> Vec<String> {
    let u: Vec<char> = u.chars().collect();
    let v: Vec<char> = v.chars().collect();
    let mut memo = HashMap::new();
    merges(&u, &v, 0, 0, &mut memo)
}

// Minimal merges of u[i..] and v[j..]. Minimizing suffixes is safe: a
// prefix followed by a strictly smaller suffix is strictly smaller.
fn merges(
    u: &[char],
    v: &[char],
    i: usize,
    j: usize,
    memo: &mut HashMap<(usize, usize), Vec<String>>,
) -> Vec<String> {
    if let Some(hit) = memo.get(&(i, j)) {
        return hit.clone();
    }
    let out = if i == u.len() {
        vec![v[j..].iter().collect()]
    } else if j == v.len() {
        vec![u[i..].iter().collect()]
    } else {
        let mut all = Vec::new();
        let mut prefix = |c: char, rest: Vec<String>| {
            all.extend(rest.into_iter().map(|w| format!("{c}{w}")));
        };
        if u[i] == v[j] {
            prefix(u[i], merges(u, v, i + 1, j + 1, memo));
        }
        prefix(u[i], merges(u, v, i + 1, j, memo));
        prefix(v[j], merges(u, v, i, j + 1, memo));
        minimize_words(all)
    };
    memo.insert((i, j), out.clone());
    out
}
