//! Definitional oracles shared by the integration tests.
#![allow(dead_code)]

use hcburger::word::{Symbol, ALPHABET};

/// One rewrite at position k of a burger followed by an order: cancel when the
/// order eats the burger, otherwise commute the pair.
pub fn rewrite(w: &[Symbol], k: usize) -> Option<Vec<Symbol>> {
    let (b, o) = (w[k], w[k + 1]);
    if !b.is_burger() || !o.is_order() {
        return None;
    }
    let mut out = w.to_vec();
    if o.eats(b) {
        out.drain(k..k + 2);
    } else {
        out.swap(k, k + 1);
    }
    Some(out)
}

pub fn naive_reduce(w: &[Symbol]) -> Vec<Symbol> {
    let mut cur = w.to_vec();
    while let Some(next) = (0..cur.len().saturating_sub(1)).find_map(|k| rewrite(&cur, k)) {
        cur = next;
    }
    cur
}

/// All words of the given length, in base-5 order.
pub fn all_words(len: usize) -> impl Iterator<Item = Vec<Symbol>> {
    (0..5usize.pow(len as u32)).map(move |mut code| {
        (0..len)
            .map(|_| {
                let s = ALPHABET[code % 5];
                code /= 5;
                s
            })
            .collect()
    })
}

/// Matches by the definition: each order takes the most recent burger it can
/// eat that nothing later has taken, found by scanning backwards.
pub fn quadratic_matches(x: &[Symbol]) -> Vec<Option<usize>> {
    let mut phi = vec![None; x.len()];
    for i in 0..x.len() {
        if !x[i].is_order() {
            continue;
        }
        if let Some(j) = (0..i).rev().find(|&j| x[j].is_burger() && phi[j].is_none() && x[i].eats(x[j])) {
            phi[i] = Some(j);
            phi[j] = Some(i);
        }
    }
    phi
}
