//! Reduction against a naive rewriting oracle, plus algebraic properties.

mod common;

use common::{all_words, naive_reduce, rewrite};
use hcburger::word::*;
use proptest::prelude::*;
use std::collections::{HashSet, VecDeque};

/// Every normal form reachable by any rewrite order.
fn all_normal_forms(w: &[Symbol]) -> HashSet<Vec<Symbol>> {
    let mut seen = HashSet::new();
    let mut out = HashSet::new();
    let mut queue = VecDeque::from([w.to_vec()]);
    while let Some(cur) = queue.pop_front() {
        if !seen.insert(cur.clone()) {
            continue;
        }
        let nexts: Vec<_> = (0..cur.len().saturating_sub(1)).filter_map(|k| rewrite(&cur, k)).collect();
        if nexts.is_empty() {
            out.insert(cur);
        }
        queue.extend(nexts);
    }
    out
}

fn symbols(max: usize) -> impl Strategy<Value = Vec<Symbol>> {
    prop::collection::vec(prop::sample::select(ALPHABET.to_vec()), 0..=max)
}

#[test]
fn rewriting_is_confluent_up_to_length_five() {
    for len in 0..=5 {
        for w in all_words(len) {
            let forms = all_normal_forms(&w);
            assert_eq!(forms.len(), 1, "{w:?}");
            assert_eq!(reduce_symbols(&w).symbols(), *forms.iter().next().unwrap());
        }
    }
}

#[test]
fn reduce_matches_rewriting_up_to_length_seven() {
    for len in 0..=7 {
        for w in all_words(len) {
            assert_eq!(reduce_symbols(&w).symbols(), naive_reduce(&w), "{w:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn homomorphism(x in symbols(40), y in symbols(40)) {
        let xy: Vec<Symbol> = x.iter().chain(y.iter()).copied().collect();
        prop_assert_eq!(reduce_symbols(&xy), reduce_concat(&reduce_symbols(&x), &reduce_symbols(&y)));
    }

    #[test]
    fn parity_length_and_shape(x in symbols(64)) {
        let r = reduce_symbols(&x);
        prop_assert_eq!(x.len() % 2, r.len() % 2);
        prop_assert!(r.len() <= x.len());
        prop_assert!(r.orders.iter().all(|s| s.is_order()));
        prop_assert!(r.burgers.iter().all(|s| s.is_burger()));
        prop_assert_eq!(reduce_symbols(&r.symbols()), r);
    }

    #[test]
    fn reverse_length_inequality(x in symbols(48)) {
        let n = x.len();
        let full = reduce_symbols(&x).len();
        for j in 1..=n {
            let tail = reduce_symbols(&x[j - 1..]).len();
            let head = reduce_symbols(&x[..j - 1]).len();
            prop_assert!(tail <= full + head);
        }
    }

    #[test]
    fn backward_reduction_agrees(x in symbols(80)) {
        let mut b = BackwardReducer::new();
        for (k, &s) in x.iter().enumerate().rev() {
            b.push_left(k as i64, s);
        }
        prop_assert_eq!(b.reduced(), reduce_symbols(&x));
    }

    #[test]
    fn fkw1_round_trip(x in symbols(100), start in -1000i64..1000) {
        let w = Word::new(start, x);
        prop_assert_eq!(from_bytes(&to_bytes(&w)).unwrap(), w);
    }

    #[test]
    fn counts_relation(x in symbols(64)) {
        let c = counts(&x);
        prop_assert_eq!(c.total() as usize, x.len());
        let (mut d, mut ds) = (0i64, 0i64);
        for s in &x {
            let (a, b) = s.step();
            d += a;
            ds += b;
        }
        if !x.contains(&Symbol::OF) {
            prop_assert_eq!((c.d, c.d_star), (d, ds));
        }
    }
}

#[test]
fn truncated_files_are_rejected() {
    let w = Word::parse(3, "HCcF").unwrap();
    let bytes = to_bytes(&w);
    assert!(from_bytes(&bytes[..bytes.len() - 1]).is_err());
    assert!(from_bytes(b"FKW2").is_err());
}
