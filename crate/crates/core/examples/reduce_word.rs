//! Reduce a word and show the burger stack and unmatched orders.
//!
//! cargo run --example reduce_word -- HChFHc

use hcburger::word::{reduce, reduce_concat, Word};

fn main() -> hcburger::Result<()> {
    let letters = std::env::args().nth(1).unwrap_or_else(|| "HChFHc".to_string());
    let w = Word::parse(1, &letters)?;
    let r = reduce(&w);
    println!("word    {}", w.compact());
    println!("orders  {:?}", r.orders.iter().map(|s| s.name()).collect::<Vec<_>>());
    println!("burgers {:?}", r.burgers.iter().map(|s| s.name()).collect::<Vec<_>>());

    // Reduction is a monoid homomorphism: split anywhere and recombine.
    let mid = w.start + w.len() as i64 / 2;
    let left = reduce(&w.slice(w.start, mid - 1));
    let right = reduce(&w.slice(mid, w.end()));
    assert_eq!(reduce_concat(&left, &right), r);
    println!("split at {mid}: same reduced word");
    Ok(())
}
