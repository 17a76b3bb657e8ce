//! The alphabet, words, reduction and the FKW1 file format.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::rng::{replica_rng, SymbolSampler};
use rand::RngCore;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Symbol {
    #[serde(rename = "b_h")]
    BH = 0,
    #[serde(rename = "b_c")]
    BC = 1,
    #[serde(rename = "o_h")]
    OH = 2,
    #[serde(rename = "o_c")]
    OC = 3,
    #[serde(rename = "o_f")]
    OF = 4,
}

pub const ALPHABET: [Symbol; 5] = [Symbol::BH, Symbol::BC, Symbol::OH, Symbol::OC, Symbol::OF];

impl Symbol {
    pub fn from_u8(b: u8) -> Option<Symbol> {
        ALPHABET.get(b as usize).copied()
    }

    #[inline]
    pub fn is_burger(self) -> bool {
        (self as u8) < 2
    }

    #[inline]
    pub fn is_order(self) -> bool {
        (self as u8) >= 2
    }

    /// Whether order `self` may consume burger `b`.
    #[inline]
    pub fn eats(self, b: Symbol) -> bool {
        match self {
            Symbol::OH => b == Symbol::BH,
            Symbol::OC => b == Symbol::BC,
            Symbol::OF => b.is_burger(),
            _ => false,
        }
    }

    /// The order of the same kind as burger `self`.
    pub fn order_of(self) -> Symbol {
        match self {
            Symbol::BH => Symbol::OH,
            Symbol::BC => Symbol::OC,
            s => s,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::BH => "b_h",
            Symbol::BC => "b_c",
            Symbol::OH => "o_h",
            Symbol::OC => "o_c",
            Symbol::OF => "o_f",
        }
    }

    /// Increment of (d, d*) for a symbol of the resolved word.
    #[inline]
    pub fn step(self) -> (i64, i64) {
        match self {
            Symbol::BH => (1, 0),
            Symbol::BC => (0, 1),
            Symbol::OH => (-1, 0),
            Symbol::OC => (0, -1),
            Symbol::OF => (0, 0),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Symbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Symbol> {
        Ok(match s {
            "b_h" | "H" => Symbol::BH,
            "b_c" | "C" => Symbol::BC,
            "o_h" | "h" => Symbol::OH,
            "o_c" | "c" => Symbol::OC,
            "o_f" | "F" => Symbol::OF,
            _ => return Err(Error::Parse(format!("unknown symbol {s:?}"))),
        })
    }
}

/// X_a ... X_b for a finite window.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    pub start: i64,
    pub symbols: Vec<Symbol>,
}

impl Word {
    pub fn new(start: i64, symbols: Vec<Symbol>) -> Word {
        Word { start, symbols }
    }

    /// Parses a compact string: H C h c F for b_h b_c o_h o_c o_f.
    pub fn parse(start: i64, s: &str) -> Result<Word> {
        let symbols = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_string().parse())
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { start, symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Index of the last symbol (start - 1 when empty).
    pub fn end(&self) -> i64 {
        self.start + self.symbols.len() as i64 - 1
    }

    pub fn contains(&self, i: i64) -> bool {
        i >= self.start && i <= self.end()
    }

    #[inline]
    pub fn at(&self, i: i64) -> Symbol {
        self.symbols[(i - self.start) as usize]
    }

    pub fn get(&self, i: i64) -> Option<Symbol> {
        if self.contains(i) {
            Some(self.at(i))
        } else {
            None
        }
    }

    /// The sub-window X_a ... X_b (clipped to the word).
    pub fn slice(&self, a: i64, b: i64) -> Word {
        let a = a.max(self.start);
        let b = b.min(self.end());
        if b < a {
            return Word::new(a, Vec::new());
        }
        Word::new(a, self.symbols[(a - self.start) as usize..=(b - self.start) as usize].to_vec())
    }

    pub fn compact(&self) -> String {
        self.symbols
            .iter()
            .map(|s| match s {
                Symbol::BH => 'H',
                Symbol::BC => 'C',
                Symbol::OH => 'h',
                Symbol::OC => 'c',
                Symbol::OF => 'F',
            })
            .collect()
    }
}

/// Canonical form: unmatched orders, then the surviving burger stack.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedWord {
    pub orders: Vec<Symbol>,
    /// Bottom to top.
    pub burgers: Vec<Symbol>,
}

impl ReducedWord {
    pub fn len(&self) -> usize {
        self.orders.len() + self.burgers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty() && self.burgers.is_empty()
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        self.orders.iter().chain(self.burgers.iter()).copied().collect()
    }
}

/// Left-to-right stack machine over indexed symbols.
///
/// Burgers sit in two per-kind stacks of indices; the topmost burger overall
/// is whichever top carries the larger index.
#[derive(Debug, Clone, Default)]
pub struct Reducer {
    pub h: Vec<i64>,
    pub c: Vec<i64>,
    pub orders: Vec<(i64, Symbol)>,
}

impl Reducer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.h.clear();
        self.c.clear();
        self.orders.clear();
    }

    /// Feeds X_idx; returns the index of the burger it consumed, if any.
    #[inline]
    pub fn push(&mut self, idx: i64, s: Symbol) -> Option<i64> {
        let got = match s {
            Symbol::BH => {
                self.h.push(idx);
                return None;
            }
            Symbol::BC => {
                self.c.push(idx);
                return None;
            }
            Symbol::OH => self.h.pop(),
            Symbol::OC => self.c.pop(),
            Symbol::OF => match (self.h.last(), self.c.last()) {
                (Some(&a), Some(&b)) => {
                    if a > b {
                        self.h.pop()
                    } else {
                        self.c.pop()
                    }
                }
                (Some(_), None) => self.h.pop(),
                (None, Some(_)) => self.c.pop(),
                (None, None) => None,
            },
        };
        if got.is_none() {
            self.orders.push((idx, s));
        }
        got
    }

    pub fn has_burger(&self) -> bool {
        !self.h.is_empty() || !self.c.is_empty()
    }

    pub fn burger_count(&self) -> usize {
        self.h.len() + self.c.len()
    }

    /// Surviving burgers as (index, kind), bottom to top.
    pub fn burgers(&self) -> Vec<(i64, Symbol)> {
        let mut out = Vec::with_capacity(self.burger_count());
        let (mut a, mut b) = (0, 0);
        while a < self.h.len() || b < self.c.len() {
            if b == self.c.len() || (a < self.h.len() && self.h[a] < self.c[b]) {
                out.push((self.h[a], Symbol::BH));
                a += 1;
            } else {
                out.push((self.c[b], Symbol::BC));
                b += 1;
            }
        }
        out
    }

    pub fn reduced(&self) -> ReducedWord {
        ReducedWord {
            orders: self.orders.iter().map(|&(_, s)| s).collect(),
            burgers: self.burgers().into_iter().map(|(_, s)| s).collect(),
        }
    }
}

/// Reduction that grows by prepending symbols on the left.
///
/// Unmatched orders sit in three per-kind stacks (top = leftmost); a burger
/// prepended on the left is consumed by the leftmost order that may eat it.
#[derive(Debug, Clone, Default)]
pub struct BackwardReducer {
    pub oh: Vec<i64>,
    pub oc: Vec<i64>,
    pub of: Vec<i64>,
    /// Surviving burgers in prepend order (last = leftmost = bottom).
    pub burgers: Vec<(i64, Symbol)>,
}

impl BackwardReducer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.oh.clear();
        self.oc.clear();
        self.of.clear();
        self.burgers.clear();
    }

    /// Seeds the reducer with an order list given left to right.
    pub fn with_orders(orders: &[(i64, Symbol)]) -> Self {
        let mut r = Self::new();
        for &(i, s) in orders.iter().rev() {
            r.push_left(i, s);
        }
        r
    }

    /// Prepends X_idx; returns the index of the order it matched, if any.
    #[inline]
    pub fn push_left(&mut self, idx: i64, s: Symbol) -> Option<i64> {
        let own = match s {
            Symbol::OH => {
                self.oh.push(idx);
                return None;
            }
            Symbol::OC => {
                self.oc.push(idx);
                return None;
            }
            Symbol::OF => {
                self.of.push(idx);
                return None;
            }
            Symbol::BH => &mut self.oh,
            Symbol::BC => &mut self.oc,
        };
        let got = match (own.last(), self.of.last()) {
            (Some(&a), Some(&b)) => {
                if a < b {
                    own.pop()
                } else {
                    self.of.pop()
                }
            }
            (Some(_), None) => own.pop(),
            (None, Some(_)) => self.of.pop(),
            (None, None) => None,
        };
        if got.is_none() {
            self.burgers.push((idx, s));
        }
        got
    }

    pub fn order_count(&self) -> usize {
        self.oh.len() + self.oc.len() + self.of.len()
    }

    pub fn flexible_count(&self) -> usize {
        self.of.len()
    }

    pub fn has_burger(&self) -> bool {
        !self.burgers.is_empty()
    }

    /// Unmatched orders as (index, kind), left to right.
    pub fn orders(&self) -> Vec<(i64, Symbol)> {
        let mut out: Vec<(i64, Symbol)> = self
            .oh
            .iter()
            .map(|&i| (i, Symbol::OH))
            .chain(self.oc.iter().map(|&i| (i, Symbol::OC)))
            .chain(self.of.iter().map(|&i| (i, Symbol::OF)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn reduced(&self) -> ReducedWord {
        ReducedWord {
            orders: self.orders().into_iter().map(|(_, s)| s).collect(),
            burgers: self.burgers.iter().rev().map(|&(_, s)| s).collect(),
        }
    }
}

pub fn reduce(w: &Word) -> ReducedWord {
    reduce_symbols(&w.symbols)
}

pub fn reduce_symbols(symbols: &[Symbol]) -> ReducedWord {
    let mut r = Reducer::new();
    for (k, &s) in symbols.iter().enumerate() {
        r.push(k as i64, s);
    }
    r.reduced()
}

/// R(x y) from R(x) and R(y).
pub fn reduce_concat(r1: &ReducedWord, r2: &ReducedWord) -> ReducedWord {
    let mut r = Reducer::new();
    let mut k = 0i64;
    for &s in r1.burgers.iter().chain(r2.orders.iter()).chain(r2.burgers.iter()) {
        r.push(k, s);
        k += 1;
    }
    let mut out = r.reduced();
    let mut orders = r1.orders.clone();
    orders.extend(out.orders);
    out.orders = orders;
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountVector {
    /// Tallies of (b_h, b_c, o_h, o_c, o_f).
    pub n: [u64; 5],
    pub d: i64,
    pub d_star: i64,
}

impl CountVector {
    pub fn total(&self) -> u64 {
        self.n.iter().sum()
    }
}

pub fn counts(symbols: &[Symbol]) -> CountVector {
    let mut n = [0u64; 5];
    for &s in symbols {
        n[s as usize] += 1;
    }
    CountVector { n, d: n[0] as i64 - n[2] as i64, d_star: n[1] as i64 - n[3] as i64 }
}

pub fn counts_reduced(r: &ReducedWord) -> CountVector {
    counts(&r.symbols())
}

/// Samples X_a ... X_b. Symbol X_k is the (k - i64::MIN)-th output of the
/// replica generator, so overlapping windows of one (seed, stream) agree.
pub fn sample_word(params: &ModelParams, a: i64, b: i64, seed: u64, stream: u64) -> Result<Word> {
    if b < a {
        return Err(Error::Range(format!("empty range {a}:{b}")));
    }
    let mut rng = replica_rng(seed, stream);
    let offset = (a as i128 - i64::MIN as i128) as u128;
    rng.set_word_pos(2 * offset);
    let sampler = SymbolSampler::new(params);
    let n = (b - a + 1) as usize;
    let symbols = (0..n).map(|_| sampler.symbol(rng.next_u64())).collect();
    Ok(Word::new(a, symbols))
}

const MAGIC: &[u8; 4] = b"FKW1";

pub fn to_bytes(w: &Word) -> Vec<u8> {
    let mut out = Vec::with_capacity(20 + w.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&w.start.to_le_bytes());
    out.extend_from_slice(&(w.len() as u64).to_le_bytes());
    out.extend(w.symbols.iter().map(|&s| s as u8));
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<Word> {
    if bytes.len() < 20 || &bytes[0..4] != MAGIC {
        return Err(Error::Parse("missing FKW1 header".into()));
    }
    let start = i64::from_le_bytes(bytes[4..12].try_into().unwrap());
    let len = u64::from_le_bytes(bytes[12..20].try_into().unwrap());
    let payload = &bytes[20..];
    if payload.len() as u64 != len {
        return Err(Error::Parse(format!("payload has {} bytes, header says {len}", payload.len())));
    }
    let symbols = payload
        .iter()
        .map(|&b| Symbol::from_u8(b).ok_or_else(|| Error::Parse(format!("bad symbol byte {b}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Word::new(start, symbols))
}
