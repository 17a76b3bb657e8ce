//! Match functions, the resolved word Y, flexible-order records, forward
//! matches, ancestor-free times and the hitting-time statistics.

use crate::error::{Error, Result};
use crate::word::{BackwardReducer, Reducer, Symbol, Word};
use serde::{Serialize, Serializer};
use std::fmt;

/// A match index or the sentinel for a match outside the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Partner {
    At(i64),
    OutsideWindow,
}

impl Partner {
    pub fn index(self) -> Option<i64> {
        match self {
            Partner::At(i) => Some(i),
            Partner::OutsideWindow => None,
        }
    }
}

impl fmt::Display for Partner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Partner::At(i) => write!(f, "{i}"),
            Partner::OutsideWindow => f.write_str("outside"),
        }
    }
}

impl Serialize for Partner {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Partner::At(i) => s.serialize_i64(*i),
            Partner::OutsideWindow => s.serialize_str("outside"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchTable {
    pub start: i64,
    pub phi: Vec<Partner>,
}

impl MatchTable {
    #[inline]
    pub fn phi(&self, i: i64) -> Partner {
        self.phi[(i - self.start) as usize]
    }

    pub fn end(&self) -> i64 {
        self.start + self.phi.len() as i64 - 1
    }
}

pub fn compute_matches(w: &Word) -> MatchTable {
    let mut phi = vec![Partner::OutsideWindow; w.len()];
    let mut r = Reducer::new();
    for (k, &s) in w.symbols.iter().enumerate() {
        let i = w.start + k as i64;
        if let Some(j) = r.push(i, s) {
            phi[k] = Partner::At(j);
            phi[(j - w.start) as usize] = Partner::At(i);
        }
    }
    MatchTable { start: w.start, phi }
}

fn matched_order(w: &Word, mt: &MatchTable, i: i64) -> Result<i64> {
    if !w.contains(i) || !w.at(i).is_order() {
        return Err(Error::Precondition(format!("X_{i} is not an order in the window")));
    }
    mt.phi(i).index().ok_or(Error::Unmatched(i))
}

/// φ*(i) by a direct backward scan of (φ(i), i).
pub fn phi_star(w: &Word, mt: &MatchTable, i: i64) -> Result<Partner> {
    let j = matched_order(w, mt, i)?;
    for k in (j + 1..i).rev() {
        if w.at(k).is_order() {
            match mt.phi(k) {
                Partner::OutsideWindow => return Ok(Partner::OutsideWindow),
                Partner::At(m) if m < j => return Ok(Partner::At(m)),
                _ => {}
            }
        }
    }
    Ok(Partner::At(j))
}

/// Answers φ* queries in O(log n) after O(n) setup.
///
/// Each position carries a key: the match of a matched order, `i64::MIN` for
/// an order matched outside the window and `i64::MAX` for a burger. The
/// rightmost order of X(j, i) is the rightmost k in (j, i) with key < j.
pub struct PhiStarIndex {
    start: i64,
    size: usize,
    tree: Vec<i64>,
}

impl PhiStarIndex {
    pub fn new(w: &Word, mt: &MatchTable) -> Self {
        let n = w.len().max(1);
        let size = n.next_power_of_two();
        let mut tree = vec![i64::MAX; 2 * size];
        for (k, &s) in w.symbols.iter().enumerate() {
            if s.is_order() {
                tree[size + k] = mt.phi[k].index().unwrap_or(i64::MIN);
            }
        }
        for v in (1..size).rev() {
            tree[v] = tree[2 * v].min(tree[2 * v + 1]);
        }
        PhiStarIndex { start: w.start, size, tree }
    }

    /// Rightmost position in [l, r] (word indices) with key < x.
    pub fn rightmost_below(&self, l: i64, r: i64, x: i64) -> Option<i64> {
        if r < l {
            return None;
        }
        let (l, r) = ((l - self.start) as usize, (r - self.start) as usize);
        self.descend(1, 0, self.size - 1, l, r, x).map(|k| self.start + k as i64)
    }

    fn descend(&self, v: usize, lo: usize, hi: usize, l: usize, r: usize, x: i64) -> Option<usize> {
        if hi < l || lo > r || self.tree[v] >= x {
            return None;
        }
        if lo == hi {
            return Some(lo);
        }
        let mid = (lo + hi) / 2;
        self.descend(2 * v + 1, mid + 1, hi, l, r, x).or_else(|| self.descend(2 * v, lo, mid, l, r, x))
    }

    /// φ*(i) given j = φ(i).
    pub fn phi_star(&self, mt: &MatchTable, i: i64, j: i64) -> Partner {
        match self.rightmost_below(j + 1, i - 1, j) {
            None => Partner::At(j),
            Some(k) => mt.phi(k),
        }
    }
}

/// Y: each o_f takes the kind of the burger it consumes.
pub fn resolve_y(w: &Word, mt: &MatchTable) -> Result<Word> {
    let mut y = w.clone();
    for (k, s) in y.symbols.iter_mut().enumerate() {
        if *s == Symbol::OF {
            let i = w.start + k as i64;
            match mt.phi[k] {
                Partner::At(j) => *s = w.at(j).order_of(),
                Partner::OutsideWindow => return Err(Error::UnresolvedFlexible(i)),
            }
        }
    }
    Ok(y)
}

/// Y over the window of `w`, resolving o_f symbols matched before the window
/// by prepending X_{start-1}, X_{start-2}, ... from `left` (at most `cap`).
pub fn resolve_y_extended<I: Iterator<Item = Symbol>>(
    w: &Word,
    mt: &MatchTable,
    left: I,
    cap: u64,
) -> Result<Word> {
    let mut y = w.clone();
    let mut unresolved = 0usize;
    let mut pending = Vec::new();
    for (k, &s) in w.symbols.iter().enumerate() {
        let i = w.start + k as i64;
        if s.is_order() && mt.phi[k] == Partner::OutsideWindow {
            pending.push((i, s));
            if s == Symbol::OF {
                unresolved += 1;
            }
        } else if s == Symbol::OF {
            y.symbols[k] = w.at(mt.phi[k].index().unwrap()).order_of();
        }
    }
    if unresolved == 0 {
        return Ok(y);
    }
    let mut back = BackwardReducer::with_orders(&pending);
    for (step, s) in left.take(cap as usize).enumerate() {
        let idx = w.start - 1 - step as i64;
        if let Some(o) = back.push_left(idx, s).filter(|&o| o >= w.start) {
            let k = (o - w.start) as usize;
            if w.symbols[k] == Symbol::OF {
                y.symbols[k] = s.order_of();
                unresolved -= 1;
                if unresolved == 0 {
                    return Ok(y);
                }
            }
        }
    }
    let first = pending.iter().find(|&&(i, s)| s == Symbol::OF && y.at(i) == Symbol::OF).unwrap();
    Err(Error::UnresolvedFlexible(first.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Dir {
    Left,
    Right,
}

impl Dir {
    pub fn opposite(self) -> Dir {
        match self {
            Dir::Left => Dir::Right,
            Dir::Right => Dir::Left,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Dir::Left => "L",
            Dir::Right => "R",
        }
    }
}

/// A matched o_f time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FlexRecord {
    pub i: i64,
    pub phi: i64,
    pub phi_star: Partner,
    pub dir: Dir,
    /// |X(φ(i), i)|.
    pub len: u64,
    /// Set when X(φ(i), i) is empty, so the direction is not determined by the reduced word.
    pub degenerate: bool,
}

impl FlexRecord {
    pub fn area(&self) -> i64 {
        self.i - self.phi
    }

    pub fn boundary_len(&self) -> u64 {
        self.len + 1
    }
}

/// Per-window tables shared by the flexible-order, walk and loop routines.
pub struct FlexIndex {
    start: i64,
    /// Prefix sums of h- and c-increments of the resolved symbols (0 for unresolved o_f).
    ph: Vec<i64>,
    pc: Vec<i64>,
    pub stars: PhiStarIndex,
}

impl FlexIndex {
    pub fn new(w: &Word, mt: &MatchTable) -> Self {
        let mut ph = Vec::with_capacity(w.len() + 1);
        let mut pc = Vec::with_capacity(w.len() + 1);
        let (mut a, mut b) = (0i64, 0i64);
        ph.push(0);
        pc.push(0);
        for (k, &s) in w.symbols.iter().enumerate() {
            let s = match (s, mt.phi[k]) {
                (Symbol::OF, Partner::At(j)) => w.at(j).order_of(),
                (s, _) => s,
            };
            let (x, y) = s.step();
            a += x;
            b += y;
            ph.push(a);
            pc.push(b);
        }
        FlexIndex { start: w.start, ph, pc, stars: PhiStarIndex::new(w, mt) }
    }

    /// Net (h, c) increment of the resolved symbols over [a, b].
    pub fn delta(&self, a: i64, b: i64) -> (i64, i64) {
        let (l, r) = ((a - self.start) as usize, (b - self.start + 1) as usize);
        (self.ph[r] - self.ph[l], self.pc[r] - self.pc[l])
    }

    pub fn record(&self, w: &Word, mt: &MatchTable, i: i64) -> Option<FlexRecord> {
        if w.at(i) != Symbol::OF {
            return None;
        }
        let j = mt.phi(i).index()?;
        let dir = if w.at(j) == Symbol::BC { Dir::Left } else { Dir::Right };
        let (dh, dc) = self.delta(j, i);
        // X(j, i) holds only o_h (Left) or only o_c (Right) orders.
        let len = match dir {
            Dir::Left => -dh,
            Dir::Right => -dc,
        } as u64;
        Some(FlexRecord { i, phi: j, phi_star: self.stars.phi_star(mt, i, j), dir, len, degenerate: len == 0 })
    }
}

pub fn flex_records(w: &Word, mt: &MatchTable) -> Vec<FlexRecord> {
    let fx = FlexIndex::new(w, mt);
    (w.start..=w.end()).filter_map(|i| fx.record(w, mt, i)).collect()
}

/// |X(a, b)| by direct reduction.
pub fn reduced_len(w: &Word, a: i64, b: i64) -> usize {
    crate::word::reduce(&w.slice(a, b)).len()
}

/// φ̄(i): the smallest j ≥ i+1 with an order in X(i+1, j).
pub fn forward_match(w: &Word, i: i64) -> Result<Partner> {
    match w.get(i + 1) {
        Some(s) if s.is_burger() => {}
        _ => return Err(Error::Precondition(format!("X_{} is not a burger", i + 1))),
    }
    let mut r = Reducer::new();
    for j in i + 1..=w.end() {
        r.push(j, w.at(j));
        if !r.orders.is_empty() {
            return Ok(Partner::At(j));
        }
    }
    Ok(Partner::OutsideWindow)
}

/// Ancestor-free times in [lo, hi], with the window start playing index 1.
pub fn ancestor_free(w: &Word, lo: i64, hi: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut r = Reducer::new();
    for i in w.start..=w.end().min(hi) {
        r.push(i, w.at(i));
        if !r.orders.is_empty() {
            if i >= lo {
                out.push(i);
            }
            r.clear();
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
pub enum HitStat {
    J,
    #[serde(rename = "Jtilde")]
    JTilde,
    I,
    #[serde(rename = "KF")]
    KF,
    P,
}

impl HitStat {
    pub fn is_backward(self) -> bool {
        matches!(self, HitStat::J | HitStat::JTilde | HitStat::P)
    }

    pub fn name(self) -> &'static str {
        match self {
            HitStat::J => "J",
            HitStat::JTilde => "Jtilde",
            HitStat::I => "I",
            HitStat::KF => "KF",
            HitStat::P => "P",
        }
    }
}

impl std::str::FromStr for HitStat {
    type Err = Error;
    fn from_str(s: &str) -> Result<HitStat> {
        Ok(match s {
            "J" => HitStat::J,
            "Jtilde" | "J_tilde" => HitStat::JTilde,
            "I" => HitStat::I,
            "KF" | "K_F" => HitStat::KF,
            "P" => HitStat::P,
            _ => return Err(Error::Parse(format!("unknown statistic {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hit {
    At(u64),
    Censored(u64),
}

impl Hit {
    /// Whether the time exceeds `n` (a censored time exceeds every n ≤ cap).
    pub fn exceeds(self, n: u64) -> bool {
        match self {
            Hit::At(t) => t > n,
            Hit::Censored(_) => true,
        }
    }
}

/// Hitting time of `stat` read off a symbol stream.
///
/// Backward statistics read the stream as X_{-1}, X_{-2}, ...; forward ones
/// as X_1, X_2, ....
pub fn hitting_time<I: Iterator<Item = Symbol>>(stream: I, stat: HitStat, cap: u64) -> Hit {
    let mut bw = BackwardReducer::new();
    let mut fw = Reducer::new();
    for (k, s) in stream.take(cap as usize).enumerate() {
        let t = k as u64 + 1;
        let done = match stat {
            HitStat::J => {
                bw.push_left(-(t as i64), s);
                bw.has_burger()
            }
            HitStat::JTilde => {
                bw.push_left(-(t as i64), s);
                bw.flexible_count() == 0
            }
            HitStat::P => {
                bw.push_left(-(t as i64), s);
                bw.order_count() == 0
            }
            HitStat::I => {
                fw.push(t as i64, s);
                !fw.orders.is_empty()
            }
            HitStat::KF => {
                let m = fw.push(t as i64, s);
                s == Symbol::OF && m.is_none()
            }
        };
        if done {
            return Hit::At(t);
        }
    }
    Hit::Censored(cap)
}
