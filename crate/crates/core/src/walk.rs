//! The lattice walk D = (d, d*), its rescaling Z^n and π/2-cone times.

use crate::error::{Error, Result};
use crate::matching::{Dir, FlexIndex, FlexRecord, MatchTable, Partner};
use crate::params::ModelParams;
use crate::rng::{replica_seed, SymbolStream};
use crate::word::{BackwardReducer, Reducer, Symbol, Word};
use serde::Serialize;

/// D on the integer times `tmin ..= tmin + len - 1`, with D(0) = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkPath {
    pub tmin: i64,
    pub d: Vec<i64>,
    pub d_star: Vec<i64>,
}

impl WalkPath {
    pub fn tmax(&self) -> i64 {
        self.tmin + self.d.len() as i64 - 1
    }

    pub fn at(&self, t: i64) -> Option<(i64, i64)> {
        if t < self.tmin || t > self.tmax() {
            return None;
        }
        let k = (t - self.tmin) as usize;
        Some((self.d[k], self.d_star[k]))
    }

    /// Z^n sampled at the integer times, as a grid path with dt = 1/n.
    pub fn to_grid(&self, n: u64) -> GridPath {
        let s = (n as f64).sqrt().recip();
        GridPath {
            t0: self.tmin as f64 / n as f64,
            dt: 1.0 / n as f64,
            u: self.d.iter().map(|&x| x as f64 * s).collect(),
            v: self.d_star.iter().map(|&x| x as f64 * s).collect(),
        }
    }
}

/// Walk of a resolved word. `origin` is the word index of the first step
/// after time 0, so X_origin moves D from time 0 to time 1 and X_{origin-1}
/// moves it from time -1 to time 0.
pub fn build_walk(y: &Word, origin: i64) -> Result<WalkPath> {
    if origin < y.start || origin > y.end() + 1 {
        return Err(Error::Range(format!("origin {origin} outside the window")));
    }
    if let Some(k) = y.symbols.iter().position(|&s| s == Symbol::OF) {
        return Err(Error::UnresolvedFlexible(y.start + k as i64));
    }
    let tmin = y.start - origin;
    let len = y.len() + 1;
    let mut d = vec![0i64; len];
    let mut d_star = vec![0i64; len];
    let zero = (origin - y.start) as usize;
    for k in zero..y.len() {
        let (a, b) = y.symbols[k].step();
        d[k + 1] = d[k] + a;
        d_star[k + 1] = d_star[k] + b;
    }
    for k in (0..zero).rev() {
        let (a, b) = y.symbols[k].step();
        d[k] = d[k + 1] - a;
        d_star[k] = d_star[k + 1] - b;
    }
    Ok(WalkPath { tmin, d, d_star })
}

/// Z^n(t) = n^{-1/2} D(nt), linearly interpolated.
pub fn rescaled_eval(path: &WalkPath, n: u64, t: f64) -> Result<(f64, f64)> {
    let x = n as f64 * t;
    let k = x.floor() as i64;
    let frac = x - k as f64;
    let lo = path.at(k).ok_or_else(|| Error::Range(format!("t = {t} outside the path")))?;
    let hi = if frac > 0.0 {
        path.at(k + 1).ok_or_else(|| Error::Range(format!("t = {t} outside the path")))?
    } else {
        lo
    };
    let s = (n as f64).sqrt().recip();
    let u = (lo.0 as f64 + frac * (hi.0 - lo.0) as f64) * s;
    let v = (lo.1 as f64 + frac * (hi.1 - lo.1) as f64) * s;
    Ok((u, v))
}

/// A flexible-order time viewed as a cone time of Z^n.
pub type ConeRecord = FlexRecord;

/// Matched o_f times with [φ(i), i] ⊂ [lo, hi], not nested inside another one.
pub fn maximal_f_times(w: &Word, mt: &MatchTable, lo: i64, hi: i64) -> Vec<ConeRecord> {
    let fx = FlexIndex::new(w, mt);
    maximal_in(w, mt, &fx, lo, hi)
}

pub(crate) fn maximal_in(w: &Word, mt: &MatchTable, fx: &FlexIndex, lo: i64, hi: i64) -> Vec<ConeRecord> {
    let mut stack: Vec<ConeRecord> = Vec::new();
    for i in lo.max(w.start)..=hi.min(w.end()) {
        if w.at(i) != Symbol::OF {
            continue;
        }
        let Some(rec) = fx.record(w, mt, i) else { continue };
        if rec.phi < lo {
            continue;
        }
        while stack.last().is_some_and(|r| r.phi > rec.phi) {
            stack.pop();
        }
        stack.push(rec);
    }
    stack
}

/// The smallest o_f time i ≥ an with i − φ(i) ≥ rn − 1.
pub fn stopping_iota(w: &Word, mt: &MatchTable, a: f64, r: f64, n: u64) -> Option<i64> {
    let lo = (a * n as f64).ceil() as i64;
    let need = r * n as f64 - 1.0;
    (lo.max(w.start)..=w.end()).find(|&i| {
        w.at(i) == Symbol::OF && matches!(mt.phi(i), Partner::At(j) if (i - j) as f64 >= need)
    })
}

/// A planar path sampled on a uniform grid, time of sample k = t0 + k·dt.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPath {
    pub t0: f64,
    pub dt: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl GridPath {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }
}

/// Result of a cone-time scan, in grid indices and times. Crossing times are
/// rounded up to the next grid point, which is exact for lattice walks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeHit {
    pub k: usize,
    pub t: f64,
    /// Last entrance index; 0 when the cone was never left inside the grid.
    pub kv: usize,
    pub v: f64,
    pub ku: Option<usize>,
    pub u: Option<f64>,
    pub dir: Option<Dir>,
}

/// For each k, the last m < k with x[m] < x[k].
pub fn previous_smaller(x: &[f64]) -> Vec<Option<usize>> {
    let mut out = Vec::with_capacity(x.len());
    let mut stack: Vec<usize> = Vec::new();
    for k in 0..x.len() {
        while stack.last().is_some_and(|&m| x[m] >= x[k]) {
            stack.pop();
        }
        out.push(stack.last().copied());
        stack.push(k);
    }
    out
}

/// Grid sample k is a weak π/2-cone time when the last step moved weakly
/// down in both coordinates.
pub fn is_weak_cone_index(p: &GridPath, k: usize) -> bool {
    k >= 1 && p.u[k - 1] >= p.u[k] && p.v[k - 1] >= p.v[k]
}

fn hit_at(p: &GridPath, k: usize, pu: Option<usize>, pv: Option<usize>) -> ConeHit {
    let m = match (pu, pv) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    let kv = m.map_or(0, |m| m + 1);
    let dir = match (pu, pv) {
        (Some(a), Some(b)) if a > b => Some(Dir::Right),
        (Some(a), Some(b)) if b > a => Some(Dir::Left),
        (Some(a), Some(_)) => {
            // Both coordinates re-enter during the same step; the later crossing binds.
            let fu = (p.u[k] - p.u[a]) / (p.u[a + 1] - p.u[a]);
            let fv = (p.v[k] - p.v[a]) / (p.v[a + 1] - p.v[a]);
            Some(if fu >= fv { Dir::Right } else { Dir::Left })
        }
        (Some(_), None) => Some(Dir::Right),
        (None, Some(_)) => Some(Dir::Left),
        (None, None) => None,
    };
    let ku = match (pu, pv) {
        (Some(a), Some(b)) => Some(a.min(b) + 1),
        _ => None,
    };
    ConeHit { k, t: p.time(k), kv, v: p.time(kv), ku, u: ku.map(|m| p.time(m)), dir }
}

/// First grid time t ≥ a that is a weak π/2-cone time with t − v ≥ r.
pub fn continuous_cone_scan(p: &GridPath, a: f64, r: f64) -> Option<ConeHit> {
    let pu = previous_smaller(&p.u);
    let pv = previous_smaller(&p.v);
    let eps = 1e-9 * p.dt;
    for k in 1..p.len() {
        if p.time(k) < a - eps || !is_weak_cone_index(p, k) {
            continue;
        }
        let h = hit_at(p, k, pu[k], pv[k]);
        if h.t - h.v >= r - eps {
            return Some(h);
        }
    }
    None
}

/// Cone data at a given grid index (None if k is not a weak cone time).
pub fn cone_at(p: &GridPath, k: usize) -> Option<ConeHit> {
    if !is_weak_cone_index(p, k) {
        return None;
    }
    let last_below = |x: &[f64]| (0..k).rev().find(|&m| x[m] < x[k]);
    Some(hit_at(p, k, last_below(&p.u), last_below(&p.v)))
}

/// Endpoint of Z^n read off a fresh word.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Endpoint {
    pub z: (f64, f64),
    /// Rejected attempts before this sample (conditioned sampling only).
    pub rejected: u64,
    /// o_f symbols still unresolved at the cap; each counts 1/2 toward both
    /// coordinates.
    pub unresolved: u64,
}

/// Seed of the stream X_0, X_{-1}, ... paired with the forward stream `seed`.
fn left_seed(seed: u64) -> u64 {
    replica_seed(seed, u64::MAX - 1)
}

fn unit_step(s: Symbol) -> (i64, i64) {
    match s {
        Symbol::BH => (1, 0),
        Symbol::BC => (0, 1),
        Symbol::OH => (-1, 0),
        Symbol::OC => (0, -1),
        Symbol::OF => (0, 0),
    }
}

/// Resolves the o_f symbols among `orders` (left to right) by prepending
/// symbols from `left`; returns their summed steps and the count left over.
fn resolve_from_left(orders: &[(i64, Symbol)], left: &mut SymbolStream, first: i64, cap: u64) -> ((i64, i64), u64) {
    let mut pending = orders.iter().filter(|&&(_, s)| s == Symbol::OF).count() as u64;
    if pending == 0 {
        return ((0, 0), 0);
    }
    let mut br = BackwardReducer::with_orders(orders);
    let (mut du, mut dv) = (0, 0);
    for k in 0..cap {
        let s = left.next().unwrap();
        let got = br.push_left(first - k as i64, s);
        if got.is_some_and(|i| i > first && is_flexible_at(orders, i)) {
            if s == Symbol::BH {
                du -= 1;
            } else {
                dv -= 1;
            }
            pending -= 1;
            if pending == 0 {
                break;
            }
        }
    }
    ((du, dv), pending)
}

fn is_flexible_at(orders: &[(i64, Symbol)], i: i64) -> bool {
    orders.binary_search_by_key(&i, |&(j, _)| j).is_ok_and(|k| orders[k].1 == Symbol::OF)
}

/// Z^n(1) for the word X(1, n). o_f symbols matched before time 1 are
/// resolved by reading X_0, X_{-1}, ... for at most `cap` symbols.
pub fn walk_endpoint(params: &ModelParams, n: u64, seed: u64, cap: u64) -> Endpoint {
    let mut red = Reducer::new();
    let mut kinds = Vec::with_capacity(n as usize);
    let (mut u, mut v) = (0i64, 0i64);
    for (k, s) in SymbolStream::new(params, seed).take(n as usize).enumerate() {
        kinds.push(s);
        let got = red.push(k as i64 + 1, s);
        let s = match (s, got) {
            (Symbol::OF, Some(b)) => kinds[b as usize - 1].order_of(),
            _ => s,
        };
        let (a, b) = unit_step(s);
        u += a;
        v += b;
    }
    let ((du, dv), unresolved) = resolve_from_left(&red.orders, &mut SymbolStream::new(params, left_seed(seed)), 0, cap);
    let half = unresolved as f64 / 2.0;
    let scale = (n as f64).sqrt();
    Endpoint { z: (((u + du) as f64 - half) / scale, ((v + dv) as f64 - half) / scale), rejected: 0, unresolved }
}

/// Event the word is conditioned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub enum Conditioning {
    /// X(-n, -1) has no burgers; the sample is Z^n(-1), the time reversal
    /// of Z^n at time 1.
    NoBurgers,
    /// X(1, n) has no orders; the sample is Z^n(1).
    NoOrders,
}

/// One sample of the conditioned endpoint by rejection, abandoning each
/// attempt as soon as the event fails.
pub fn conditioned_endpoint(
    params: &ModelParams,
    n: u64,
    cond: Conditioning,
    seed: u64,
    max_tries: u64,
    cap: u64,
) -> Result<Endpoint> {
    let mut stream = SymbolStream::new(params, seed);
    let scale = (n as f64).sqrt();
    let mut kinds = vec![Symbol::BH; n as usize];
    match cond {
        Conditioning::NoOrders => {
            let mut red = Reducer::new();
            'tries: for tries in 0..max_tries {
                red.clear();
                let (mut u, mut v) = (0i64, 0i64);
                for k in 0..n as usize {
                    let s = stream.next().unwrap();
                    kinds[k] = s;
                    let got = red.push(k as i64 + 1, s);
                    let s = match (s, got) {
                        (_, None) if s.is_order() => continue 'tries,
                        (Symbol::OF, Some(b)) => kinds[b as usize - 1].order_of(),
                        _ => s,
                    };
                    let (a, b) = unit_step(s);
                    u += a;
                    v += b;
                }
                return Ok(Endpoint { z: (u as f64 / scale, v as f64 / scale), rejected: tries, unresolved: 0 });
            }
        }
        Conditioning::NoBurgers => {
            let mut br = BackwardReducer::new();
            'tries: for tries in 0..max_tries {
                br.clear();
                let (mut u, mut v) = (0i64, 0i64);
                for k in 0..n as usize {
                    let s = stream.next().unwrap();
                    let before = br.of.len();
                    br.push_left(-(k as i64) - 1, s);
                    if br.has_burger() {
                        continue 'tries;
                    }
                    let (a, b) = unit_step(s);
                    u -= a;
                    v -= b;
                    if br.of.len() < before {
                        if s == Symbol::BH {
                            u += 1;
                        } else {
                            v += 1;
                        }
                    }
                }
                let orders = br.orders();
                let ((du, dv), unresolved) = resolve_from_left(&orders, &mut stream, -(n as i64) - 1, cap);
                let half = unresolved as f64 / 2.0;
                let z = (((u - du) as f64 + half) / scale, ((v - dv) as f64 + half) / scale);
                return Ok(Endpoint { z, rejected: tries, unresolved });
            }
        }
    }
    Err(Error::Exhausted(max_tries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::compute_matches;

    fn w(start: i64, s: &str) -> Word {
        Word::parse(start, s).unwrap()
    }

    #[test]
    fn walk_examples() {
        let p = build_walk(&w(1, "H"), 1).unwrap();
        assert_eq!(p.at(1), Some((1, 0)));
        let p = build_walk(&w(0, "C"), 1).unwrap();
        assert_eq!(p.at(-1), Some((0, -1)));
        assert_eq!(p.at(0), Some((0, 0)));
        let p = build_walk(&w(1, "HChc"), 1).unwrap();
        assert_eq!(p.at(4), Some((0, 0)));
        assert!(build_walk(&w(1, "HF"), 1).is_err());
    }

    #[test]
    fn rescaled_examples() {
        let p = WalkPath { tmin: 0, d: vec![0, 1, 2, 2, 0], d_star: vec![0; 5] };
        assert_eq!(rescaled_eval(&p, 4, 0.875).unwrap(), (0.5, 0.0));
        assert_eq!(rescaled_eval(&p, 4, 0.0).unwrap(), (0.0, 0.0));
        assert_eq!(rescaled_eval(&p, 4, 0.5).unwrap(), (1.0, 0.0));
        assert!(rescaled_eval(&p, 4, 2.0).is_err());
    }

    #[test]
    fn maximal_examples() {
        let x = w(1, "CChFF");
        let mt = compute_matches(&x);
        assert_eq!(mt.phi(5), Partner::At(1));
        assert_eq!(mt.phi(4), Partner::At(2));
        let m = maximal_f_times(&x, &mt, 1, 5);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].i, 5);
        let m = maximal_f_times(&x, &mt, 2, 5);
        assert_eq!(m.iter().map(|r| r.i).collect::<Vec<_>>(), vec![4]);
        assert!(maximal_f_times(&x, &mt, 1, 3).is_empty());
    }

    #[test]
    fn iota_examples() {
        let x = w(1, "ChhhhhhhhhF");
        let mt = compute_matches(&x);
        assert_eq!(stopping_iota(&x, &mt, 0.0, 9.0, 1), Some(11));
        assert_eq!(stopping_iota(&x, &mt, 0.0, 12.0, 1), None);
        let x = w(1, "ChhFChhF");
        let mt = compute_matches(&x);
        assert_eq!(stopping_iota(&x, &mt, 0.0, 3.0, 1), Some(4));
        assert_eq!(stopping_iota(&x, &mt, 5.0, 3.0, 1), Some(8));
    }

    #[test]
    fn scan_monotone_descent() {
        // Far below before a = 3, then moving down-left forever.
        let mut u = vec![-100.0, -100.0, -100.0];
        let mut v = u.clone();
        for k in 0..20 {
            u.push(-(k as f64) * 0.1);
            v.push(-(k as f64) * 0.1);
        }
        let g = GridPath { t0: 0.0, dt: 1.0, u, v };
        let h = continuous_cone_scan(&g, 3.0, 5.0).unwrap();
        assert_eq!((h.t, h.v), (8.0, 3.0));
    }

    #[test]
    fn scan_not_found() {
        // Strictly increasing in both coordinates: no step moves down.
        let g = GridPath { t0: 0.0, dt: 1.0, u: (0..50).map(|k| k as f64).collect(), v: (0..50).map(|k| k as f64).collect() };
        assert!(continuous_cone_scan(&g, 0.0, 1.0).is_none());
    }

    #[test]
    fn endpoint_matches_resolved_word() {
        use crate::matching::resolve_y_extended;
        let params = crate::params::params_from_p(0.4).unwrap();
        for seed in 0..200 {
            let n = 200;
            let e = walk_endpoint(&params, n, seed, 100_000);
            let x = Word::new(1, SymbolStream::new(&params, seed).take(n as usize).collect());
            let mt = compute_matches(&x);
            let left = SymbolStream::new(&params, left_seed(seed));
            match resolve_y_extended(&x, &mt, left, 100_000) {
                Ok(y) => {
                    let p = build_walk(&y, 1).unwrap();
                    let end = p.at(n as i64).unwrap();
                    let s = (n as f64).sqrt();
                    assert_eq!(e.unresolved, 0);
                    assert!((e.z.0 - end.0 as f64 / s).abs() < 1e-12 && (e.z.1 - end.1 as f64 / s).abs() < 1e-12);
                }
                Err(_) => assert!(e.unresolved > 0),
            }
        }
    }

    #[test]
    fn conditioned_endpoints_stay_in_quadrant() {
        let params = crate::params::params_from_p(1.0 / 3.0).unwrap();
        for cond in [Conditioning::NoBurgers, Conditioning::NoOrders] {
            for seed in 0..30 {
                let e = conditioned_endpoint(&params, 64, cond, seed, 1_000_000, 10_000).unwrap();
                assert!(e.z.0 >= 0.0 && e.z.1 >= 0.0, "{cond:?} {e:?}");
            }
        }
        assert_eq!(conditioned_endpoint(&params, 64, Conditioning::NoOrders, 1, 0, 10), Err(Error::Exhausted(0)));
    }
}
