//! Renewal processes, heavy-tail estimators and the late/few flexible order
//! statistics of the word.

use crate::error::{Error, Result};
use crate::matching::{hitting_time, Hit, HitStat};
use crate::params::ModelParams;
use crate::parallel::run_replicas;
use crate::rng::{chacha, unit_f64, SymbolStream};
use crate::stats::{ks_distance, proportion, Ecdf};
use crate::word::{Reducer, Symbol};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Law of the iid lifetimes.
#[derive(Debug, Clone)]
pub enum Lifetime {
    Deterministic(u64),
    /// Value `k1` with probability `p1`, else `k2`.
    BernoulliMix { p1: f64, k1: u64, k2: u64 },
    /// Y = ceil(U^(-1/alpha)), so P(Y > n) = n^-alpha for integer n >= 1.
    ParetoInt(f64),
    /// Hitting time of a word statistic on a fresh stretch of the stream.
    Word { params: ModelParams, stat: HitStat },
}

impl Lifetime {
    fn check(&self) -> Result<()> {
        match *self {
            Lifetime::Deterministic(0) => Err(Error::Domain("lifetime must be positive".into())),
            Lifetime::BernoulliMix { p1, k1, k2 } if !(0.0..=1.0).contains(&p1) || k1 == 0 || k2 == 0 => {
                Err(Error::Domain("bad Bernoulli mixture".into()))
            }
            Lifetime::ParetoInt(a) if !(a > 0.0) => Err(Error::Domain(format!("Pareto exponent {a} must be positive"))),
            _ => Ok(()),
        }
    }
}

/// Draws one lifetime, or `None` if it exceeds `cap`.
fn draw(life: &Lifetime, rng: &mut ChaCha8Rng, stream: &mut Option<SymbolStream>, cap: u64) -> Option<u64> {
    let y = match life {
        Lifetime::Deterministic(k) => *k,
        Lifetime::BernoulliMix { p1, k1, k2 } => {
            if unit_f64(rng.next_u64()) < *p1 {
                *k1
            } else {
                *k2
            }
        }
        Lifetime::ParetoInt(a) => {
            let u = 1.0 - unit_f64(rng.next_u64());
            let y = u.powf(-1.0 / a).ceil();
            if y > cap as f64 {
                return None;
            }
            (y as u64).max(1)
        }
        Lifetime::Word { params, stat } => {
            let s = stream.get_or_insert_with(|| SymbolStream::from_rng(params, chacha(rng.next_u64())));
            match hitting_time(s.by_ref(), *stat, cap) {
                Hit::At(t) => t,
                Hit::Censored(_) => return None,
            }
        }
    };
    (y <= cap).then_some(y)
}

#[derive(Debug, Clone, Serialize)]
pub struct RenewalTrace {
    pub n: u64,
    /// Completed lifetimes Y_1..Y_{M_n}.
    pub lifetimes: Vec<u64>,
    /// Partial sums S_1..S_{M_n}.
    pub sums: Vec<u64>,
    /// Lower bound n - S_{M_n} + 1 on the censored lifetime Y_{M_n+1}.
    pub next_at_least: u64,
}

impl RenewalTrace {
    pub fn m_n(&self) -> u64 {
        self.sums.len() as u64
    }

    pub fn last_renewal(&self) -> u64 {
        self.sums.last().copied().unwrap_or(0)
    }

    pub fn age(&self) -> u64 {
        self.n - self.last_renewal()
    }

    pub fn age_fraction(&self) -> f64 {
        self.age() as f64 / self.n as f64
    }
}

/// Renewal process with the given lifetimes up to horizon `n`.
///
/// Word lifetimes are successive hitting times read off a single symbol
/// stream, so consecutive blocks are disjoint stretches of one iid word.
pub fn simulate_renewal(life: &Lifetime, n: u64, seed: u64) -> Result<RenewalTrace> {
    life.check()?;
    let mut rng = chacha(seed);
    let mut stream = None;
    let (mut lifetimes, mut sums) = (Vec::new(), Vec::new());
    let mut s = 0u64;
    while let Some(y) = draw(life, &mut rng, &mut stream, n - s) {
        s += y;
        lifetimes.push(y);
        sums.push(s);
    }
    Ok(RenewalTrace { n, lifetimes, sums, next_at_least: n - s + 1 })
}

/// Age n - S_{M_n} only, without storing the trace.
pub fn renewal_age(life: &Lifetime, n: u64, seed: u64) -> Result<u64> {
    life.check()?;
    let mut rng = chacha(seed);
    let mut stream = None;
    let mut s = 0u64;
    while let Some(y) = draw(life, &mut rng, &mut stream, n - s) {
        s += y;
    }
    Ok(n - s)
}

/// Finite lifetime law with exact probabilities.
#[derive(Debug, Clone)]
pub struct Pmf(pub Vec<(u64, BigRational)>);

impl Pmf {
    pub fn deterministic(k: u64) -> Pmf {
        Pmf(vec![(k, BigRational::one())])
    }

    /// `k1` with probability num/den, else `k2`.
    pub fn mix(num: i64, den: i64, k1: u64, k2: u64) -> Pmf {
        let p = BigRational::new(BigInt::from(num), BigInt::from(den));
        Pmf(vec![(k1, p.clone()), (k2, BigRational::one() - p)])
    }
}

#[derive(Debug, Clone)]
pub struct ProductCheck {
    /// P(E_{i_1} ∩ ... ∩ E_{i_k}) by enumeration of lifetime sequences.
    pub joint: BigRational,
    /// Product of P(E_{i_k - i_{k-1}}), each also by enumeration.
    pub product: BigRational,
}

impl ProductCheck {
    pub fn holds(&self) -> bool {
        self.joint == self.product
    }
}

/// Probability that every index in `hits` is a renewal time, by walking all
/// lifetime sequences until the partial sum passes the largest index.
fn enumerate_hits(pmf: &Pmf, hits: &[u64]) -> BigRational {
    fn go(pmf: &Pmf, hits: &[u64], s: u64, prob: BigRational, out: &mut BigRational) {
        match hits.first() {
            None => *out += prob,
            Some(&h) if s > h => {}
            Some(&h) if s == h => go(pmf, &hits[1..], s, prob, out),
            Some(_) => {
                for (k, p) in &pmf.0 {
                    if !p.is_zero() {
                        go(pmf, hits, s + k, &prob * p, out);
                    }
                }
            }
        }
    }
    let mut out = BigRational::zero();
    go(pmf, hits, 0, BigRational::one(), &mut out);
    out
}

/// Checks P(∩ E_{i_k}) = ∏ P(E_{i_k - i_{k-1}}) where E_i is the event that i
/// is a renewal time.
pub fn hit_prob_product(pmf: &Pmf, indices: &[u64]) -> Result<ProductCheck> {
    let support = pmf.0.iter().map(|(k, _)| *k).max().unwrap_or(0);
    if support > 5 || indices.iter().any(|&i| i > 12) {
        return Err(Error::Resource("enumeration limited to support <= 5 and indices <= 12".into()));
    }
    if pmf.0.iter().any(|(k, _)| *k == 0) {
        return Err(Error::Domain("lifetime must be positive".into()));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) || indices.first() == Some(&0) {
        return Err(Error::Domain("indices must be increasing and positive".into()));
    }
    let joint = enumerate_hits(pmf, indices);
    let mut product = BigRational::one();
    let mut prev = 0;
    for &i in indices {
        product *= enumerate_hits(pmf, &[i - prev]);
        prev = i;
    }
    Ok(ProductCheck { joint, product })
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub k: u32,
    pub n: u64,
    pub moment: f64,
    pub log_n_moment: f64,
    /// k(1 - alpha) + slack, when a tail exponent is known.
    pub bound: Option<f64>,
    pub within_bound: Option<bool>,
}

/// Empirical E[M_n^k] against the bound n^{k(1-alpha)}. Here `alpha` is the
/// renewal exponent: P(Y >= n) ~ n^-(1 - alpha), so ParetoInt(a) has alpha = 1 - a.
pub fn moment_mn(traces: &[RenewalTrace], k: u32, alpha: Option<f64>, slack: f64) -> Result<MomentReport> {
    let first = traces.first().ok_or_else(|| Error::Domain("no traces".into()))?;
    let n = first.n;
    let moment = traces.iter().map(|t| (t.m_n() as f64).powi(k as i32)).sum::<f64>() / traces.len() as f64;
    let log_n_moment = moment.ln() / (n as f64).ln();
    let bound = alpha.map(|a| k as f64 * (1.0 - a) + slack);
    Ok(MomentReport { k, n, moment, log_n_moment, bound, within_bound: bound.map(|b| log_n_moment <= b) })
}

/// CDF of Beta(a, b).
pub fn beta_cdf(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        statrs::function::beta::beta_reg(a, b, x)
    }
}

#[derive(Debug, Clone)]
pub struct AgeReport {
    pub ecdf: Ecdf,
    pub alpha: f64,
    /// KS distance to Beta(1 - alpha, alpha).
    pub ks: f64,
}

/// ECDF of age/n and its KS distance to the generalized arcsine law
/// Beta(1 - alpha, alpha).
pub fn age_fraction_ecdf(fractions: &[f64], alpha: f64) -> Result<AgeReport> {
    if fractions.is_empty() {
        return Err(Error::Domain("no traces".into()));
    }
    let ecdf = Ecdf::new(fractions);
    let ks = ks_distance(&ecdf, |x| beta_cdf(1.0 - alpha, alpha, x));
    Ok(AgeReport { ecdf, alpha, ks })
}

/// Age fractions of `count` independent renewal replicas.
pub fn age_fractions(life: &Lifetime, n: u64, count: u64, seed: u64, workers: usize) -> Result<Vec<f64>> {
    life.check()?;
    let ages = run_replicas(count, seed, workers, |_, s| renewal_age(life, n, s).unwrap());
    Ok(ages.into_iter().map(|a| a as f64 / n as f64).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct TailRow {
    pub threshold: u64,
    pub survivors: u64,
    pub n: u64,
    pub p_hat: f64,
    pub stderr: f64,
    /// -log2(p_hat(2t) / p_hat(t)) for the step ending at this threshold.
    pub alpha_hat_step: Option<f64>,
    pub alpha_stderr_step: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailEstimate {
    pub rows: Vec<TailRow>,
    pub alpha_hat: f64,
    pub stderr: f64,
    /// Samples still alive at the cap.
    pub censored: u64,
}

impl TailEstimate {
    pub fn steps(&self) -> Vec<(f64, f64)> {
        self.rows.iter().filter_map(|r| Some((r.alpha_hat_step?, r.alpha_stderr_step?))).collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["threshold", "survivors", "N", "p_hat", "stderr", "alpha_hat_step"])?;
        for r in &self.rows {
            w.write_record([
                r.threshold.to_string(),
                r.survivors.to_string(),
                r.n.to_string(),
                format!("{:.8e}", r.p_hat),
                format!("{:.8e}", r.stderr),
                r.alpha_hat_step.map(|a| format!("{a:.6}")).unwrap_or_default(),
            ])?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Resource(e.to_string()))?).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Tail estimate from censored samples; `values[k]` is the sample or any
/// value above the cap.
pub fn tail_from_samples(values: &[u64], thresholds: &[u64]) -> Result<TailEstimate> {
    if thresholds.is_empty() || thresholds.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::Domain("thresholds must double".into()));
    }
    let n = values.len() as u64;
    if n == 0 {
        return Err(Error::Domain("no samples".into()));
    }
    let cap = 2 * thresholds[thresholds.len() - 1];
    let mut rows: Vec<TailRow> = Vec::new();
    for &t in thresholds {
        let survivors = values.iter().filter(|&&v| v > t).count() as u64;
        let (p_hat, stderr) = proportion(survivors, n);
        let (mut a, mut se) = (None, None);
        if let Some(prev) = rows.last() {
            if survivors > 0 {
                a = Some(-(p_hat / prev.p_hat).log2());
                se = Some((1.0 / survivors as f64 - 1.0 / prev.survivors as f64).max(0.0).sqrt() / std::f64::consts::LN_2);
            }
        }
        rows.push(TailRow { threshold: t, survivors, n, p_hat, stderr, alpha_hat_step: a, alpha_stderr_step: se });
    }
    let (mut num, mut den) = (0.0, 0.0);
    for r in &rows {
        if let (Some(a), Some(se)) = (r.alpha_hat_step, r.alpha_stderr_step) {
            if se > 0.0 {
                num += a / (se * se);
                den += 1.0 / (se * se);
            }
        }
    }
    if den == 0.0 {
        return Err(Error::Domain("too few survivors to estimate an exponent".into()));
    }
    let censored = values.iter().filter(|&&v| v > cap).count() as u64;
    Ok(TailEstimate { rows, alpha_hat: num / den, stderr: den.sqrt().recip(), censored })
}

/// Tail exponent of the law sampled by `sample(seed, cap)`, which returns the
/// sample or `cap + 1` when it exceeds the cap. The cap is twice the largest
/// threshold.
pub fn tail_ratio_exponent<F>(sample: F, thresholds: &[u64], n: u64, seed: u64, workers: usize) -> Result<TailEstimate>
where
    F: Fn(u64, u64) -> u64 + Sync,
{
    let cap = 2 * thresholds.last().copied().ok_or_else(|| Error::Domain("no thresholds".into()))?;
    let values = run_replicas(n, seed, workers, |_, s| sample(s, cap));
    tail_from_samples(&values, thresholds)
}

/// Sampler for [`tail_ratio_exponent`] drawing `stat` from a fresh word.
pub fn stat_sampler(params: &ModelParams, stat: HitStat) -> impl Fn(u64, u64) -> u64 + Sync + '_ {
    move |seed, cap| match hitting_time(SymbolStream::new(params, seed), stat, cap) {
        Hit::At(t) => t,
        Hit::Censored(_) => cap + 1,
    }
}

/// Sampler for [`tail_ratio_exponent`] drawing ParetoInt(alpha).
pub fn pareto_sampler(alpha: f64) -> impl Fn(u64, u64) -> u64 + Sync {
    move |seed, cap| {
        let u = 1.0 - unit_f64(chacha(seed).next_u64());
        let y = u.powf(-1.0 / alpha).ceil();
        if y > cap as f64 {
            cap + 1
        } else {
            y as u64
        }
    }
}

/// Flexible orders of X(1, n) left unmatched inside the window.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FlexScan {
    pub n: u64,
    /// Number of o_f symbols in the reduced word X(1, n).
    pub unmatched_f: u64,
    /// Largest i <= n with X_i = o_f and φ(i) <= 0.
    pub last_unmatched_f: Option<u64>,
}

pub fn flex_scan(params: &ModelParams, n: u64, seed: u64) -> FlexScan {
    let mut red = Reducer::new();
    let (mut count, mut last) = (0, None);
    for (k, s) in SymbolStream::new(params, seed).take(n as usize).enumerate() {
        let i = k as u64 + 1;
        if red.push(i as i64, s).is_none() && s == Symbol::OF {
            count += 1;
            last = Some(i);
        }
    }
    FlexScan { n, unmatched_f: count, last_unmatched_f: last }
}

pub fn flex_scans(params: &ModelParams, n: u64, count: u64, seed: u64, workers: usize) -> Vec<FlexScan> {
    run_replicas(count, seed, workers, |_, s| flex_scan(params, n, s))
}

/// Fraction of scans with more than n^nu unmatched flexible orders.
pub fn few_f_fraction(scans: &[FlexScan], nu: f64) -> (f64, f64) {
    let hits = scans.iter().filter(|s| s.unmatched_f as f64 > (s.n as f64).powf(nu)).count();
    proportion(hits as u64, scans.len() as u64)
}

/// Estimate of P(there is i in [floor(delta n), n] with X_i = o_f and φ(i) <= 0).
pub fn late_f_prob(scans: &[FlexScan], delta: f64) -> (f64, f64) {
    let hits = scans
        .iter()
        .filter(|s| s.last_unmatched_f.is_some_and(|i| i >= (delta * s.n as f64).floor() as u64))
        .count();
    proportion(hits as u64, scans.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::params_from_p;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn deterministic_traces() {
        let t = simulate_renewal(&Lifetime::Deterministic(2), 10, 1).unwrap();
        assert_eq!((t.m_n(), t.age()), (5, 0));
        let t = simulate_renewal(&Lifetime::Deterministic(3), 10, 1).unwrap();
        assert_eq!((t.m_n(), t.age()), (3, 1));
        assert_eq!(t.sums, vec![3, 6, 9]);
        assert!(simulate_renewal(&Lifetime::Deterministic(0), 10, 1).is_err());
    }

    #[test]
    fn trace_invariants() {
        for life in [Lifetime::ParetoInt(0.6), Lifetime::BernoulliMix { p1: 0.3, k1: 1, k2: 7 }] {
            for seed in 0..50 {
                let t = simulate_renewal(&life, 1000, seed).unwrap();
                assert!(t.sums.windows(2).all(|w| w[0] < w[1]));
                assert!(t.age() < t.next_at_least && t.age() <= t.n);
                assert_eq!(renewal_age(&life, 1000, seed).unwrap(), t.age());
            }
        }
    }

    #[test]
    fn product_examples() {
        let c = hit_prob_product(&Pmf::deterministic(2), &[2, 4]).unwrap();
        assert!(c.holds() && c.joint == rat(1, 1));
        let m = Pmf::mix(1, 2, 1, 2);
        let c = hit_prob_product(&m, &[1, 2]).unwrap();
        assert!(c.holds() && c.joint == rat(1, 4));
        let c = hit_prob_product(&m, &[2]).unwrap();
        assert!(c.holds() && c.joint == rat(3, 4));
        assert!(hit_prob_product(&Pmf::deterministic(6), &[6]).is_err());
        assert!(hit_prob_product(&m, &[13]).is_err());
    }

    #[test]
    fn product_identity_exhaustive() {
        let laws = [Pmf::mix(1, 3, 1, 3), Pmf::mix(2, 5, 2, 5), Pmf(vec![(1, rat(1, 6)), (2, rat(1, 2)), (4, rat(1, 3))])];
        for pmf in &laws {
            for mask in 1u32..(1 << 10) {
                let idx: Vec<u64> = (0..10).filter(|b| mask >> b & 1 == 1).map(|b| b as u64 + 1).collect();
                assert!(hit_prob_product(pmf, &idx).unwrap().holds(), "{idx:?}");
            }
        }
    }

    #[test]
    fn deterministic_moment_is_counting() {
        let traces: Vec<_> = (0..3).map(|s| simulate_renewal(&Lifetime::Deterministic(1), 1000, s).unwrap()).collect();
        let r = moment_mn(&traces, 1, None, 0.1).unwrap();
        assert_eq!(r.moment, 1000.0);
        assert!(r.within_bound.is_none());
    }

    #[test]
    fn pareto_tail_definition() {
        let p = pareto_sampler(0.6);
        let hits = (0..100_000u64).filter(|&s| p(s, 1 << 20) > 1000).count();
        let (ph, se) = proportion(hits as u64, 100_000);
        assert!((ph - 10f64.powf(-1.8)).abs() <= 3.0 * se, "{ph} {se}");
    }

    #[test]
    fn tail_rows_and_csv() {
        let values: Vec<u64> = (1..=1000).collect();
        let t = tail_from_samples(&values, &[100, 200, 400]).unwrap();
        assert_eq!(t.rows[0].survivors, 900);
        assert!(t.rows[0].alpha_hat_step.is_none());
        let csv = t.to_csv().unwrap();
        assert!(csv.starts_with("threshold,survivors,N,p_hat,stderr,alpha_hat_step\n"));
        assert_eq!(csv.lines().count(), 4);
        assert!(tail_from_samples(&values, &[100, 300]).is_err());
    }

    #[test]
    fn degenerate_age_law_is_rejected() {
        let f = age_fractions(&Lifetime::Deterministic(2), 100_000, 200, 3, 1).unwrap();
        assert!(age_fraction_ecdf(&f, 0.6).unwrap().ks > 0.3);
    }

    #[test]
    fn flex_scan_matches_reduction() {
        let params = params_from_p(0.4).unwrap();
        for seed in 0..40 {
            let s = flex_scan(&params, 300, seed);
            let w: Vec<Symbol> = SymbolStream::new(&params, seed).take(300).collect();
            let r = crate::word::reduce_symbols(&w);
            let f = r.symbols().iter().filter(|&&x| x == Symbol::OF).count() as u64;
            assert_eq!(s.unmatched_f, f);
            let fcount = |k: usize| crate::word::reduce_symbols(&w[..k]).symbols().iter().filter(|&&x| x == Symbol::OF).count();
            let last = (1..=300u64).rev().find(|&i| fcount(i as usize) > fcount(i as usize - 1));
            assert_eq!(s.last_unmatched_f, last);
        }
    }
}
