//! Command-line front end. Every stochastic command is a pure function of its
//! arguments and seed; replicas run on `--workers` threads and are gathered in
//! replica order.

use crate::continuum::{cone_event_probs, meander_density, meander_sample, sample_bm, unit_cov};
use crate::error::{Error, Result};
use crate::loops::root_loops;
use crate::mapbuild::{balanced_words, build_map, map_loops, sample_balanced, weight_check};
use crate::matching::{compute_matches, flex_records, resolve_y, HitStat};
use crate::params::{params_from_kappa, params_from_p, params_from_q, ModelParams};
use crate::parallel::{default_workers, run_replicas};
use crate::renewal::{
    age_fraction_ecdf, age_fractions, hit_prob_product, moment_mn, simulate_renewal, stat_sampler, tail_ratio_exponent, Lifetime,
    Pmf,
};
use crate::rng::{chacha, replica_rng, splitmix64_next};
use crate::stats::empirical_cov;
use crate::walk::build_walk;
use crate::word::{from_bytes, reduce, sample_word, to_bytes, Word};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::RngCore;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;

/// First three outputs of `replica_rng(0, 0)`, pinned so other
/// implementations of the generator can be checked bit for bit.
pub const REFERENCE_DRAWS: [u64; 3] = [0x21e7_cdc9_5391_71ba, 0x0c5b_e415_e0d5_25a3, 0xbe0e_74b5_2802_2af5];

/// First two outputs of SplitMix64 from state 0.
pub const SPLITMIX_DRAWS: [u64; 2] = [0xE220_A839_7B1D_CDAF, 0x6E78_9E6A_A1B9_65F4];

#[derive(Parser, Debug)]
#[command(name = "hcburger", version, about = "Hamburger-cheeseburger words, FK planar maps and their scaling limits")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Probability of a flexible order, in [0, 1/2).
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// FK cluster weight q in [0, 4).
    #[arg(long, global = true)]
    pub q: Option<f64>,
    /// SLE parameter kappa in (4, 8].
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// JSON file with default values for the options above and for n, samples, dt.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write X_a..X_b as an FKW1 file.
    Sample {
        /// Index range a:b.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Reduced word as JSON.
    Reduce(WordInput),
    /// Matched o_f records as CSV.
    Matches(WordInput),
    /// Walk (d, d*) of a resolved word as CSV.
    Walk {
        #[command(flatten)]
        input: WordInput,
        /// Index of the first step after time 0; the window start by default.
        #[arg(long, allow_hyphen_values = true)]
        origin: Option<i64>,
    },
    /// Root loops of many sampled windows X(-n, n) as CSV.
    Loops {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Build the map of a balanced word, export it and run the map checks.
    Map {
        #[command(flatten)]
        input: WordInput,
        /// Sample a balanced word of 2n symbols instead of reading one.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Tail survival estimates of a hitting time as CSV, plus a JSON summary on stdout.
    Tails {
        #[arg(long, value_enum)]
        stat: StatArg,
        /// Doubling thresholds lo:hi; 1024:16384 by default.
        #[arg(long)]
        thresholds: Option<String>,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Brownian motion estimates.
    Bm {
        #[command(subcommand)]
        what: BmCommand,
    },
    /// Renewal process reports.
    Renewal {
        #[command(subcommand)]
        what: RenewalCommand,
    },
    /// Pinned generator outputs and small enumeration oracles.
    Selftest,
}

#[derive(Args, Debug, Clone)]
pub struct WordInput {
    /// FKW1 word file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Word in letters H C h c F (burgers upper case).
    #[arg(long)]
    pub word: Option<String>,
    /// Index of the first letter of --word.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub start: i64,
}

#[derive(Subcommand, Debug)]
pub enum BmCommand {
    /// Empirical covariance of Z(horizon).
    Cov {
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// P(E_δ) and P(E'_δ) with log-log slopes.
    Cone {
        /// Comma-separated δ values.
        #[arg(long, default_value = "0.04,0.02,0.01")]
        deltas: String,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Mean endpoint of the quadrant meander.
    Meander {
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Meander density at time t and point z.
    Density {
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        /// Point u,v.
        #[arg(long)]
        z: String,
        #[arg(long)]
        samples: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum RenewalCommand {
    /// Exact check of the renewal product identity.
    Product {
        /// det:k or mix:num/den:k1:k2.
        #[arg(long)]
        lifetime: String,
        /// Comma-separated increasing indices.
        #[arg(long)]
        indices: String,
    },
    /// E[M_n^k] against n^{k(1-alpha)}, where P(Y >= n) ~ n^-(1-alpha).
    Moments {
        /// det:k, mix:p:k1:k2, pareto:alpha or word:STAT.
        #[arg(long)]
        lifetime: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Renewal exponent alpha for the bound.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        slack: f64,
    },
    /// KS distance of age/n to Beta(1 - alpha, alpha).
    Age {
        #[arg(long)]
        lifetime: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        alpha: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StatArg {
    #[value(name = "J")]
    J,
    #[value(name = "Jtilde")]
    JTilde,
    #[value(name = "I")]
    I,
    #[value(name = "KF")]
    KF,
    #[value(name = "P")]
    P,
}

impl From<StatArg> for HitStat {
    fn from(s: StatArg) -> HitStat {
        match s {
            StatArg::J => HitStat::J,
            StatArg::JTilde => HitStat::JTilde,
            StatArg::I => HitStat::I,
            StatArg::KF => HitStat::KF,
            StatArg::P => HitStat::P,
        }
    }
}

/// Values read from `--config`; command-line flags take precedence.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub kappa: Option<f64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub n: Option<u64>,
    pub samples: Option<u64>,
    pub dt: Option<f64>,
    pub thresholds: Option<String>,
    pub out: Option<PathBuf>,
}

struct Ctx {
    common: Common,
    config: RunConfig,
}

impl Ctx {
    fn params(&self) -> Result<ModelParams> {
        let p = self.common.p.or(self.config.p);
        let q = self.common.q.or(self.config.q);
        let kappa = self.common.kappa.or(self.config.kappa);
        match (p, q, kappa) {
            (Some(p), None, None) => params_from_p(p),
            (None, Some(q), None) => params_from_q(q),
            (None, None, Some(k)) => params_from_kappa(k),
            _ => Err(Error::Precondition("give exactly one of --p, --q, --kappa".into())),
        }
    }

    fn seed(&self) -> Result<u64> {
        self.common.seed.or(self.config.seed).ok_or_else(|| Error::Precondition("--seed is required".into()))
    }

    fn workers(&self) -> usize {
        self.common.workers.or(self.config.workers).unwrap_or_else(default_workers).max(1)
    }

    fn n(&self, flag: Option<u64>, default: u64) -> u64 {
        flag.or(self.config.n).unwrap_or(default)
    }

    fn samples(&self, flag: Option<u64>, default: u64) -> u64 {
        flag.or(self.config.samples).unwrap_or(default)
    }

    fn dt(&self, flag: Option<f64>) -> f64 {
        flag.or(self.config.dt).unwrap_or(1e-3)
    }

    fn provenance(&self, params: Option<&ModelParams>, seed: Option<u64>) -> Value {
        json!({
            "build": concat!("hcburger-", env!("CARGO_PKG_VERSION")),
            "params": params.map(|m| json!({"p": m.p, "q": m.q, "kappa": m.kappa, "mu": m.mu, "mu_prime": m.mu_prime})),
            "seed": seed,
        })
    }
}

fn parse_pair<T: std::str::FromStr>(s: &str, what: &str) -> Result<(T, T)> {
    let bad = || Error::Parse(format!("{what} must look like a:b, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad {what} entry {x:?}")))).collect()
}

fn parse_lifetime(s: &str, params: Option<&ModelParams>) -> Result<Lifetime> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |x: &str| x.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {x:?} in lifetime")));
    let int = |x: &str| x.parse::<u64>().map_err(|_| Error::Parse(format!("bad integer {x:?} in lifetime")));
    match parts.as_slice() {
        ["det", k] => Ok(Lifetime::Deterministic(int(k)?)),
        ["mix", p, k1, k2] => Ok(Lifetime::BernoulliMix { p1: num(p)?, k1: int(k1)?, k2: int(k2)? }),
        ["pareto", a] => Ok(Lifetime::ParetoInt(num(a)?)),
        ["word", stat] => {
            let stat = StatArg::from_str(stat, false).map_err(|_| Error::Parse(format!("unknown statistic {stat:?}")))?;
            let params = params.ok_or_else(|| Error::Precondition("word lifetimes need model parameters".into()))?;
            Ok(Lifetime::Word { params: *params, stat: stat.into() })
        }
        _ => Err(Error::Parse(format!("unknown lifetime {s:?}"))),
    }
}

fn parse_pmf(s: &str) -> Result<Pmf> {
    let parts: Vec<&str> = s.split(':').collect();
    let int = |x: &str| x.parse::<u64>().map_err(|_| Error::Parse(format!("bad integer {x:?} in lifetime")));
    match parts.as_slice() {
        ["det", k] => Ok(Pmf::deterministic(int(k)?)),
        ["mix", frac, k1, k2] => {
            let (a, b): (i64, i64) = frac
                .split_once('/')
                .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                .ok_or_else(|| Error::Parse(format!("probability {frac:?} must be num/den")))?;
            if b <= 0 || a < 0 || a > b {
                return Err(Error::Domain(format!("probability {frac} outside [0, 1]")));
            }
            Ok(Pmf::mix(a, b, int(k1)?, int(k2)?))
        }
        _ => Err(Error::Parse(format!("exact lifetimes are det:k or mix:num/den:k1:k2, got {s:?}"))),
    }
}

fn read_word(input: &WordInput) -> Result<Word> {
    match (&input.input, &input.word) {
        (Some(path), None) => from_bytes(&std::fs::read(path)?),
        (None, Some(w)) => Word::parse(input.start, w),
        _ => Err(Error::Precondition("give exactly one of --input, --word".into())),
    }
}

fn json_text(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s.into_bytes()
}

fn csv_text<R: AsRef<[u8]>>(header: &[&str], rows: impl IntoIterator<Item = Vec<R>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| Error::Resource(e.to_string()))
}

/// Main output and an optional extra block always written to stdout.
struct Output {
    main: Vec<u8>,
    summary: Option<Vec<u8>>,
}

impl From<Vec<u8>> for Output {
    fn from(main: Vec<u8>) -> Self {
        Output { main, summary: None }
    }
}

fn execute(cli: Cli) -> Result<Output> {
    let config = match &cli.common.config {
        Some(path) => serde_json::from_slice(&std::fs::read(path)?).map_err(|e| Error::Parse(format!("config: {e}")))?,
        None => RunConfig::default(),
    };
    let ctx = Ctx { common: cli.common, config };
    match cli.command {
        Command::Sample { range, stream } => {
            let (a, b) = parse_pair::<i64>(&range, "--range")?;
            if a > b {
                return Err(Error::Precondition(format!("empty range {range}")));
            }
            Ok(to_bytes(&sample_word(&ctx.params()?, a, b, ctx.seed()?, stream)?).into())
        }
        Command::Reduce(input) => {
            let r = reduce(&read_word(&input)?);
            Ok(json_text(&json!({"orders": r.orders, "burgers": r.burgers})).into())
        }
        Command::Matches(input) => {
            let w = read_word(&input)?;
            let recs = flex_records(&w, &compute_matches(&w));
            let rows = recs.iter().map(|r| {
                vec![r.i.to_string(), r.phi.to_string(), r.phi_star.to_string(), r.dir.name().to_string(), r.degenerate.to_string()]
            });
            Ok(csv_text(&["i", "phi", "phi_star", "dir", "degenerate"], rows)?.into())
        }
        Command::Walk { input, origin } => {
            let w = read_word(&input)?;
            let y = resolve_y(&w, &compute_matches(&w))?;
            let path = build_walk(&y, origin.unwrap_or(w.start))?;
            let rows = (path.tmin..=path.tmax()).map(|t| {
                let (d, ds) = path.at(t).unwrap();
                vec![t.to_string(), d.to_string(), ds.to_string()]
            });
            Ok(csv_text(&["t", "d", "d_star"], rows)?.into())
        }
        Command::Loops { n, samples } => loops_cmd(&ctx, ctx.n(n, 1000), ctx.samples(samples, 100)),
        Command::Map { input, n } => map_cmd(&ctx, &input, n),
        Command::Tails { stat, thresholds, samples } => {
            let params = ctx.params()?;
            let seed = ctx.seed()?;
            let thresholds = thresholds.or(ctx.config.thresholds.clone()).unwrap_or_else(|| "1024:16384".into());
            let (lo, hi) = parse_pair::<u64>(&thresholds, "--thresholds")?;
            if lo == 0 || hi < lo || !(hi / lo).is_power_of_two() || hi % lo != 0 {
                return Err(Error::Domain("thresholds lo:hi must differ by a power of two".into()));
            }
            let grid: Vec<u64> = std::iter::successors(Some(lo), |&t| (t < hi).then_some(2 * t)).collect();
            let n = ctx.samples(samples, 100_000);
            let stat: HitStat = stat.into();
            let est = tail_ratio_exponent(stat_sampler(&params, stat), &grid, n, seed, ctx.workers())?;
            let summary = json!({
                "stat": stat.name(),
                "alpha_hat": est.alpha_hat,
                "stderr": est.stderr,
                "censored": est.censored,
                "steps": est.rows,
                "provenance": ctx.provenance(Some(&params), Some(seed)),
            });
            Ok(Output { main: est.to_csv()?.into_bytes(), summary: Some(json_text(&summary)) })
        }
        Command::Bm { what } => bm_cmd(&ctx, what),
        Command::Renewal { what } => renewal_cmd(&ctx, what),
        Command::Selftest => selftest(),
    }
}

fn loops_cmd(ctx: &Ctx, n: u64, samples: u64) -> Result<Output> {
    let params = ctx.params()?;
    let seed = ctx.seed()?;
    let n = n as i64;
    let per = run_replicas(samples, seed, ctx.workers(), |r, _| -> Result<Vec<Vec<String>>> {
        let w = sample_word(&params, -n, n, seed, r)?;
        let mt = compute_matches(&w);
        let mut rows = Vec::new();
        for rep in root_loops(&w, &mt, 1)? {
            let e = &rep.entry;
            let opt = |x: Option<i64>| x.map(|v| v.to_string()).unwrap_or_default();
            let (full, interior, outer) = match &rep.stats {
                Some(s) => (s.full_area.to_string(), s.interior_area.to_string(), s.outer_boundary_len.to_string()),
                None => Default::default(),
            };
            rows.push(vec![
                r.to_string(),
                e.j.to_string(),
                e.dir.name().to_string(),
                e.iota.to_string(),
                opt(e.theta_tilde),
                opt(e.theta),
                e.truncated.to_string(),
                full,
                interior,
                outer,
            ]);
        }
        Ok(rows)
    });
    let mut rows = Vec::new();
    for r in per {
        rows.extend(r?);
    }
    let header = ["replica", "j", "dir", "iota", "theta_tilde", "theta", "truncated", "full_area", "interior_area", "outer_boundary_len"];
    Ok(csv_text(&header, rows)?.into())
}

fn map_cmd(ctx: &Ctx, input: &WordInput, n: Option<usize>) -> Result<Output> {
    let (w, params, seed) = match n {
        Some(n) => {
            let params = ctx.params()?;
            let seed = ctx.seed()?;
            (sample_balanced(&params, n, &mut chacha(seed), 100_000_000)?, Some(params), Some(seed))
        }
        None => (read_word(input)?, None, None),
    };
    let m = build_map(&w)?;
    let valid = m.validate();
    let ml = map_loops(&m);
    let v = json!({
        "word": w.compact(),
        "start": w.start,
        "map": serde_json::from_str::<Value>(&m.to_json()).expect("map json parses"),
        "checks": {
            "valid": valid.is_ok(),
            "error": valid.err().map(|e| e.to_string()),
            "vertices": m.num_primal(),
            "faces": m.num_dual(),
            "edges": m.num_edges(),
            "loops": ml.loops.len(),
            "primal_clusters": ml.primal_clusters,
            "dual_clusters": ml.dual_clusters,
            "loops_equal_clusters": ml.loops.len() == ml.primal_clusters + ml.dual_clusters - 1,
        },
        "provenance": ctx.provenance(params.as_ref(), seed),
    });
    Ok(json_text(&v).into())
}

fn bm_cmd(ctx: &Ctx, what: BmCommand) -> Result<Output> {
    let params = ctx.params()?;
    let seed = ctx.seed()?;
    let prov = ctx.provenance(Some(&params), Some(seed));
    let v = match what {
        BmCommand::Cov { horizon, dt, samples } => {
            let dt = ctx.dt(dt);
            let n = ctx.samples(samples, 10_000);
            let ends = run_replicas(n, seed, ctx.workers(), |_, s| sample_bm(&params, horizon, dt, s).map(|p| p.last()));
            let ends = ends.into_iter().collect::<Result<Vec<_>>>()?;
            let c = empirical_cov(&ends)?;
            let t = unit_cov(&params);
            let theory: Vec<Vec<f64>> = t.iter().map(|r| r.iter().map(|x| x * horizon).collect()).collect();
            json!({"covariance": c, "theory": theory, "samples": n, "dt": dt, "horizon": horizon, "provenance": prov})
        }
        BmCommand::Cone { deltas, dt, samples } => {
            let deltas: Vec<f64> = parse_list(&deltas, "delta")?;
            let dt = ctx.dt(dt);
            let est = cone_event_probs(&params, &deltas, dt, ctx.samples(samples, 100_000), seed, ctx.workers())?;
            let lx: Vec<f64> = est.iter().map(|e| e.delta.ln()).collect();
            let slope = |f: fn(&crate::continuum::ConeEstimate) -> f64| {
                (est.len() > 1).then(|| crate::stats::ls_slope(&lx, &est.iter().map(|e| f(e).ln()).collect::<Vec<_>>()))
            };
            json!({
                "estimates": est,
                "slope_e": slope(|e| e.p_e),
                "slope_eprime": slope(|e| e.p_eprime),
                "mu": params.mu,
                "mu_prime": params.mu_prime,
                "provenance": prov,
            })
        }
        BmCommand::Meander { dt, samples } => {
            let dt = ctx.dt(dt);
            let n = ctx.samples(samples, 1000);
            let ends = run_replicas(n, seed, ctx.workers(), |_, s| meander_sample(&params, dt, s, 1_000_000_000).map(|p| p.last()));
            let ends = ends.into_iter().collect::<Result<Vec<_>>>()?;
            let mean = |f: fn(&(f64, f64)) -> f64| ends.iter().map(f).sum::<f64>() / n as f64;
            json!({"mean_u": mean(|e| e.0), "mean_v": mean(|e| e.1), "samples": n, "dt": dt, "provenance": prov})
        }
        BmCommand::Density { t, z, samples } => {
            let z: Vec<f64> = parse_list(&z, "z")?;
            if z.len() != 2 {
                return Err(Error::Parse("--z takes u,v".into()));
            }
            let n = ctx.samples(samples, 10_000);
            let d = meander_density(&params, t, (z[0], z[1]), n, seed)?;
            json!({"t": t, "z": z, "density": d, "samples": n, "provenance": prov})
        }
    };
    Ok(json_text(&v).into())
}

fn rational_text(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn renewal_cmd(ctx: &Ctx, what: RenewalCommand) -> Result<Output> {
    let v = match what {
        RenewalCommand::Product { lifetime, indices } => {
            let pmf = parse_pmf(&lifetime)?;
            let idx: Vec<u64> = parse_list(&indices, "index")?;
            let c = hit_prob_product(&pmf, &idx)?;
            json!({"joint": rational_text(&c.joint), "product": rational_text(&c.product), "holds": c.holds()})
        }
        RenewalCommand::Moments { lifetime, n, samples, k, alpha, slack } => {
            let params = ctx.params().ok();
            let life = parse_lifetime(&lifetime, params.as_ref())?;
            let seed = ctx.seed()?;
            let n = ctx.n(n, 100_000);
            let traces = run_replicas(ctx.samples(samples, 1000), seed, ctx.workers(), |_, s| simulate_renewal(&life, n, s));
            let traces = traces.into_iter().collect::<Result<Vec<_>>>()?;
            let r = moment_mn(&traces, k, alpha, slack)?;
            json!({"report": r, "lifetime": lifetime, "provenance": ctx.provenance(params.as_ref(), Some(seed))})
        }
        RenewalCommand::Age { lifetime, n, samples, alpha } => {
            let params = ctx.params().ok();
            let life = parse_lifetime(&lifetime, params.as_ref())?;
            let seed = ctx.seed()?;
            let n = ctx.n(n, 100_000);
            let count = ctx.samples(samples, 1000);
            let f = age_fractions(&life, n, count, seed, ctx.workers())?;
            let r = age_fraction_ecdf(&f, alpha)?;
            json!({
                "ks": r.ks,
                "reference": format!("Beta({}, {})", 1.0 - alpha, alpha),
                "n": n,
                "samples": count,
                "lifetime": lifetime,
                "provenance": ctx.provenance(params.as_ref(), Some(seed)),
            })
        }
    };
    Ok(json_text(&v).into())
}

fn selftest() -> Result<Output> {
    let mut report = Vec::new();
    let mut ok = true;
    let mut check = |name: &str, pass: bool, detail: String| {
        ok &= pass;
        report.push(json!({"check": name, "pass": pass, "detail": detail}));
    };
    let mut st = 0u64;
    let sm = [splitmix64_next(&mut st), splitmix64_next(&mut st)];
    check("splitmix64 reference", sm == SPLITMIX_DRAWS, format!("{sm:016x?}"));
    let mut rng = replica_rng(0, 0);
    let draws = [rng.next_u64(), rng.next_u64(), rng.next_u64()];
    check("chacha8 reference draws", draws == REFERENCE_DRAWS, format!("{draws:016x?}"));
    let counts: Vec<usize> = (1..=4).map(|n| balanced_words(n).len()).collect();
    check("balanced word counts", counts == [4, 36, 432, 6048], format!("{counts:?}"));
    for (n, pn, pd) in [(1, 1, 3), (2, 1, 4), (3, 1, 3)] {
        let r = weight_check(n, pn, pd)?;
        check(&format!("weights n={n} p={pn}/{pd}"), r.ok, format!("rooted maps {}", r.rooted_maps));
    }
    let r = reduce(&Word::parse(1, "HChFHc")?);
    check("displayed reduction", r.orders.len() == 1 && r.burgers.len() == 1, format!("{r:?}"));
    let v = json!({"ok": ok, "checks": report});
    if ok {
        Ok(json_text(&v).into())
    } else {
        Err(Error::Domain(format!("selftest failed: {v}")))
    }
}

/// Parses `argv` (program name first), runs the command and writes its output
/// to `--out` or `stdout`. Returns the exit code: 0 on success, 1 for domain
/// or runtime errors, 2 for usage errors.
pub fn run<W: Write, E: Write>(argv: &[String], stdout: &mut W, stderr: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let out_path = cli.common.out.clone();
    let config_out = cli.common.config.as_ref().and_then(|p| {
        let c: RunConfig = serde_json::from_slice(&std::fs::read(p).ok()?).ok()?;
        c.out
    });
    let out_path = out_path.or(config_out);
    let usage = |e: &Error| matches!(e, Error::Precondition(_) | Error::Parse(_));
    match execute(cli) {
        Ok(out) => {
            let written = match &out_path {
                Some(p) => std::fs::write(p, &out.main),
                None => stdout.write_all(&out.main),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 1;
            }
            if let Some(s) = out.summary {
                let _ = stdout.write_all(&s);
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if usage(&e) {
                2
            } else {
                1
            }
        }
    }
}
