//! Age of a renewal process against the generalized arcsine law, for Pareto
//! lifetimes and for the word renewal built from J~.
//!
//! cargo run --example renewal_age -- 2000

use hcburger::parallel::default_workers;
use hcburger::matching::HitStat;
use hcburger::params::params_from_p;
use hcburger::renewal::{age_fraction_ecdf, age_fractions, hit_prob_product, Lifetime, Pmf};

fn main() -> hcburger::Result<()> {
    let count: u64 = std::env::args().nth(1).map_or(2000, |s| s.parse().unwrap());
    let check = hit_prob_product(&Pmf::mix(1, 2, 1, 2), &[1, 2])?;
    println!("P(E_1 and E_2) = {} = {}", check.joint, check.product);

    let n = 100_000;
    for a in [0.5, 0.6] {
        let f = age_fractions(&Lifetime::ParetoInt(a), n, count, 1, default_workers())?;
        println!("Pareto({a}): KS to Beta({:.1}, {a}) = {:.4}", 1.0 - a, age_fraction_ecdf(&f, a)?.ks);
    }
    let params = params_from_p(1.0 / 3.0)?;
    let f = age_fractions(&Lifetime::Word { params, stat: HitStat::JTilde }, n, count, 2, default_workers())?;
    let r = age_fraction_ecdf(&f, params.mu)?;
    let atom = f.iter().filter(|&&x| x == 0.0).count() as f64 / f.len() as f64;
    println!("J~ renewal: KS {:.4}, mass at age 0 {atom:.4}", r.ks);
    for x in [0.01, 0.1, 0.5, 0.9] {
        println!("  F({x}) = {:.3}", r.ecdf.eval(x));
    }
    Ok(())
}
