//! Tail exponents of the word hitting times by survival ratios at doubling
//! thresholds.
//!
//! cargo run --example tail_exponents -- 100000

use hcburger::parallel::default_workers;
use hcburger::matching::HitStat;
use hcburger::params::params_from_p;
use hcburger::renewal::{stat_sampler, tail_ratio_exponent};

fn main() -> hcburger::Result<()> {
    let samples: u64 = std::env::args().nth(1).map_or(100_000, |s| s.parse().unwrap());
    let params = params_from_p(1.0 / 3.0)?;
    let thresholds = [256, 512, 1024, 2048, 4096];
    println!("mu = {:.4}", params.mu);
    for (stat, expect) in [
        (HitStat::J, params.mu),
        (HitStat::JTilde, params.mu),
        (HitStat::I, params.mu),
        (HitStat::KF, 1.0 - params.mu),
        (HitStat::P, 1.0 - params.mu),
    ] {
        let t = tail_ratio_exponent(stat_sampler(&params, stat), &thresholds, samples, 1, default_workers())?;
        let steps: Vec<String> = t.steps().iter().map(|(a, _)| format!("{a:.3}")).collect();
        println!("{stat:?}: alpha {:.3} ± {:.3} (expect {expect:.3}); steps {}", t.alpha_hat, t.stderr, steps.join(" "));
    }
    Ok(())
}
