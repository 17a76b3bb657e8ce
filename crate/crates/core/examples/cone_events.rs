//! Probabilities that the correlated Brownian motion stays above -sqrt(delta)
//! in one or both coordinates, and their power-law slopes.
//!
//! cargo run --example cone_events -- 20000

use hcburger::parallel::default_workers;
use hcburger::continuum::cone_event_probs;
use hcburger::params::params_from_p;
use hcburger::stats::ls_slope;

fn main() -> hcburger::Result<()> {
    let samples: u64 = std::env::args().nth(1).map_or(20_000, |s| s.parse().unwrap());
    let params = params_from_p(1.0 / 3.0)?;
    let est = cone_event_probs(&params, &[0.04, 0.02, 0.01], 1e-3, samples, 1, default_workers())?;
    for e in &est {
        println!("delta {:.2}: P(E) {:.4} ± {:.4}, P(E') {:.4} ± {:.4}", e.delta, e.p_e, e.stderr_e, e.p_eprime, e.stderr_eprime);
    }
    let x: Vec<f64> = est.iter().map(|e| e.delta.ln()).collect();
    let s = ls_slope(&x, &est.iter().map(|e| e.p_e.ln()).collect::<Vec<_>>());
    let s2 = ls_slope(&x, &est.iter().map(|e| e.p_eprime.ln()).collect::<Vec<_>>());
    println!("slopes {s:.3} and {s2:.3}; mu {:.3}, mu' {:.3}", params.mu, params.mu_prime);
    Ok(())
}
