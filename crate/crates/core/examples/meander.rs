//! The quadrant meander against walks conditioned to have no burgers or no
//! orders.
//!
//! cargo run --example meander -- 500

use hcburger::continuum::{meander_density, meander_sample};
use hcburger::params::params_from_p;
use hcburger::parallel::{default_workers, run_replicas};
use hcburger::stats::mean;
use hcburger::walk::{conditioned_endpoint, Conditioning};

fn main() -> hcburger::Result<()> {
    let samples: u64 = std::env::args().nth(1).map_or(500, |s| s.parse().unwrap());
    let params = params_from_p(1.0 / 3.0)?;
    let ends: Vec<(f64, f64)> = run_replicas(samples, 1, default_workers(), |_, s| meander_sample(&params, 1e-3, s, 10_000_000).map(|p| p.last()))
        .into_iter()
        .collect::<hcburger::Result<_>>()?;
    let mu = |z: &[(f64, f64)]| (mean(&z.iter().map(|p| p.0).collect::<Vec<_>>()), mean(&z.iter().map(|p| p.1).collect::<Vec<_>>()));
    println!("meander       E[Z(1)] = {:.3?}", mu(&ends));
    for cond in [Conditioning::NoBurgers, Conditioning::NoOrders] {
        let z: Vec<(f64, f64)> = run_replicas(samples, 2, default_workers(), |_, s| conditioned_endpoint(&params, 4096, cond, s, 100_000_000, 409_600))
            .into_iter()
            .map(|e| e.map(|e| e.z))
            .collect::<hcburger::Result<_>>()?;
        println!("{:<13} E[Z(1)] = {:.3?}", format!("{cond:?}"), mu(&z));
    }
    let d = meander_density(&params, 0.5, (0.5, 0.5), 2000, 3)?;
    println!("meander density at t = 0.5, z = (0.5, 0.5): {d:.4}");
    Ok(())
}
