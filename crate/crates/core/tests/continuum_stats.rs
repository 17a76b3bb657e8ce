//! Statistical checks of the Brownian sampler, the meander sampler and the
//! meander density.

use hcburger::continuum::*;
use hcburger::params::params_from_p;
use hcburger::rng::{chacha, replica_seed};
use hcburger::stats::{empirical_cov, ks_two_sample, Ecdf};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn bm_endpoint_covariance() {
    let params = params_from_p(0.25).unwrap();
    let ends: Vec<(f64, f64)> = (0..20000).map(|k| sample_bm(&params, 1.0, 1e-2, replica_seed(4, k)).unwrap().last()).collect();
    let c = empirical_cov(&ends).unwrap();
    assert!((c[0][0] / 0.375 - 1.0).abs() < 0.05, "{c:?}");
    assert!((c[1][1] / 0.375 - 1.0).abs() < 0.05, "{c:?}");
    assert!((c[0][1] / 0.125 - 1.0).abs() < 0.10, "{c:?}");
}

#[test]
fn whitened_increments_are_standard() {
    let params = params_from_p(0.25).unwrap();
    let a = StandardizingMap::new(&params);
    let dt = 1e-3;
    let path = sample_bm(&params, 100.0, dt, 8).unwrap();
    let inc: Vec<(f64, f64)> = path
        .samples
        .windows(2)
        .map(|w| {
            let d = a.apply((w[1].0 - w[0].0, w[1].1 - w[0].1));
            (d.0 / dt.sqrt(), d.1 / dt.sqrt())
        })
        .collect();
    let c = empirical_cov(&inc).unwrap();
    assert!((c[0][0] - 1.0).abs() < 0.05 && (c[1][1] - 1.0).abs() < 0.05 && c[0][1].abs() < 0.05, "{c:?}");
}

#[test]
fn cone_estimates_are_consistent() {
    let params = params_from_p(1.0 / 3.0).unwrap();
    let small = cone_event_prob(&params, 1.0, 1e-3, 4000, 21).unwrap();
    let big = cone_event_prob(&params, 1.0, 1e-3, 40000, 22).unwrap();
    let se = (small.stderr_e.powi(2) + big.stderr_e.powi(2)).sqrt();
    assert!((small.p_e - big.p_e).abs() <= 2.0 * se, "{small:?} {big:?}");
    let est = cone_event_probs(&params, &[0.01, 0.04, 0.16, 0.64], 1e-3, 20000, 23, 1).unwrap();
    for w in est.windows(2) {
        assert!(w[0].p_e <= w[1].p_e + 3.0 * w[1].stderr_e);
        assert!(w[0].p_eprime <= w[1].p_eprime + 3.0 * w[1].stderr_eprime);
    }
    for e in &est {
        assert!(e.p_e <= e.p_eprime);
    }
}

fn meanders(dt: f64, count: u64, seed: u64) -> Vec<BMPath> {
    let params = params_from_p(1.0 / 3.0).unwrap();
    (0..count).map(|k| meander_sample(&params, dt, replica_seed(seed, k), 100_000_000).unwrap()).collect()
}

#[test]
fn meander_acceptance_rate_is_stable() {
    let params = params_from_p(1.0 / 3.0).unwrap();
    let rate = |seed: u64| {
        let mut inc = Increments::new(&params, 1e-3, chacha(seed));
        let ok = (0..100_000).filter(|_| survives(&mut inc, (0.0, 0.0), 1000, 1e-3, 1.0 / 3.0, false)).count();
        ok as f64 / 1e5
    };
    let (a, b) = (rate(31), rate(32));
    assert!(a > 0.0 && (0.8..=1.25).contains(&(a / b)), "{a} {b}");
}

#[test]
fn meander_grid_refinement() {
    let coarse = meanders(1e-3, 4000, 41);
    let fine = meanders(2.5e-4, 4000, 42);
    let m = |v: &[BMPath], f: fn(&BMPath) -> f64| v.iter().map(f).sum::<f64>() / v.len() as f64;
    let (cu, fu) = (m(&coarse, |p| p.last().0), m(&fine, |p| p.last().0));
    let (cv, fv) = (m(&coarse, |p| p.last().1), m(&fine, |p| p.last().1));
    assert!((cu / fu - 1.0).abs() < 0.05, "{cu} {fu}");
    assert!((cv / fv - 1.0).abs() < 0.05, "{cv} {fv}");
}

#[test]
fn meander_markov_property() {
    let params = params_from_p(1.0 / 3.0).unwrap();
    let dt = 1e-3;
    let paths = meanders(dt, 10_000, 51);
    let mut inc = Increments::new(&params, dt, chacha(52));
    let resampled: Vec<f64> = paths
        .iter()
        .map(|p| {
            let z = p.at_time(0.5);
            loop {
                let (mut u, mut v) = z;
                let mut ok = true;
                for _ in 0..500 {
                    let (du, dv) = inc.step();
                    u += du;
                    v += dv;
                    if u < 0.0 || v < 0.0 {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    return u;
                }
            }
        })
        .collect();
    let orig: Vec<f64> = paths.iter().map(|p| p.last().0).collect();
    let d = ks_two_sample(&Ecdf::new(&orig), &Ecdf::new(&resampled));
    assert!(d <= 0.05, "{d}");
}

#[test]
fn meander_histogram_matches_density() {
    let params = params_from_p(1.0 / 3.0).unwrap();
    let paths = meanders(2.5e-4, 10_000, 61);
    let (cells, h) = (10usize, 0.15);
    let mut counts = vec![0f64; cells * cells + 1];
    for p in &paths {
        let (u, v) = p.at_time(0.5);
        let (i, j) = ((u / h) as usize, (v / h) as usize);
        let k = if i < cells && j < cells { i * cells + j } else { cells * cells };
        counts[k] += 1.0;
    }
    let sub = 4;
    let mut expect = vec![0f64; cells * cells + 1];
    for i in 0..cells {
        for j in 0..cells {
            let mut mass = 0.0;
            for a in 0..sub {
                for b in 0..sub {
                    let z = ((i as f64 + (a as f64 + 0.5) / sub as f64) * h, (j as f64 + (b as f64 + 0.5) / sub as f64) * h);
                    let seed = replica_seed(62, ((i * cells + j) * sub * sub + a * sub + b) as u64);
                    let density = meander_density(&params, 0.5, z, 300, seed).unwrap();
                    mass += density * (h / sub as f64).powi(2);
                }
            }
            expect[i * cells + j] = mass * paths.len() as f64;
        }
    }
    let inside: f64 = expect.iter().sum();
    expect[cells * cells] = paths.len() as f64 - inside;
    let (mut chi2, mut dof) = (0.0, 0usize);
    for k in 0..expect.len() {
        if expect[k] >= 5.0 {
            chi2 += (counts[k] - expect[k]).powi(2) / expect[k];
            dof += 1;
        }
    }
    let pval = 1.0 - ChiSquared::new((dof - 1) as f64).unwrap().cdf(chi2);
    assert!(pval > 0.01, "chi2 {chi2} dof {dof} p {pval}");
}
