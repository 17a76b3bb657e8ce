//! The correlated Brownian motion Z = (U, V) with Var U(t) = Var V(t) = (1−p)|t|/2
//! and Cov = p|t|/2, its standardizing map, cone events and the first-quadrant
//! meander.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::rng::chacha;
use crate::stats::proportion;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

type Mat = [[f64; 2]; 2];

fn mul(a: &Mat, b: &Mat) -> Mat {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn transpose(a: &Mat) -> Mat {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// Covariance of Z(1).
pub fn unit_cov(params: &ModelParams) -> Mat {
    let (a, b) = ((1.0 - params.p) / 2.0, params.p / 2.0);
    [[a, b], [b, a]]
}

/// Lower-triangular L with L Lᵀ = Cov(Z(1)).
pub fn cov_factor(params: &ModelParams) -> Mat {
    let (a, b) = ((1.0 - params.p) / 2.0, params.p / 2.0);
    let l00 = a.sqrt();
    let l10 = b / l00;
    [[l00, 0.0], [l10, (a - l10 * l10).sqrt()]]
}

/// A with A·Z a standard planar Brownian motion; A maps the first quadrant
/// onto the cone {0 < arg w < π − arctan(√(1−2p)/p)}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StandardizingMap {
    pub a: Mat,
    pub a_inv: Mat,
}

impl StandardizingMap {
    pub fn new(params: &ModelParams) -> Self {
        let p = params.p;
        let s = (2.0 * (1.0 - p) / (1.0 - 2.0 * p)).sqrt();
        let r = (1.0 - 2.0 * p).sqrt() / (1.0 - p);
        let a = [[s, -s * p / (1.0 - p)], [0.0, s * r]];
        let det = a[0][0] * a[1][1];
        let a_inv = [[a[1][1] / det, -a[0][1] / det], [0.0, a[0][0] / det]];
        StandardizingMap { a, a_inv }
    }

    pub fn det(&self) -> f64 {
        self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]
    }

    pub fn apply(&self, z: (f64, f64)) -> (f64, f64) {
        (self.a[0][0] * z.0 + self.a[0][1] * z.1, self.a[1][0] * z.0 + self.a[1][1] * z.1)
    }

    /// A · Cov · Aᵀ, which is the identity.
    pub fn whitened_cov(&self, params: &ModelParams) -> Mat {
        mul(&mul(&self.a, &unit_cov(params)), &transpose(&self.a))
    }

    /// A⁻¹ A⁻ᵀ, which equals Cov: A⁻¹ is another square root of the covariance.
    pub fn inverse_gram(&self) -> Mat {
        mul(&self.a_inv, &transpose(&self.a_inv))
    }
}

/// Z sampled on the grid k·dt, k = 0..=T/dt, from Z(0) = 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BMPath {
    pub dt: f64,
    pub horizon: f64,
    pub samples: Vec<(f64, f64)>,
}

impl BMPath {
    pub fn last(&self) -> (f64, f64) {
        *self.samples.last().expect("paths hold Z(0)")
    }

    pub fn at_time(&self, t: f64) -> (f64, f64) {
        let k = ((t / self.dt).round() as usize).min(self.samples.len() - 1);
        self.samples[k]
    }
}

/// Draws increments of Z over steps of length dt.
pub struct Increments {
    l: Mat,
    rng: ChaCha8Rng,
}

impl Increments {
    pub fn new(params: &ModelParams, dt: f64, rng: ChaCha8Rng) -> Self {
        let s = dt.sqrt();
        let l = cov_factor(params);
        Increments { l: [[l[0][0] * s, 0.0], [l[1][0] * s, l[1][1] * s]], rng }
    }

    #[inline]
    pub fn step(&mut self) -> (f64, f64) {
        let x: f64 = self.rng.sample(StandardNormal);
        let y: f64 = self.rng.sample(StandardNormal);
        (self.l[0][0] * x, self.l[1][0] * x + self.l[1][1] * y)
    }
}

fn check_dt(dt: f64, horizon: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    if !(horizon >= dt) {
        return Err(Error::Domain(format!("horizon {horizon} is shorter than dt {dt}")));
    }
    Ok((horizon / dt).round() as usize)
}

pub fn sample_bm(params: &ModelParams, horizon: f64, dt: f64, seed: u64) -> Result<BMPath> {
    let steps = check_dt(dt, horizon)?;
    let mut inc = Increments::new(params, dt, chacha(seed));
    let mut samples = Vec::with_capacity(steps + 1);
    let (mut u, mut v) = (0.0, 0.0);
    samples.push((u, v));
    for _ in 0..steps {
        let (du, dv) = inc.step();
        u += du;
        v += dv;
        samples.push((u, v));
    }
    Ok(BMPath { dt, horizon, samples })
}

/// Running minima of one path on [0, 1]: min over t of min(U, V) and of max(U, V).
/// Stops early once the second falls below `floor`.
pub fn cone_minima(inc: &mut Increments, steps: usize, floor: f64) -> (f64, f64) {
    let (mut u, mut v) = (0.0f64, 0.0f64);
    let (mut m1, mut m2) = (0.0f64, 0.0f64);
    for _ in 0..steps {
        let (du, dv) = inc.step();
        u += du;
        v += dv;
        m1 = m1.min(u.min(v));
        m2 = m2.min(u.max(v));
        if m2 < floor {
            break;
        }
    }
    (m1, m2)
}

/// Monte Carlo estimate of P(E_δ) and P(E'_δ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeEstimate {
    pub delta: f64,
    pub p_e: f64,
    pub stderr_e: f64,
    pub p_eprime: f64,
    pub stderr_eprime: f64,
    pub n: u64,
    pub dt: f64,
    pub seed: u64,
}

/// Estimates for several δ from the same paths. Path k uses seed
/// `replica_seed(seed, k)`.
pub fn cone_event_probs(params: &ModelParams, deltas: &[f64], dt: f64, n: u64, seed: u64, workers: usize) -> Result<Vec<ConeEstimate>> {
    let steps = check_dt(dt, 1.0)?;
    if deltas.iter().any(|&d| !(d > 0.0)) || deltas.is_empty() {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let floor = -deltas.iter().fold(0.0f64, |m, &d| m.max(d)).sqrt();
    let minima = crate::parallel::run_replicas(n, seed, workers, |_, s| {
        let mut inc = Increments::new(params, dt, chacha(s));
        cone_minima(&mut inc, steps, floor)
    });
    Ok(deltas
        .iter()
        .map(|&delta| {
            let b = -delta.sqrt();
            let e = minima.iter().filter(|m| m.0 >= b).count() as u64;
            let e2 = minima.iter().filter(|m| m.1 >= b).count() as u64;
            let (p_e, stderr_e) = proportion(e, n);
            let (p_eprime, stderr_eprime) = proportion(e2, n);
            ConeEstimate { delta, p_e, stderr_e, p_eprime, stderr_eprime, n, dt, seed }
        })
        .collect())
}

pub fn cone_event_prob(params: &ModelParams, delta: f64, dt: f64, n: u64, seed: u64) -> Result<ConeEstimate> {
    Ok(cone_event_probs(params, &[delta], dt, n, seed, 1)?[0])
}

/// Z on [0, 1] conditioned to stay in the first quadrant: every grid point must
/// stay inside and, after the first step, each grid segment survives a
/// Brownian-bridge kill.
pub fn meander_sample(params: &ModelParams, dt: f64, seed: u64, max_tries: u64) -> Result<BMPath> {
    let steps = check_dt(dt, 1.0)?;
    let mut inc = Increments::new(params, dt, chacha(seed));
    let denom = (1.0 - params.p) / 2.0 * dt;
    let mut samples = Vec::with_capacity(steps + 1);
    'tries: for _ in 0..max_tries {
        samples.clear();
        let (mut u, mut v) = (0.0, 0.0);
        samples.push((u, v));
        for k in 0..steps {
            let (du, dv) = inc.step();
            let (nu, nv) = (u + du, v + dv);
            if nu < 0.0 || nv < 0.0 {
                continue 'tries;
            }
            if k > 0 {
                let pu = (-2.0 * u * nu / denom).exp();
                let pv = (-2.0 * v * nv / denom).exp();
                let x: f64 = inc.rng.random();
                if x < 1.0 - (1.0 - pu) * (1.0 - pv) {
                    continue 'tries;
                }
            }
            u = nu;
            v = nv;
            samples.push((u, v));
        }
        return Ok(BMPath { dt, horizon: 1.0, samples });
    }
    Err(Error::Exhausted(max_tries))
}

/// Runs Z from `z` for `steps` grid steps and reports whether every grid point
/// stayed in the quadrant. With `bridge`, also kills the path with the
/// probability that a Brownian bridge between the grid points leaves it.
pub fn survives(inc: &mut Increments, z: (f64, f64), steps: usize, dt: f64, var: f64, bridge: bool) -> bool {
    let (mut u, mut v) = z;
    let denom = var * dt;
    for _ in 0..steps {
        let (du, dv) = inc.step();
        let (nu, nv) = (u + du, v + dv);
        if nu < 0.0 || nv < 0.0 {
            return false;
        }
        if bridge {
            let pu = (-2.0 * u * nu / denom).exp();
            let pv = (-2.0 * v * nv / denom).exp();
            let x: f64 = inc.rng.random();
            if x < 1.0 - (1.0 - pu) * (1.0 - pv) {
                return false;
            }
        }
        u = nu;
        v = nv;
    }
    true
}

/// Closed-form part of the meander density at time t, without P_z(T > 1−t).
pub fn meander_prefactor(params: &ModelParams, t: f64, z: (f64, f64)) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(format!("t = {t} outside (0, 1]")));
    }
    if !(z.0 >= 0.0 && z.1 >= 0.0) {
        return Err(Error::Domain(format!("z = {z:?} outside the first quadrant")));
    }
    let a = StandardizingMap::new(params);
    let mu = params.mu;
    let w = a.apply(z);
    let r2 = w.0 * w.0 + w.1 * w.1;
    let arg = w.1.atan2(w.0);
    let norm = a.det() / (2f64.powf(mu) * statrs::function::gamma::gamma(mu) * t.powf(1.0 + 2.0 * mu));
    Ok(norm * r2.powf(mu) * (-r2 / (2.0 * t)).exp() * (2.0 * mu * arg).sin())
}

/// Density of the meander at time t and point z. P_z(T > 1−t) is estimated
/// with `n` paths on a grid of 1000 steps per unit time with a bridge correction.
pub fn meander_density(params: &ModelParams, t: f64, z: (f64, f64), n: u64, seed: u64) -> Result<f64> {
    let pre = meander_prefactor(params, t, z)?;
    if t == 1.0 || pre == 0.0 {
        return Ok(pre);
    }
    Ok(pre * survival_prob(params, z, 1.0 - t, n, seed))
}

/// Monte Carlo P_z(T > s).
pub fn survival_prob(params: &ModelParams, z: (f64, f64), s: f64, n: u64, seed: u64) -> f64 {
    let dt = 1e-3;
    let steps = ((s / dt).round() as usize).max(1);
    let dt = s / steps as f64;
    let var = (1.0 - params.p) / 2.0;
    let mut inc = Increments::new(params, dt, chacha(seed));
    let alive = (0..n).filter(|_| survives(&mut inc, z, steps, dt, var, true)).count();
    alive as f64 / n as f64
}
