//! Model parameters: p, the FK weight q, κ and the two cone exponents.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsInput")]
pub struct ModelParams {
    pub p: f64,
    pub q: f64,
    pub kappa: f64,
    pub mu: f64,
    pub mu_prime: f64,
    /// Probabilities of (b_h, b_c, o_h, o_c, o_f).
    #[serde(skip)]
    pub sym_probs: [f64; 5],
}

#[derive(Deserialize)]
struct ParamsInput {
    p: f64,
}

impl TryFrom<ParamsInput> for ModelParams {
    type Error = Error;
    fn try_from(v: ParamsInput) -> Result<Self> {
        params_from_p(v.p)
    }
}

pub fn params_from_p(p: f64) -> Result<ModelParams> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::Domain(format!("p = {p} is not in (0, 1/2)")));
    }
    let s = 2.0 * p / (1.0 - p);
    let q = s * s;
    let kappa = 8.0 * PI / (2.0 * PI - (q / 2.0 - 1.0).acos());
    let theta = ((1.0 - 2.0 * p).sqrt() / p).atan();
    let mu = PI / (2.0 * (PI - theta));
    let mu_prime = PI / (2.0 * (PI + theta));
    let sym_probs = [0.25, 0.25, (1.0 - p) / 4.0, (1.0 - p) / 4.0, p / 2.0];
    Ok(ModelParams { p, q, kappa, mu, mu_prime, sym_probs })
}

pub fn params_from_q(q: f64) -> Result<ModelParams> {
    if !(q > 0.0 && q < 4.0) {
        return Err(Error::Domain(format!("q = {q} is not in (0, 4)")));
    }
    let s = q.sqrt();
    params_from_p(s / (2.0 + s))
}

pub fn params_from_kappa(kappa: f64) -> Result<ModelParams> {
    if !(kappa > 4.0 && kappa < 8.0) {
        return Err(Error::Domain(format!("kappa = {kappa} is not in (4, 8)")));
    }
    params_from_p(p_of_kappa(kappa))
}

/// p as a function of κ.
pub fn p_of_kappa(kappa: f64) -> f64 {
    let s = (2.0 + 2.0 * (8.0 * PI / kappa).cos()).sqrt();
    s / (2.0 + s)
}

impl ModelParams {
    pub fn mu_from_kappa(&self) -> f64 {
        self.kappa / 8.0
    }

    pub fn mu_prime_from_kappa(&self) -> f64 {
        self.kappa / (4.0 * (self.kappa - 2.0))
    }

    /// Opening angle of the cone F_p.
    pub fn cone_angle(&self) -> f64 {
        PI - ((1.0 - 2.0 * self.p).sqrt() / self.p).atan()
    }

    /// sqrt(q) = 2p/(1-p), the weight per flexible order.
    pub fn sqrt_q(&self) -> f64 {
        2.0 * self.p / (1.0 - self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn p_one_third_values() {
        let m = params_from_p(1.0 / 3.0).unwrap();
        assert!(close(m.q, 1.0, 1e-12));
        assert!(close(m.kappa, 6.0, 1e-12));
        assert!(close(m.mu, 0.75, 1e-12));
        assert!(close(m.mu_prime, 0.375, 1e-12));
        let want = [0.25, 0.25, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0];
        for k in 0..5 {
            assert!(close(m.sym_probs[k], want[k], 1e-15));
        }
    }

    #[test]
    fn boundary_rejected() {
        assert!(params_from_p(0.5).is_err());
        assert!(params_from_p(0.0).is_err());
        assert!(params_from_q(4.0).is_err());
        assert!(params_from_kappa(8.0).is_err());
        assert!(params_from_kappa(4.0).is_err());
    }

    #[test]
    fn from_q() {
        assert!(close(params_from_q(1.0).unwrap().p, 1.0 / 3.0, 1e-15));
        let m = params_from_q(2.0).unwrap();
        assert!(close(m.p, 2f64.sqrt() - 1.0, 1e-12));
        assert!(close(m.kappa, 16.0 / 3.0, 1e-12));
        assert!(close(m.mu, 2.0 / 3.0, 1e-12));
    }

    #[test]
    fn from_kappa() {
        assert!(close(params_from_kappa(6.0).unwrap().p, 1.0 / 3.0, 1e-12));
        assert!(close(params_from_kappa(16.0 / 3.0).unwrap().q, 2.0, 1e-12));
    }

    #[test]
    fn closed_forms_agree_on_grid() {
        for k in 1..1000 {
            let p = 0.5 * k as f64 / 1000.0;
            let m = params_from_p(p).unwrap();
            assert!(close(m.q, 4.0 * p * p / ((1.0 - p) * (1.0 - p)), 1e-12));
            assert!(close(p_of_kappa(m.kappa), p, 1e-12));
            assert!(close(m.mu, m.mu_from_kappa(), 1e-12), "p={p}");
            assert!(close(m.mu_prime, m.mu_prime_from_kappa(), 1e-12), "p={p}");
            let s: f64 = m.sym_probs.iter().sum();
            assert!(close(s, 1.0, 1e-15));
        }
    }

    #[test]
    fn round_trips() {
        for k in 1..=100 {
            let p = 0.499 * k as f64 / 100.0;
            let m = params_from_p(p).unwrap();
            assert!(close(params_from_q(m.q).unwrap().p, p, 1e-12));
            assert!(close(params_from_kappa(m.kappa).unwrap().p, p, 1e-12));
        }
    }

    #[test]
    fn exponents_monotone() {
        let mut prev: Option<ModelParams> = None;
        for k in 1..1000 {
            let m = params_from_p(0.5 * k as f64 / 1000.0).unwrap();
            if let Some(o) = prev {
                assert!(m.mu < o.mu);
                assert!(m.mu_prime > o.mu_prime);
            }
            prev = Some(m);
        }
    }

    #[test]
    fn json_needs_only_p() {
        let m: ModelParams = serde_json::from_str(r#"{"p":0.25}"#).unwrap();
        assert_eq!(m, params_from_p(0.25).unwrap());
        let s = serde_json::to_string(&m).unwrap();
        for key in ["\"p\"", "\"q\"", "\"kappa\"", "\"mu\"", "\"mu_prime\""] {
            assert!(s.contains(key));
        }
        assert!(serde_json::from_str::<ModelParams>(r#"{"p":0.7}"#).is_err());
    }
}
