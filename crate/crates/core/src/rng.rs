//! Seeding and symbol streams.
//!
//! Every stochastic routine draws from ChaCha8 keyed by four SplitMix64
//! outputs of a 64-bit seed. Replica `r` of a run with seed `s` uses
//! `replica_seed(s, r)`.

use crate::params::ModelParams;
use crate::word::Symbol;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Successive outputs of SplitMix64 started at `state`.
pub fn splitmix64_next(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    splitmix64_mix(*state)
}

pub fn replica_seed(seed: u64, replica: u64) -> u64 {
    splitmix64_mix(seed ^ replica.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
}

/// ChaCha8 keyed by four SplitMix64 outputs of `seed`.
pub fn chacha(seed: u64) -> ChaCha8Rng {
    let mut st = seed;
    let mut key = [0u8; 32];
    for k in 0..4 {
        key[8 * k..8 * k + 8].copy_from_slice(&splitmix64_next(&mut st).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Generator for replica `replica` of a run seeded with `seed`.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    chacha(replica_seed(seed, replica))
}

/// Maps a uniform u64 to a symbol by cumulative thresholds.
#[derive(Debug, Clone, Copy)]
pub struct SymbolSampler {
    cut: [u64; 4],
}

impl SymbolSampler {
    pub fn new(params: &ModelParams) -> Self {
        Self::from_probs(&params.sym_probs)
    }

    pub fn from_probs(probs: &[f64; 5]) -> Self {
        let scale = 18_446_744_073_709_551_616.0_f64;
        let mut acc = 0.0;
        let mut cut = [0u64; 4];
        for k in 0..4 {
            acc += probs[k];
            cut[k] = if acc >= 1.0 { u64::MAX } else { (acc * scale) as u64 };
        }
        SymbolSampler { cut }
    }

    #[inline]
    pub fn symbol(&self, x: u64) -> Symbol {
        if x < self.cut[1] {
            if x < self.cut[0] {
                Symbol::BH
            } else {
                Symbol::BC
            }
        } else if x < self.cut[2] {
            Symbol::OH
        } else if x < self.cut[3] {
            Symbol::OC
        } else {
            Symbol::OF
        }
    }
}

/// Endless iid symbol stream.
pub struct SymbolStream {
    rng: ChaCha8Rng,
    sampler: SymbolSampler,
}

impl SymbolStream {
    pub fn new(params: &ModelParams, seed: u64) -> Self {
        SymbolStream { rng: chacha(seed), sampler: SymbolSampler::new(params) }
    }

    pub fn from_rng(params: &ModelParams, rng: ChaCha8Rng) -> Self {
        SymbolStream { rng, sampler: SymbolSampler::new(params) }
    }
}

impl Iterator for SymbolStream {
    type Item = Symbol;
    #[inline]
    fn next(&mut self) -> Option<Symbol> {
        Some(self.sampler.symbol(self.rng.next_u64()))
    }
}

/// Uniform double in [0, 1) from the top 53 bits.
#[inline]
pub fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_output() {
        // Published first output of SplitMix64 from state 0.
        let mut st = 0u64;
        assert_eq!(splitmix64_next(&mut st), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64_next(&mut st), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn replica_seeds_differ() {
        let a = replica_seed(1, 0);
        let b = replica_seed(1, 1);
        let c = replica_seed(2, 0);
        assert!(a != b && a != c && b != c);
    }

    #[test]
    fn thresholds_monotone() {
        let m = crate::params::params_from_p(1.0 / 3.0).unwrap();
        let s = SymbolSampler::new(&m);
        assert!(s.cut.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s.cut[0], 1u64 << 62);
        assert_eq!(s.cut[1], 1u64 << 63);
    }
}
