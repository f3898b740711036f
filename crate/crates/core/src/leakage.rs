//! Leakage reports shared by every engine.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Which engine produced a result. Entropies are reported in bits
/// (logarithms base 2) throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Exhaustive enumeration of all `m^n` tuples.
    Oracle,
    /// Two-party closed form `(m+1)/(2m)`.
    Closed2,
    /// Three-party `O(m)` lattice-count engine.
    Fast3,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Oracle => "oracle",
            Engine::Closed2 => "closed2",
            Engine::Fast3 => "fast3",
        }
    }
}

/// Exact vulnerability together with the derived entropies for one
/// `(n, m)` instance.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakageReport {
    pub n: u32,
    pub m: u64,
    pub engine: Engine,
    /// `c_n(m) / m^n` in lowest terms.
    pub vulnerability: Ratio<BigUint>,
    /// Posterior min-entropy `-log2 V`, in bits.
    pub entropy_bits: f64,
    /// Prior min-entropy `log2 m`, in bits.
    pub prior_bits: f64,
}

impl LeakageReport {
    pub fn new(n: u32, m: u64, engine: Engine, vulnerability: Ratio<BigUint>) -> Self {
        let entropy_bits = neg_log2(&vulnerability);
        LeakageReport {
            n,
            m,
            engine,
            vulnerability,
            entropy_bits,
            prior_bits: (m as f64).log2(),
        }
    }
}

/// `-log2(num/den)` for an exact rational in (0, 1].
pub fn neg_log2(v: &Ratio<BigUint>) -> f64 {
    log2_big(v.denom()) - log2_big(v.numer())
}

/// Accurate `log2` of a big integer.
fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        return x.to_f64().unwrap().log2();
    }
    // keep the top 64 bits and account for the shift
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}
