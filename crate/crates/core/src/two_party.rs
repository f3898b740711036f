//! Constant-time two-party engine: vulnerability `(m+1)/(2m)` and the
//! entropy limit of 1 bit as `m` grows.

use num_bigint::BigUint;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::leakage::{Engine, LeakageReport};

/// Exact two-party result for a given domain bound `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPartyResult {
    pub m: u64,
    /// `(m+1)/(2m)` in lowest terms.
    pub vulnerability: Ratio<BigUint>,
    /// The unreduced numerator `m(m+1)/2`: the fixpoint-tuple count `c_2(m)`,
    /// kept alongside the reduced form so the counting argument stays
    /// auditable. The unreduced denominator is `m^2`.
    pub c2: BigUint,
    pub entropy_bits: f64,
    /// `1 - entropy_bits = log2(1 + 1/m)`, computed to full precision even
    /// when `entropy_bits` rounds to 1.0.
    pub gap_to_limit: f64,
}

impl TwoPartyResult {
    pub fn report(&self) -> LeakageReport {
        LeakageReport {
            n: 2,
            m: self.m,
            engine: Engine::Closed2,
            vulnerability: self.vulnerability.clone(),
            entropy_bits: self.entropy_bits,
            prior_bits: (self.m as f64).log2(),
        }
    }
}

/// Two-party vulnerability and entropy in constant time for any `m`.
pub fn h2_closed_form(m: u64) -> Result<TwoPartyResult> {
    if m < 1 {
        return Err(Error::domain("domain bound m", m));
    }
    let big_m = BigUint::from(m);
    let c2 = &big_m * (&big_m + 1u32) / 2u32;
    let vulnerability = Ratio::new(&big_m + 1u32, 2u32 * &big_m);
    // -log2((m+1)/(2m)) = 1 - log2(1 + 1/m); ln_1p keeps the gap accurate
    // out to m = 10^18
    let gap_to_limit = (1.0 / m as f64).ln_1p() / std::f64::consts::LN_2;
    Ok(TwoPartyResult {
        m,
        vulnerability,
        c2,
        entropy_bits: 1.0 - gap_to_limit,
        gap_to_limit,
    })
}

/// Entropy limit for two parties as `m` tends to infinity: 1 bit.
pub fn two_party_limit() -> f64 {
    1.0
}
