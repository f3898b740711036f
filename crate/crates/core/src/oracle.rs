//! Exact brute-force engine: conditional channel, fixpoint-tuple counts,
//! vulnerability, min-entropy and the best guessing strategy, all by full
//! enumeration of the `m^n` input tuples. Ground truth for every other
//! engine.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::auction::price_of_unsorted;
use crate::error::{Error, Result};
use crate::leakage::{Engine, LeakageReport};

/// Default cap on tuple evaluations: keeps the oracle a desk-scale tool.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

/// Brute-force enumerator with a tuple-evaluation budget.
#[derive(Debug, Clone, Copy)]
pub struct Enumerator {
    pub budget: u64,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator {
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Integer counts realizing `p(o | x)` for a targeted input: for each pair
/// `(o, x)`, the number of spectator tuples with `f(..., x, ...) = o`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalChannel {
    pub n: u32,
    pub m: u64,
    pub target_index: u32,
    /// Non-zero counts keyed by `(output, targeted value)`.
    pub counts: BTreeMap<(u64, u64), u64>,
}

impl ConditionalChannel {
    pub fn count(&self, o: u64, x: u64) -> u64 {
        self.counts.get(&(o, x)).copied().unwrap_or(0)
    }

    /// `sum_o counts(o, x)`; must equal `m^(n-1)` for every `x`.
    pub fn row_sum(&self, x: u64) -> BigUint {
        let mut total = BigUint::zero();
        for (&(_, cx), &c) in &self.counts {
            if cx == x {
                total += c;
            }
        }
        total
    }

    /// `sum_o counts(o, o)`, the fixpoint-tuple count `c_n(m)`.
    pub fn diagonal_sum(&self) -> BigUint {
        let mut total = BigUint::zero();
        for o in 1..=self.m {
            total += self.count(o, o);
        }
        total
    }

    pub fn outputs(&self) -> Vec<u64> {
        // keys iterate in (o, x) order, so outputs arrive sorted
        let mut os: Vec<u64> = self.counts.keys().map(|&(o, _)| o).collect();
        os.dedup();
        os
    }

    /// `max_x counts(o, x)` with the smallest maximising `x`, plus the
    /// full tie set.
    pub fn argmax_for_output(&self, o: u64) -> (u64, u64, Vec<u64>) {
        let mut best = 0u64;
        for (&(co, _), &c) in &self.counts {
            if co == o && c > best {
                best = c;
            }
        }
        let ties: Vec<u64> = (1..=self.m)
            .filter(|&x| best > 0 && self.count(o, x) == best)
            .collect();
        let guess = ties.first().copied().unwrap_or(0);
        (guess, best, ties)
    }
}

/// Per-output best guess and its tie set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuessEntry {
    pub guess: u64,
    pub ties: Vec<u64>,
}

/// The guessing strategy achieving the expected vulnerability exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct GuessStrategy {
    pub n: u32,
    pub m: u64,
    pub per_output: BTreeMap<u64, GuessEntry>,
    /// Expected success probability of the strategy, exact.
    pub expected_success: Ratio<BigUint>,
}

impl Enumerator {
    pub fn with_budget(budget: u64) -> Self {
        Enumerator { budget }
    }

    fn check(&self, n: u32, m: u64) -> Result<()> {
        if n < 1 {
            return Err(Error::domain("party count n", n));
        }
        if m < 1 {
            return Err(Error::domain("domain bound m", m));
        }
        let required = BigUint::from(m).pow(n);
        if required > BigUint::from(self.budget) {
            return Err(Error::BudgetExceeded {
                required,
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// Full channel for the input at `target_index` (1-based). By the
    /// permutation invariance of the auction function the result does not
    /// depend on `target_index`; tests assert this rather than assume it.
    pub fn build_channel(&self, n: u32, m: u64, target_index: u32) -> Result<ConditionalChannel> {
        self.check(n, m)?;
        if target_index < 1 || target_index > n {
            return Err(Error::domain("target index", target_index));
        }
        let dims = (n - 1) as usize;
        let slot = (target_index - 1) as usize;

        // parallel over the targeted value, merged in x order
        let rows: Vec<Vec<u64>> = (1..=m)
            .into_par_iter()
            .map(|x| {
                let mut row = vec![0u64; m as usize + 1];
                let mut tuple = vec![0u64; n as usize];
                let mut scratch = vec![0u64; n as usize];
                tuple[slot] = x;
                for_each_tuple(dims, m, |spectators| {
                    let mut si = 0;
                    for (i, t) in tuple.iter_mut().enumerate() {
                        if i != slot {
                            *t = spectators[si];
                            si += 1;
                        }
                    }
                    scratch.copy_from_slice(&tuple);
                    let o = price_of_unsorted(&mut scratch);
                    row[o as usize] += 1;
                });
                row
            })
            .collect();

        let mut counts = BTreeMap::new();
        for (xi, row) in rows.iter().enumerate() {
            let x = xi as u64 + 1;
            for (o, &c) in row.iter().enumerate() {
                if c > 0 {
                    counts.insert((o as u64, x), c);
                }
            }
        }
        Ok(ConditionalChannel {
            n,
            m,
            target_index,
            counts,
        })
    }

    /// `c_n(m)`: the number of tuples whose auction price equals the first
    /// input. Counted directly, independently of [`Self::build_channel`].
    pub fn count_fixpoint_tuples(&self, n: u32, m: u64) -> Result<BigUint> {
        self.check(n, m)?;
        let dims = (n - 1) as usize;
        let per_x: Vec<u64> = (1..=m)
            .into_par_iter()
            .map(|x| {
                let mut hits = 0u64;
                let mut scratch = vec![0u64; n as usize];
                for_each_tuple(dims, m, |spectators| {
                    scratch[0] = x;
                    scratch[1..].copy_from_slice(spectators);
                    if price_of_unsorted(&mut scratch) == x {
                        hits += 1;
                    }
                });
                hits
            })
            .collect();
        let mut total = BigUint::zero();
        for hits in per_x {
            total += hits;
        }
        Ok(total)
    }

    /// Exact vulnerability from Bayes' rewrite of the channel: the sum of
    /// per-output maxima over `m^n`, in lowest terms.
    pub fn vulnerability(&self, n: u32, m: u64) -> Result<Ratio<BigUint>> {
        let channel = self.build_channel(n, m, 1)?;
        let mut numer = BigUint::zero();
        for o in channel.outputs() {
            let (_, best, _) = channel.argmax_for_output(o);
            numer += best;
        }
        Ok(Ratio::new(numer, BigUint::from(m).pow(n)))
    }

    pub fn min_entropy_report(&self, n: u32, m: u64) -> Result<LeakageReport> {
        let v = self.vulnerability(n, m)?;
        Ok(LeakageReport::new(n, m, Engine::Oracle, v))
    }

    pub fn best_guess_strategy(&self, n: u32, m: u64) -> Result<GuessStrategy> {
        let channel = self.build_channel(n, m, 1)?;
        let mut per_output = BTreeMap::new();
        let mut numer = BigUint::zero();
        for o in channel.outputs() {
            let (guess, best, ties) = channel.argmax_for_output(o);
            numer += best;
            per_output.insert(o, GuessEntry { guess, ties });
        }
        Ok(GuessStrategy {
            n,
            m,
            per_output,
            expected_success: Ratio::new(numer, BigUint::from(m).pow(n)),
        })
    }
}

/// Visit every tuple in `[1, m]^dims` in odometer order. `dims == 0`
/// yields the single empty tuple.
fn for_each_tuple<F: FnMut(&[u64])>(dims: usize, m: u64, mut visit: F) {
    let mut t = vec![1u64; dims];
    if dims == 0 {
        visit(&t);
        return;
    }
    loop {
        visit(&t);
        let mut i = 0;
        loop {
            if t[i] < m {
                t[i] += 1;
                break;
            }
            t[i] = 1;
            i += 1;
            if i == dims {
                return;
            }
        }
    }
}

/// Ratio of big naturals as `f64`; only used for display and diagnostics.
pub fn ratio_to_f64(r: &Ratio<BigUint>) -> f64 {
    if r.numer().bits() <= 52 && r.denom().bits() <= 52 {
        return r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap();
    }
    2f64.powf(-crate::leakage::neg_log2(r))
}
