//! The digital goods auction pricing function.
//!
//! Given bids `x_1, ..., x_n`, the seller picks the price `p` maximising
//! `p * |{i : x_i >= p}|`. When several prices reach the maximal benefit,
//! the lowest one wins so that more buyers are served. Equivalently: sort
//! the bids in descending order and return `x_k` for the largest `k`
//! maximising `k * x_k`.

use crate::error::{Error, Result};

fn validate(bids: &[u64]) -> Result<()> {
    if bids.is_empty() {
        return Err(Error::EmptyBidVector);
    }
    if let Some(&bad) = bids.iter().find(|&&b| b < 1) {
        return Err(Error::BidBelowOne { value: bad });
    }
    Ok(())
}

/// Optimal sales price for an arbitrary number of bidders.
///
/// The result is always a member of the input multiset and is invariant
/// under permutation of the bids.
pub fn auction_price(bids: &[u64]) -> Result<u64> {
    validate(bids)?;
    let mut sorted = bids.to_vec();
    Ok(price_of_unsorted(&mut sorted))
}

/// Price computation on a scratch buffer the caller owns. The buffer is
/// sorted in place; bids are assumed non-empty and >= 1.
pub(crate) fn price_of_unsorted(bids: &mut [u64]) -> u64 {
    bids.sort_unstable_by(|a, b| b.cmp(a));
    price_of_sorted_desc(bids)
}

/// Price of bids already sorted in descending order.
pub(crate) fn price_of_sorted_desc(sorted: &[u64]) -> u64 {
    debug_assert!(sorted.windows(2).all(|w| w[0] >= w[1]));
    let mut best_k = 0usize;
    let mut best = 0u128;
    for (i, &bid) in sorted.iter().enumerate() {
        let benefit = (i as u128 + 1) * bid as u128;
        // ties go to the larger k: lower price, more buyers
        if benefit >= best {
            best = benefit;
            best_k = i;
        }
    }
    sorted[best_k]
}

/// Two-bidder specialization; agrees with [`auction_price`] on every pair.
pub fn auction_price_2(x: u64, y: u64) -> Result<u64> {
    validate(&[x, y])?;
    Ok(price_2(x, y))
}

pub(crate) fn price_2(x: u64, y: u64) -> u64 {
    if x > y {
        if x > 2 * y {
            x
        } else {
            y
        }
    } else if y > 2 * x {
        y
    } else {
        x
    }
}

/// Three-bidder specialization; agrees with [`auction_price`] on every triple.
pub fn auction_price_3(x: u64, y: u64, z: u64) -> Result<u64> {
    validate(&[x, y, z])?;
    Ok(price_3(x, y, z))
}

pub(crate) fn price_3(x: u64, y: u64, z: u64) -> u64 {
    // sort the three bids descending, then pick the max of (a, 2b, 3c)
    let (mut a, mut b, mut c) = (x, y, z);
    if a < b {
        std::mem::swap(&mut a, &mut b);
    }
    if b < c {
        std::mem::swap(&mut b, &mut c);
    }
    if a < b {
        std::mem::swap(&mut a, &mut b);
    }
    if a > 2 * b && a > 3 * c {
        a
    } else if 2 * b > 3 * c {
        b
    } else {
        c
    }
}

/// The set of buyers `{i : x_i >= p}` and the seller's benefit at price `p`.
pub fn buyers_and_benefit(bids: &[u64], price: u64) -> (Vec<usize>, u128) {
    let buyers: Vec<usize> = bids
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= price)
        .map(|(i, _)| i)
        .collect();
    let benefit = price as u128 * buyers.len() as u128;
    (buyers, benefit)
}
