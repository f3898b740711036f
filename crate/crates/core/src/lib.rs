//! Quantifies the inherent leakage of private bids in digital goods
//! auctions: the sales price is a function of the bids, so revealing it
//! reveals something about them. The library measures that leakage as
//! conditional min-entropy, with an exact enumeration oracle for any
//! party count, constant-time and linear-time engines for two and three
//! parties, and a regression harness for the `a_n = 1/n` leading
//! coefficient conjecture.

pub mod auction;
pub mod cli;
pub mod conjecture;
pub mod error;
pub mod leakage;
pub mod oracle;
pub mod three_party;
pub mod two_party;

pub use auction::{auction_price, auction_price_2, auction_price_3};
pub use error::{Error, Result};
pub use leakage::{Engine, LeakageReport};
pub use oracle::Enumerator;
pub use three_party::{c3_fast, h3_fast, three_party_limit};
pub use two_party::{h2_closed_form, two_party_limit};
