use std::fmt;

use num_bigint::BigUint;

/// Errors surfaced by the auction and leakage engines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The auction was invoked with no bids.
    EmptyBidVector,
    /// A bid below the minimum admissible price of 1.
    BidBelowOne { value: u64 },
    /// An argument outside its admissible range.
    Domain { what: &'static str, value: String },
    /// The requested enumeration would exceed the configured budget.
    BudgetExceeded { required: BigUint, budget: u64 },
    /// Fewer data points than unknown coefficients.
    Underdetermined { points: usize, unknowns: usize },
    /// The least-squares system could not be solved reliably.
    Singular { condition: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyBidVector => write!(f, "bid vector is empty"),
            Error::BidBelowOne { value } => {
                write!(f, "bid {value} is below the minimum admissible value 1")
            }
            Error::Domain { what, value } => write!(f, "invalid {what}: {value}"),
            Error::BudgetExceeded { required, budget } => write!(
                f,
                "enumeration of {required} tuples exceeds the budget of {budget} \
                 (raise it with --budget or use a closed-form engine)"
            ),
            Error::Underdetermined { points, unknowns } => write!(
                f,
                "least-squares system is underdetermined: {points} points for {unknowns} unknowns"
            ),
            Error::Singular { condition } => write!(
                f,
                "least-squares system is numerically singular (condition {condition:.3e})"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(what: &'static str, value: impl fmt::Display) -> Self {
        Error::Domain {
            what,
            value: value.to_string(),
        }
    }
}
