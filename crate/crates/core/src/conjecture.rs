//! Empirical support for the `a_n = 1/n` leading-coefficient conjecture:
//! generate `c_n(1..M)` series, fit degree-n polynomials by ordinary
//! least squares and compare leading coefficients against `1/n` and the
//! published values.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::leakage::Engine;
use crate::oracle::Enumerator;
use crate::three_party;
use crate::two_party;

/// One point of a `c_n` series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub m: u64,
    pub count: BigUint,
    pub engine: Engine,
}

/// The sequence `c_n(1), ..., c_n(M)` with exact integer counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CountSeries {
    pub n: u32,
    pub points: Vec<SeriesPoint>,
}

/// Least-squares polynomial fit. Coefficients are in the original
/// variable `m`, highest degree first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyFit {
    pub degree: usize,
    pub coefficients: Vec<f64>,
    pub residual_norm: f64,
    pub leading_coefficient: f64,
    /// Condition number of the (rescaled) design matrix.
    pub condition_diagnostic: f64,
}

impl PolyFit {
    /// Evaluate the fitted polynomial at `m`.
    pub fn eval(&self, m: f64) -> f64 {
        self.coefficients.iter().fold(0.0, |acc, &c| acc * m + c)
    }
}

/// Exact `c_n(m)` for `m = 1..=max_m`, using the cheapest exact engine
/// per point: the O(m) three-party engine for `n = 3`, enumeration
/// otherwise. Two-party points are cross-checked against `m(m+1)/2` and
/// three-party points are spot-checked against the enumerator.
pub fn generate_series(n: u32, max_m: u64, enumerator: &Enumerator) -> Result<CountSeries> {
    if n < 1 {
        return Err(Error::domain("party count n", n));
    }
    if max_m < 1 {
        return Err(Error::domain("series length max_m", max_m));
    }
    let mut points = Vec::with_capacity(max_m as usize);
    for m in 1..=max_m {
        let (count, engine) = match n {
            3 => (BigUint::from(three_party::c3_fast(m)?), Engine::Fast3),
            _ => (enumerator.count_fixpoint_tuples(n, m)?, Engine::Oracle),
        };
        if n == 2 {
            debug_assert_eq!(count, two_party::h2_closed_form(m)?.c2);
        }
        if n == 3 && m <= 10 {
            debug_assert_eq!(count, enumerator.count_fixpoint_tuples(3, m)?);
        }
        points.push(SeriesPoint { m, count, engine });
    }
    Ok(CountSeries { n, points })
}

/// Plain OLS fit of the series by a degree-`degree` polynomial.
///
/// The regressor is rescaled to `m / M` before solving (raw Vandermonde
/// systems at degree 5 over [1, 30] are badly conditioned) and the
/// coefficients are mapped back to the original variable.
pub fn polyfit_least_squares(series: &CountSeries, degree: usize) -> Result<PolyFit> {
    let n_points = series.points.len();
    if n_points < degree + 1 {
        return Err(Error::Underdetermined {
            points: n_points,
            unknowns: degree + 1,
        });
    }
    let scale = series.points.iter().map(|p| p.m).max().unwrap() as f64;
    let design = DMatrix::from_fn(n_points, degree + 1, |i, j| {
        (series.points[i].m as f64 / scale).powi((degree - j) as i32)
    });
    let target = DVector::from_fn(n_points, |i, _| {
        series.points[i]
            .count
            .to_f64()
            .expect("count representable as f64")
    });

    let svd = design.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    let sigma_min = svd.singular_values.min();
    let condition = sigma_max / sigma_min;
    if !condition.is_finite() || condition > 1e14 {
        return Err(Error::Singular { condition });
    }
    let scaled_coeffs = svd
        .solve(&target, 0.0)
        .map_err(|_| Error::Singular { condition })?;

    let residual_norm = (&design * &scaled_coeffs - &target).norm();
    let coefficients: Vec<f64> = scaled_coeffs
        .iter()
        .enumerate()
        .map(|(j, &b)| b / scale.powi((degree - j) as i32))
        .collect();
    Ok(PolyFit {
        degree,
        leading_coefficient: coefficients[0],
        coefficients,
        residual_norm,
        condition_diagnostic: condition,
    })
}

/// Leading coefficients printed in the source analysis, 4 significant
/// figures, for `n = 2..=5`.
pub fn published_leading(n: u32) -> Option<f64> {
    match n {
        2 => Some(0.5),
        3 => Some(0.3334),
        4 => Some(0.2499),
        5 => Some(0.1995),
        _ => None,
    }
}

/// One row of the conjecture comparison table.
#[derive(Debug, Clone, Serialize)]
pub struct ConjectureRow {
    pub n: u32,
    pub fitted_leading: f64,
    pub conjectured: f64,
    pub deviation: f64,
    /// `-log2(a_n)`: the entropy limit the fit implies.
    pub implied_limit_bits: f64,
    pub conjectured_limit_bits: f64,
    pub published_leading: Option<f64>,
}

/// Fit each requested `n` on an `max_m`-point series and compare against
/// the `1/n` conjecture.
pub fn conjecture_report(
    ns: &[u32],
    max_m: u64,
    enumerator: &Enumerator,
) -> Result<Vec<ConjectureRow>> {
    let mut rows = Vec::new();
    for &n in ns {
        let series = generate_series(n, max_m, enumerator)?;
        let fit = polyfit_least_squares(&series, n as usize)?;
        let a = fit.leading_coefficient;
        let conjectured = 1.0 / n as f64;
        rows.push(ConjectureRow {
            n,
            fitted_leading: a,
            conjectured,
            deviation: (a - conjectured).abs(),
            implied_limit_bits: -a.log2(),
            conjectured_limit_bits: (n as f64).log2(),
            published_leading: published_leading(n),
        });
    }
    Ok(rows)
}
