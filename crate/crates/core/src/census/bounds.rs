//! Leading-term bound calculators.
//!
//! None of the error terms (`ε_k`, `ε'_s`) has an effective value, so every
//! exponent here is a leading term only. The one exception is the exact
//! round-trip error `η` of `s(x) = (1 + η) log₂(x) / 3` at the points `x_s`,
//! which is a plain function of `s`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

pub const ERROR_TERMS: &str = "leading term only; error terms are not modeled";
pub const ASYMPTOTIC_CLAIM: &str = "asymptotic lower bound; not verifiable at finite s";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("x_s vanishes for s={0}; need s >= 2")]
    Undefined(u32),
}

/// Leading terms of `log₂ f(2^k)` for the number of groups of order `2^k`.
#[derive(Debug, Clone, Serialize)]
pub struct HigmanBounds {
    pub k: u32,
    #[serde(serialize_with = "crate::json::float12")]
    pub lower_log2: f64,
    #[serde(serialize_with = "crate::json::float12")]
    pub upper_log2: f64,
    pub error_term: &'static str,
}

/// `(2/27) k³` and `(2/15) k³`.
pub fn higman_bounds(k: u32) -> HigmanBounds {
    let k3 = f64::from(k).powi(3);
    HigmanBounds {
        k,
        lower_log2: 2.0 / 27.0 * k3,
        upper_log2: 2.0 / 15.0 * k3,
        error_term: ERROR_TERMS,
    }
}

/// `x_s = 2^(3s−2) (s−1)²`, the Euler characteristic of the regular family.
pub fn x_s(s: u32) -> Result<BigUint, BoundsError> {
    if s < 2 {
        return Err(BoundsError::Undefined(s));
    }
    Ok((BigUint::one() << (3 * s - 2)) * BigUint::from((s - 1) * (s - 1)))
}

fn ln_x_s(s: u32) -> f64 {
    f64::from(3 * s - 2) * std::f64::consts::LN_2 + 2.0 * f64::from(s - 1).ln()
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsRow {
    pub s: u32,
    #[serde(serialize_with = "crate::json::big_uint")]
    pub x: BigUint,
    #[serde(serialize_with = "crate::json::big_uint")]
    pub y: BigUint,
    /// `2 s³`, the leading term of `B s³` at `B = 2`.
    #[serde(serialize_with = "crate::json::big_uint")]
    pub log2_h_lower: BigUint,
    /// `(18/5) s³`.
    #[serde(serialize_with = "crate::json::float12")]
    pub log2_h_upper: f64,
    /// `(2/9)(ln x)³`, the exponent of 2 in the main lower bound.
    #[serde(serialize_with = "crate::json::float12")]
    pub thm1_rhs_log2: f64,
    /// `ln` of `y^((2/13)(ln y)²)`.
    #[serde(serialize_with = "crate::json::float12")]
    pub thm1_rhs_ln: f64,
    /// `ln` of `y^(77 y²)`.
    #[serde(serialize_with = "crate::json::float12")]
    pub catanese_log: f64,
    /// `ln` of `y^((1/5) ln y)`.
    #[serde(serialize_with = "crate::json::float12")]
    pub manetti_log: f64,
    /// `3s / log₂ x_s − 1`.
    #[serde(serialize_with = "crate::json::float12")]
    pub eta: f64,
}

pub fn theorem_bounds(s: u32) -> Result<BoundsRow, BoundsError> {
    let x = x_s(s)?;
    let y = &x * 8u32;
    let ln_x = ln_x_s(s);
    let ln_y = ln_x + 3.0 * std::f64::consts::LN_2;
    let s3 = f64::from(s).powi(3);
    let y_f = y.to_f64().expect("finite for s <= 300");
    Ok(BoundsRow {
        s,
        log2_h_lower: BigUint::from(2u32) * BigUint::from(s).pow(3),
        log2_h_upper: 18.0 / 5.0 * s3,
        thm1_rhs_log2: 2.0 / 9.0 * ln_x.powi(3),
        thm1_rhs_ln: 2.0 / 13.0 * ln_y.powi(3),
        catanese_log: 77.0 * y_f * y_f * ln_y,
        manetti_log: 0.2 * ln_y * ln_y,
        eta: 3.0 * f64::from(s) / (ln_x / std::f64::consts::LN_2) - 1.0,
        x,
        y,
    })
}

pub const CSV_HEADER: &str = "s,x,y,log2_h_lower,thm1_rhs_ln,catanese_log,manetti_log";

impl BoundsRow {
    pub fn csv_line(&self) -> String {
        use crate::json::sig12;
        format!(
            "{},{},{},{},{},{},{}",
            self.s,
            self.x,
            self.y,
            self.log2_h_lower,
            sig12(self.thm1_rhs_ln),
            sig12(self.catanese_log),
            sig12(self.manetti_log)
        )
    }
}

/// Exponents of `y` in the three bounds, side by side.
#[derive(Debug, Clone, Serialize)]
pub struct ReferenceBounds {
    #[serde(serialize_with = "crate::json::float12")]
    pub y: f64,
    /// `(1/5) ln y`
    #[serde(serialize_with = "crate::json::float12")]
    pub manetti_exponent: f64,
    /// `(2/13)(ln y)²`
    #[serde(serialize_with = "crate::json::float12")]
    pub this_exponent: f64,
    /// `77 y²`
    #[serde(serialize_with = "crate::json::float12")]
    pub catanese_exponent: f64,
    pub ordering_holds: bool,
}

pub fn reference_bounds(y: f64) -> ReferenceBounds {
    assert!(y >= 2.0, "reference bounds need y >= 2");
    let ln_y = y.ln();
    let manetti_exponent = 0.2 * ln_y;
    let this_exponent = 2.0 / 13.0 * ln_y * ln_y;
    let catanese_exponent = 77.0 * y * y;
    ReferenceBounds {
        y,
        manetti_exponent,
        this_exponent,
        catanese_exponent,
        ordering_holds: manetti_exponent < this_exponent && this_exponent < catanese_exponent,
    }
}

/// Least integer `y0 >= 2` such that the ordering holds for every integer
/// `y` in `[y0, limit]`.
pub fn ordering_threshold(limit: u64) -> Option<u64> {
    let mut threshold = None;
    for y in (2..=limit).rev() {
        if reference_bounds(y as f64).ordering_holds {
            threshold = Some(y);
        } else {
            break;
        }
    }
    threshold
}

/// Rational bounds `lo <= ln 2 <= hi` from `ln 2 = Σ 1/(k 2^k)`, whose tail
/// after `n` terms is at most `1/((n+1) 2^n)`.
pub fn ln2_interval(terms: u32) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    for k in 1..=terms {
        lo += BigRational::new(BigInt::one(), BigInt::from(k) << k as usize);
    }
    let tail = BigRational::new(BigInt::one(), BigInt::from(terms + 1) << terms as usize);
    let hi = &lo + tail;
    (lo, hi)
}

/// A certified check `factor · (ln 2)^power < bound`.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantCheck {
    pub label: String,
    /// The value to 12 significant digits; both interval ends agree on it.
    pub value: String,
    #[serde(serialize_with = "crate::json::float12")]
    pub lower: f64,
    #[serde(serialize_with = "crate::json::float12")]
    pub upper: f64,
    pub bound: u32,
    pub digits_certified: bool,
    pub pass: bool,
}

pub fn constant_check(factor: u32, power: u32, bound: u32) -> ConstantCheck {
    let (lo, hi) = ln2_interval(80);
    let f = BigRational::from_integer(BigInt::from(factor));
    let lower = &f * num_traits::pow(lo, power as usize);
    let upper = &f * num_traits::pow(hi, power as usize);
    let b = BigRational::from_integer(BigInt::from(bound));
    let lower_f = lower.to_f64().expect("small");
    let upper_f = upper.to_f64().expect("small");
    let lower_text = crate::json::sig12(lower_f);
    let pass = lower > BigRational::zero() && upper < b;
    ConstantCheck {
        label: format!("{factor}(ln2)^{power} < {bound}"),
        digits_certified: lower_text == crate::json::sig12(upper_f),
        value: lower_text,
        lower: lower_f,
        upper: upper_f,
        bound,
        pass,
    }
}

/// `27(ln 2)³ < 9` and `27(ln 2)² < 13`.
pub fn constant_checks() -> [ConstantCheck; 2] {
    [constant_check(27, 3, 9), constant_check(27, 2, 13)]
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub error_terms: &'static str,
    pub asymptotic_claim: &'static str,
    pub b_range_leading: [f64; 2],
    pub constants: [ConstantCheck; 2],
    pub higman: Vec<HigmanBounds>,
    pub rows: Vec<BoundsRow>,
    pub x_strictly_increasing: bool,
    pub eta_abs_strictly_decreasing: bool,
    pub reference_ordering_threshold: Option<u64>,
}

/// Rows for `s` in the range; values of `s` below 2 are skipped.
pub fn bounds_report(s_range: std::ops::RangeInclusive<u32>) -> BoundsReport {
    let rows: Vec<BoundsRow> = s_range
        .filter(|&s| s >= 2)
        .map(|s| theorem_bounds(s).expect("s >= 2"))
        .collect();
    let x_strictly_increasing = rows.windows(2).all(|w| w[0].x < w[1].x);
    let eta_abs_strictly_decreasing = rows.windows(2).all(|w| w[1].eta.abs() < w[0].eta.abs());
    BoundsReport {
        error_terms: ERROR_TERMS,
        asymptotic_claim: ASYMPTOTIC_CLAIM,
        b_range_leading: [2.0, 3.6],
        constants: constant_checks(),
        higman: rows.iter().map(|r| higman_bounds(3 * r.s)).collect(),
        rows,
        x_strictly_increasing,
        eta_abs_strictly_decreasing,
        reference_ordering_threshold: ordering_threshold(1 << 20),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn higman_examples() {
        let b = higman_bounds(3);
        assert!((b.lower_log2 - 2.0).abs() < 1e-12 && (b.upper_log2 - 3.6).abs() < 1e-12);
        let b = higman_bounds(6);
        assert!((b.lower_log2 - 16.0).abs() < 1e-12 && (b.upper_log2 - 28.8).abs() < 1e-12);
    }

    #[test]
    fn x_s_examples() {
        let row = theorem_bounds(4).unwrap();
        assert_eq!(row.x, BigUint::from(9216u32));
        assert_eq!(row.y, BigUint::from(73728u32));
        assert_eq!(row.log2_h_lower, BigUint::from(128u32));
        assert_eq!(theorem_bounds(1).unwrap_err(), BoundsError::Undefined(1));
    }

    #[test]
    fn ln2_interval_brackets_the_float() {
        let (lo, hi) = ln2_interval(60);
        assert!(lo.to_f64().unwrap() <= std::f64::consts::LN_2);
        assert!(hi.to_f64().unwrap() >= std::f64::consts::LN_2);
        assert!((hi - lo).to_f64().unwrap() < 1e-18);
    }

    #[test]
    fn constant_checks_pass_with_12_digits() {
        let [cubic, square] = constant_checks();
        assert!(cubic.pass && cubic.digits_certified);
        assert_eq!(cubic.value, "8.99166560370");
        assert!(square.pass && square.digits_certified);
        assert_eq!(square.value, "12.9722313758");
    }

    #[test]
    fn reference_bounds_at_y_73728() {
        let r = reference_bounds(73728.0);
        assert!((r.this_exponent - 19.3265162673).abs() < 1e-9);
        assert!(r.ordering_holds);
        // (2/13)(ln y)² > (1/5) ln y exactly when ln y > 13/10
        assert_eq!(ordering_threshold(10_000), Some(4));
    }

    #[test]
    fn csv_line_format() {
        let line = theorem_bounds(2).unwrap().csv_line();
        assert!(line.starts_with("2,16,128,16,"), "{line}");
        assert_eq!(line.split(',').count(), CSV_HEADER.split(',').count());
    }

    #[test]
    fn eta_examples() {
        assert!((theorem_bounds(2).unwrap().eta - 0.5).abs() < 1e-12);
        assert!(theorem_bounds(3).unwrap().eta.abs() < 1e-12);
        assert!(theorem_bounds(4).unwrap().eta < 0.0);
    }
}
