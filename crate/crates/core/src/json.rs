//! Serde helpers that print exact big integers as plain JSON numbers.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Serialize, Serializer};

fn number<S: Serializer>(digits: String, serializer: S) -> Result<S::Ok, S::Error> {
    serde_json::Number::from_str(&digits)
        .map_err(serde::ser::Error::custom)?
        .serialize(serializer)
}

pub fn big_uint<S: Serializer>(value: &BigUint, serializer: S) -> Result<S::Ok, S::Error> {
    number(value.to_string(), serializer)
}

pub fn big_int<S: Serializer>(value: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    number(value.to_string(), serializer)
}

/// `x` to 12 significant digits, positional when that stays readable.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        let text = format!("{x:.decimals$}");
        // the rounding may carry into a new digit; re-round once if so
        let exponent_after = text.parse::<f64>().unwrap_or(x).abs().log10().floor() as i32;
        if exponent_after != exponent {
            let decimals = (11 - exponent_after).max(0) as usize;
            return format!("{x:.decimals$}");
        }
        text
    } else {
        format!("{x:.11e}")
    }
}

pub fn float12<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    number(sig12(*value), serializer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_examples() {
        assert_eq!(sig12(8.991665600468108), "8.99166560047");
        assert_eq!(sig12(19.327), "19.3270000000");
        assert_eq!(sig12(0.5), "0.500000000000");
        assert_eq!(sig12(-0.08899), "-0.0889900000000");
        assert_eq!(sig12(9.9999999999999), "10.0000000000");
        assert_eq!(sig12(1.5e20), "1.50000000000e20");
        assert_eq!(sig12(0.0), "0");
    }
}
