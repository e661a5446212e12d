//! Exact rational numbers used for capacities and counts.

use num_traits::{ToPrimitive, Zero};
use std::fmt;

/// Capacities and impression counts.
pub type Rational = num_rational::Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a rational number: {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `3`, `-2`, `2.5` or `7/2`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| err())?;
        let d: i64 = d.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = int.trim_start_matches(['-', '+']);
        if (digits.is_empty() && frac.is_empty()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        if frac.len() > 15 {
            return Err(err());
        }
        let whole: i64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| err())? };
        let scale = 10i64.pow(frac.len() as u32);
        let f: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| err())? };
        let num = whole
            .checked_mul(scale)
            .and_then(|w| w.checked_add(f))
            .ok_or_else(err)?;
        let r = Rational::new(num, scale);
        return Ok(if neg { -r } else { r });
    }
    s.parse::<i64>().map(Rational::from_integer).map_err(|_| err())
}

pub fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| *r.numer() as f64 / *r.denom() as f64)
}

/// Closest rational with the given denominator.
pub fn from_f64_with_denom(x: f64, denom: i64) -> Rational {
    Rational::new((x * denom as f64).round() as i64, denom)
}

pub fn is_negative(r: &Rational) -> bool {
    *r < Rational::zero()
}
