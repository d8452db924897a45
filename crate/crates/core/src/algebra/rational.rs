//! Exact rational scalars.
//!
//! All combinatorial and algebraic computation in this crate runs over
//! arbitrary-precision rationals; floating point appears only in the quantum
//! module. `num_rational::BigRational` already maintains the invariants we
//! need (always reduced, positive denominator), so this module only adds
//! construction helpers and the `"num/den"` string form used by every JSON
//! surface.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};

pub type Rational = num_rational::BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `1 / d` for a positive count `d`.
pub fn rat_recip(d: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(d))
}

/// Canonical string form, always `"num/den"` with a positive denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer `"num"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| crate::error::Error::Domain(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| crate::error::Error::Domain(format!("bad rational denominator in {s:?}")))?;
    if den.is_zero() {
        return domain(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(num, den))
}

/// Nearest rational with denominator 2^64.
///
/// This is the single float-ingestion point: statistics produced by the
/// quantum module are snapped onto this grid before any exact check runs.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return domain(format!("cannot ingest non-finite float {x}"));
    }
    let scale = 2f64.powi(64);
    let scaled = (x * scale).round();
    let numer = BigInt::from_f64_round(scaled)
        .ok_or_else(|| crate::error::Error::Domain(format!("float {x} out of range")))?;
    Ok(Rational::new(numer, BigInt::one() << 64u32))
}

trait FromF64Round: Sized {
    fn from_f64_round(x: f64) -> Option<Self>;
}

impl FromF64Round for BigInt {
    fn from_f64_round(x: f64) -> Option<Self> {
        num_traits::FromPrimitive::from_f64(x)
    }
}

/// Exact rational to nearest f64 (used only at output boundaries).
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back through a quotient of truncated parts; desk-scale values
        // never take this path.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// |r| <= bound for a rational bound.
pub fn within(r: &Rational, bound: &Rational) -> bool {
    r.abs() <= *bound
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["-3/8", "1/2", "7/1", "0/1", "-12/5"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert_eq!(format_rational(&parse_rational("4").unwrap()), "4/1");
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn float_ingestion_hits_the_2_64_grid() {
        let half = rational_from_f64(0.5).unwrap();
        assert_eq!(half, rat(1, 2));
        // denominator divides 2^64 after reduction
        let third = rational_from_f64(1.0 / 3.0).unwrap();
        let grid = BigInt::one() << 64u32;
        assert!((&grid % third.denom()).is_zero());
        assert!((rational_to_f64(&third) - 1.0 / 3.0).abs() < 1e-18);
        assert!(rational_from_f64(f64::NAN).is_err());
    }
}
