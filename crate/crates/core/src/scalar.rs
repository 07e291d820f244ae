//! Exact rational scalars together with their p-adic data: valuations,
//! integrality/unit classification and the places of Q they live at.
//!
//! Norms are never materialized as floating values. A finite-place norm
//! p^(-a) is always reported through its integer exponent `a` (a
//! [`Valuation`]), which keeps every comparison exact.

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always reduced with a positive denominator.
/// The canonical zero is 0/1. This is the scalar type of every matrix.
pub type Rational = num::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat_int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `num/den`; panics on a zero denominator.
pub fn rat<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Canonical string form: `"num"` when the denominator is one, otherwise
/// `"num/den"` with `den > 0` and the fraction reduced.
pub fn rational_to_string(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"num"` or `"num/den"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let (value, decimal) = parse_rational_or_decimal(s)?;
    if decimal {
        return Err(Error::Parse(format!(
            "decimal literal {s:?} is not valid here; use num/den"
        )));
    }
    Ok(value)
}

/// Parses `"num"`, `"num/den"`, or a decimal literal such as `"1.25"` or
/// `"-3.5e2"`. Decimal literals are converted exactly using a power-of-ten
/// denominator; the returned flag reports whether that conversion happened.
pub fn parse_rational_or_decimal(s: &str) -> Result<(Rational, bool)> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok((Rational::new(num, den), false));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok((Rational::from_integer(n), false));
    }
    parse_decimal(s).map(|r| (r, true))
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("cannot parse {s:?} as a rational"));
    let (mantissa, exponent) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    let numer: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined.parse().map_err(|_| bad())?
    };
    let shift = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        Rational::from_integer(numer * ten.pow(shift as u32))
    } else {
        Rational::new(numer, ten.pow((-shift) as u32))
    };
    Ok(value * Rational::from_integer(BigInt::from(sign)))
}

/// Additive p-adic valuation. `Infinite` is reserved for zero, so that
/// max-of-norms logic treats vanishing minors as norm 0 automatically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }

    /// Valuation of the reciprocal; undefined (panics) for zero.
    pub fn neg(&self) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(-v),
            Valuation::Infinite => panic!("cannot negate the valuation of zero"),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Valuation::*;
        match (self, other) {
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_i64(*v),
            Valuation::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Valuation;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or the string \"inf\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Valuation, E> {
                Ok(Valuation::Finite(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Valuation, E> {
                Ok(Valuation::Finite(v as i64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Valuation, E> {
                if v == "inf" {
                    Ok(Valuation::Infinite)
                } else {
                    v.parse().map(Valuation::Finite).map_err(de::Error::custom)
                }
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// A place of Q: either a finite prime or the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl Place {
    /// Builds a finite place, verifying primality deterministically.
    pub fn finite(p: u64) -> Result<Place> {
        ensure_prime(p)?;
        Ok(Place::Finite(p))
    }

    /// Parses `"inf"` (or `"real"`) for the real place, otherwise a prime.
    pub fn parse(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "infinity" | "real" | "oo" => Ok(Place::Infinite),
            other => {
                let p: u64 = other
                    .parse()
                    .map_err(|_| Error::Parse(format!("cannot parse place {other:?}")))?;
                Place::finite(p)
            }
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

/// Deterministic Miller-Rabin primality test, valid for all `u64` inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // This witness set is deterministic for every n below 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub(crate) fn ensure_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::NonPrime(p))
    }
}

/// Exponent of p in a nonzero integer.
fn int_valuation(x: &BigInt, p: u64) -> i64 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut cur = x.abs();
    loop {
        let (q, r) = num::Integer::div_rem(&cur, &p);
        if !r.is_zero() {
            return v;
        }
        cur = q;
        v += 1;
    }
}

/// The exponent `a` when `x` is written `(m'/n') * p^a` with `m'`, `n'`
/// coprime to `p`. Zero gets `Infinite`. The p-adic norm of `x` is `p^(-a)`.
pub fn padic_valuation(x: &Rational, p: u64) -> Result<Valuation> {
    ensure_prime(p)?;
    Ok(padic_valuation_unchecked(x, p))
}

/// Same as [`padic_valuation`] but skips the primality check; for internal
/// hot paths where the prime was validated once up front.
pub(crate) fn padic_valuation_unchecked(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    // Numerator and denominator are coprime, so at most one carries p.
    Valuation::Finite(int_valuation(x.numer(), p) - int_valuation(x.denom(), p))
}

/// Position of a rational relative to the unit ball of Q_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadicClass {
    /// Valuation zero: on the unit circle of Z_p.
    Unit,
    /// Positive valuation (zero included): inside the unit ball.
    NonUnitInteger,
    /// Negative valuation: outside Z_p.
    NonInteger,
}

pub fn classify_padic(x: &Rational, p: u64) -> Result<PadicClass> {
    let v = padic_valuation(x, p)?;
    Ok(match v {
        Valuation::Finite(0) => PadicClass::Unit,
        Valuation::Finite(a) if a < 0 => PadicClass::NonInteger,
        _ => PadicClass::NonUnitInteger,
    })
}

/// True when the rational lies in Z_p (valuation >= 0, zero included).
pub fn is_padic_integer(x: &Rational, p: u64) -> bool {
    padic_valuation_unchecked(x, p) >= Valuation::Finite(0)
}

/// True when the rational is a p-adic unit (valuation exactly 0).
pub fn is_padic_unit(x: &Rational, p: u64) -> bool {
    padic_valuation_unchecked(x, p) == Valuation::Finite(0)
}
