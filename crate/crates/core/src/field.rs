//! Exact scalars over a prime field `F_p` or the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest accepted characteristic. Products of residues fit in `u128`, the
/// bound only keeps primality testing by trial division cheap.
pub const MAX_PRIME: u64 = u32::MAX as u64;

const MAX_SCALAR_DIGITS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u64),
    Rationals,
}

/// A field element. Prime-field residues carry their modulus so that
/// arithmetic needs no side context; mixing fields is a logic error and
/// panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u64, modulus: u64 },
    Rational(BigRational),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % modulus as u128) as u64;
        }
        base = ((base as u128 * base as u128) % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidField(format!("Fp:{p}")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rationals => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Mod {
                value: 0,
                modulus: *p,
            },
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Mod {
                value: n.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            FieldSpec::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::Mod {
                    value: r.to_u64().expect("residue below modulus"),
                    modulus: *p,
                }
            }
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
        }
    }

    /// Maps a rational into the field. Fails over `F_p` when the denominator
    /// is divisible by `p`.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rational(q.clone())),
            FieldSpec::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                let inv = den.inv().ok_or_else(|| Error::InvalidScalar {
                    text: q.to_string(),
                    reason: format!("denominator vanishes mod {}", self.characteristic()),
                })?;
                Ok(&num * &inv)
            }
        }
    }

    /// Parses `"-3"`, `"7/4"` and similar forms into this field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let q = parse_rational(text)?;
        self.from_rational(&q)
    }
}

/// Parses an optionally signed integer or fraction `a/b` with `b != 0`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = |reason: &str| Error::InvalidScalar {
        text: text.chars().take(64).collect(),
        reason: reason.to_string(),
    };
    if text.len() > MAX_SCALAR_DIGITS {
        return Err(bad("too long"));
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let digits_ok = |s: &str, signed: bool| {
        let body = if signed {
            s.strip_prefix('-').unwrap_or(s)
        } else {
            s
        };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(num, true) {
        return Err(bad("expected an integer numerator"));
    }
    let n = BigInt::from_str(num).map_err(|_| bad("expected an integer numerator"))?;
    let d = match den {
        None => BigInt::one(),
        Some(d) => {
            if !digits_ok(d, false) {
                return Err(bad("expected a positive integer denominator"));
            }
            let d = BigInt::from_str(d).map_err(|_| bad("bad denominator"))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            d
        }
    };
    Ok(BigRational::new(n, d))
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
            FieldSpec::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let p = s
            .strip_prefix("Fp:")
            .filter(|d| !d.is_empty() && d.len() <= 20 && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<u64>().ok())
            .ok_or_else(|| Error::InvalidField(s.chars().take(64).collect()))?;
        FieldSpec::prime(p)
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Mod { modulus, .. } => FieldSpec::Prime(*modulus),
            Scalar::Rational(_) => FieldSpec::Rationals,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
        })
    }

    /// Embeds `±1` into the field of `self`.
    pub fn sign(&self, positive: bool) -> Scalar {
        self.field().from_i64(if positive { 1 } else { -1 })
    }

    pub fn abs_is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, modulus } => *value == 1 || *value == modulus - 1,
            Scalar::Rational(q) => q.abs().is_one(),
        }
    }
}

fn mismatch() -> ! {
    panic!("arithmetic between scalars of different fields")
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, modulus: m2 })
                if modulus == m2 =>
            {
                Scalar::Mod {
                    value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => mismatch(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, modulus: m2 })
                if modulus == m2 =>
            {
                Scalar::Mod {
                    value: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => mismatch(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            Scalar::Rational(q) => Scalar::Rational(-q),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

/// Canonical text form: residues in `0..p`, rationals in lowest terms.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rational(q) => write!(f, "{q}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("Fp:3".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(3));
        assert!("Fp:4".parse::<FieldSpec>().is_err());
        assert!("Fp:1".parse::<FieldSpec>().is_err());
        assert!("Fp:".parse::<FieldSpec>().is_err());
        assert!("Fp:-7".parse::<FieldSpec>().is_err());
        assert!("Fp:99999999999999999999999".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn modular_inverse_and_canonical_form() {
        let f = FieldSpec::Prime(7);
        let three = f.from_i64(3);
        assert_eq!(&three * &three.inv().unwrap(), f.one());
        assert_eq!(f.from_i64(-1).to_string(), "6");
        assert_eq!(f.parse_scalar("1/2").unwrap().to_string(), "4");
        assert!(f.parse_scalar("1/7").is_err());
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn rational_parsing() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.parse_scalar("-6/4").unwrap().to_string(), "-3/2");
        assert_eq!(q.parse_scalar("8/4").unwrap().to_string(), "2");
        for bad in ["", "-", "1/", "/2", "1/0", "1/-2", "a", "1.5", "+1", "1 "] {
            assert!(q.parse_scalar(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn char_two_signs_collapse() {
        let f = FieldSpec::Prime(2);
        assert_eq!(f.from_i64(-1), f.one());
        assert!(f.from_i64(2).is_zero());
    }
}
