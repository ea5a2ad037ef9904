//! Exact rational money arithmetic.
//!
//! Every quantity in the solver is a `num_rational::BigRational`; nothing in
//! the solver path ever touches floating point. `Amount` wraps a rational
//! that is known to be nonnegative (debts, portfolios, injections), `Value`
//! wraps a signed rational (book values).

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Nonnegative exact rational quantity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Amount(Rational);

/// Signed exact rational book value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Value(Rational);

/// Error for a negative quantity where an `Amount` is required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeAmount(pub String);

impl fmt::Display for NegativeAmount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "negative amount: {}", self.0)
    }
}

impl std::error::Error for NegativeAmount {}

impl Amount {
    pub fn new(r: Rational) -> Result<Self, NegativeAmount> {
        if r.is_negative() {
            Err(NegativeAmount(format_rational(&r)))
        } else {
            Ok(Amount(r))
        }
    }

    pub fn zero() -> Self {
        Amount(Rational::zero())
    }

    pub fn from_int(n: u64) -> Self {
        Amount(Rational::from_integer(BigInt::from(n)))
    }

    /// n/d with d > 0; panics on a negative or undefined ratio.
    pub fn from_ratio(n: i64, d: u64) -> Self {
        assert!(d > 0, "zero denominator");
        let r = Rational::new(BigInt::from(n), BigInt::from(d));
        Amount::new(r).expect("negative ratio")
    }

    /// Positive part `(r)^+`, the clamp used throughout shortfall arithmetic.
    pub fn pos_part(r: &Rational) -> Self {
        if r.is_positive() {
            Amount(r.clone())
        } else {
            Amount::zero()
        }
    }

    pub fn ratio(&self) -> &Rational {
        &self.0
    }

    pub fn into_ratio(self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `self - other` when nonnegative.
    pub fn checked_sub(&self, other: &Amount) -> Option<Amount> {
        if self.0 >= other.0 {
            Some(Amount(&self.0 - &other.0))
        } else {
            None
        }
    }
}

impl Value {
    pub fn new(r: Rational) -> Self {
        Value(r)
    }

    pub fn from_int(n: i64) -> Self {
        Value(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: u64) -> Self {
        assert!(d > 0, "zero denominator");
        Value(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn ratio(&self) -> &Rational {
        &self.0
    }

    pub fn into_ratio(self) -> Rational {
        self.0
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl From<Amount> for Value {
    fn from(a: Amount) -> Value {
        Value(a.0)
    }
}

impl Add for Amount {
    type Output = Amount;
    fn add(self, rhs: Amount) -> Amount {
        Amount(self.0 + rhs.0)
    }
}

impl Add<&Amount> for Amount {
    type Output = Amount;
    fn add(self, rhs: &Amount) -> Amount {
        Amount(self.0 + &rhs.0)
    }
}

impl AddAssign<&Amount> for Amount {
    fn add_assign(&mut self, rhs: &Amount) {
        self.0 += &rhs.0;
    }
}

impl Sum for Amount {
    fn sum<I: Iterator<Item = Amount>>(iter: I) -> Amount {
        let mut acc = Amount::zero();
        for a in iter {
            acc += &a;
        }
        acc
    }
}

impl fmt::Debug for Amount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl fmt::Display for Amount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

/// Error parsing a rational literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal: {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `"3"`, `"-3"`, `"2/7"`, or an exact decimal like `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    let err = || ParseRationalError(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let i = if int_part == "-" || int_part.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(int_part).map_err(|_| err())?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let f = BigInt::from_str(frac_part).map_err(|_| err())?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mag = i.abs() * &scale + f;
        let signed = if negative { -mag } else { mag };
        return Ok(Rational::new(signed, scale));
    }
    let n = BigInt::from_str(s).map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

pub fn parse_amount(text: &str) -> Result<Amount, ParseRationalError> {
    let r = parse_rational(text)?;
    Amount::new(r).map_err(|_| ParseRationalError(text.to_string()))
}

/// Canonical lossless form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Human form: the exact fraction plus an approximate decimal.
pub fn format_rational_human(r: &Rational) -> String {
    if r.denom().is_one() {
        return r.numer().to_string();
    }
    let approx = r.to_f64().unwrap_or(f64::NAN);
    format!("{} (~{:.6})", format_rational(r), approx)
}

pub fn rational_from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
