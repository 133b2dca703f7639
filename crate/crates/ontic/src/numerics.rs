//! Exact arithmetic over the ordered field ℚ(√2).
//!
//! Every amplitude and probability in the crate is an element `a + b√2` with
//! `a, b` arbitrary-precision rationals. The representation over the basis
//! `{1, √2}` is unique, so equality is component-wise, and the sign of an
//! element is decidable by comparing `a²` with `2b²`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// The scalar operations the exact simplex needs. Implemented for
/// [`Rational`] and [`QSqrt2`]; both are ordered fields with decidable sign.
pub trait ExactField:
    Clone
    + fmt::Debug
    + fmt::Display
    + Ord
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn checked_div(&self, rhs: &Self) -> Result<Self>;

    fn lt_zero(&self) -> bool {
        *self < Self::zero()
    }

    fn gt_zero(&self) -> bool {
        *self > Self::zero()
    }
}

impl ExactField for Rational {
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }
}

/// An element `rat + irr·√2` of ℚ(√2).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QSqrt2 {
    rat: Rational,
    irr: Rational,
}

impl QSqrt2 {
    pub fn new(rat: Rational, irr: Rational) -> Self {
        QSqrt2 { rat, irr }
    }

    pub fn from_rational(rat: Rational) -> Self {
        QSqrt2 {
            rat,
            irr: Rational::zero(),
        }
    }

    /// `numer/denom` with no √2 part.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(rational(numer, denom))
    }

    pub fn from_integer(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    pub fn sqrt2() -> Self {
        QSqrt2::new(Rational::zero(), Rational::one())
    }

    /// `1/√2 = √2/2`.
    pub fn inv_sqrt2() -> Self {
        QSqrt2::new(Rational::zero(), rational(1, 2))
    }

    pub fn rat(&self) -> &Rational {
        &self.rat
    }

    pub fn irr(&self) -> &Rational {
        &self.irr
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    /// `a - b√2`; the product with `self` is the rational norm `a² - 2b²`.
    pub fn conjugate(&self) -> Self {
        QSqrt2::new(self.rat.clone(), -self.irr.clone())
    }

    pub fn norm(&self) -> Rational {
        &self.rat * &self.rat - Rational::from_integer(2.into()) * &self.irr * &self.irr
    }

    /// Exact sign of the real number `rat + irr·√2`: -1, 0 or +1.
    pub fn sign(&self) -> i8 {
        let s_rat = signum(&self.rat);
        let s_irr = signum(&self.irr);
        if s_irr == 0 {
            return s_rat;
        }
        if s_rat == 0 || s_rat == s_irr {
            return s_irr;
        }
        // Opposite signs: the term with the larger square wins.
        let rat_sq = &self.rat * &self.rat;
        let irr_sq = Rational::from_integer(2.into()) * &self.irr * &self.irr;
        match rat_sq.cmp(&irr_sq) {
            Ordering::Greater => s_rat,
            Ordering::Less => s_irr,
            // a² = 2b² has no rational solution with b ≠ 0.
            Ordering::Equal => unreachable!("√2 is irrational"),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        let norm = self.norm();
        if norm.is_zero() {
            // Only zero has zero norm in ℚ(√2).
            return Err(Error::DivisionByZero);
        }
        let conj = self.conjugate();
        Ok(QSqrt2::new(conj.rat / &norm, conj.irr / &norm))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn min(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Double-precision approximation. Display only; no decision in the crate
    /// is ever taken on this value.
    pub fn to_f64(&self) -> f64 {
        let r = self.rat.to_f64().unwrap_or(f64::NAN);
        let i = self.irr.to_f64().unwrap_or(f64::NAN);
        r + i * std::f64::consts::SQRT_2
    }

    /// Exact value followed by a float approximation, e.g. `1/4 (0.25)`.
    pub fn display_with_approx(&self) -> String {
        if self.is_rational() && self.rat.is_integer() {
            self.to_string()
        } else {
            format!("{} ({:.8})", self, self.to_f64())
        }
    }
}

fn signum(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl ExactField for QSqrt2 {
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        QSqrt2::checked_div(self, rhs)
    }
}

impl From<Rational> for QSqrt2 {
    fn from(r: Rational) -> Self {
        QSqrt2::from_rational(r)
    }
}

impl From<i64> for QSqrt2 {
    fn from(n: i64) -> Self {
        QSqrt2::from_integer(n)
    }
}

impl Zero for QSqrt2 {
    fn zero() -> Self {
        QSqrt2::default()
    }

    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }
}

impl One for QSqrt2 {
    fn one() -> Self {
        QSqrt2::from_integer(1)
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().cmp(&0)
    }
}

impl<'a> Add<&'a QSqrt2> for &QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &'a QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.rat + &rhs.rat, &self.irr + &rhs.irr)
    }
}

impl<'a> Sub<&'a QSqrt2> for &QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &'a QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.rat - &rhs.rat, &self.irr - &rhs.irr)
    }
}

impl<'a> Mul<&'a QSqrt2> for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &'a QSqrt2) -> QSqrt2 {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        let two = Rational::from_integer(2.into());
        QSqrt2::new(
            &self.rat * &rhs.rat + two * &self.irr * &rhs.irr,
            &self.rat * &rhs.irr + &self.irr * &rhs.rat,
        )
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: QSqrt2) -> QSqrt2 {
                (&self).$method(&rhs)
            }
        }

        impl<'a> $tr<&'a QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: &'a QSqrt2) -> QSqrt2 {
                (&self).$method(rhs)
            }
        }

        impl $tr<QSqrt2> for &QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: QSqrt2) -> QSqrt2 {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.rat, -self.irr)
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.rat.clone(), -self.irr.clone())
    }
}

impl AddAssign<&QSqrt2> for QSqrt2 {
    fn add_assign(&mut self, rhs: &QSqrt2) {
        self.rat += &rhs.rat;
        self.irr += &rhs.irr;
    }
}

impl SubAssign<&QSqrt2> for QSqrt2 {
    fn sub_assign(&mut self, rhs: &QSqrt2) {
        self.rat -= &rhs.rat;
        self.irr -= &rhs.irr;
    }
}

impl<'a> Sum<&'a QSqrt2> for QSqrt2 {
    fn sum<I: Iterator<Item = &'a QSqrt2>>(iter: I) -> QSqrt2 {
        iter.fold(QSqrt2::zero(), |acc, x| acc + x)
    }
}

impl Sum<QSqrt2> for QSqrt2 {
    fn sum<I: Iterator<Item = QSqrt2>>(iter: I) -> QSqrt2 {
        iter.fold(QSqrt2::zero(), |acc, x| acc + x)
    }
}

/// Canonical text form: `a`, `b*sqrt2`, or `a + b*sqrt2` / `a - b*sqrt2`,
/// with `sqrt2` standing alone when `|b| = 1`.
impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn irr_term(b: &Rational) -> String {
            if b.is_one() {
                "sqrt2".to_string()
            } else {
                format!("{}*sqrt2", b)
            }
        }
        match (self.rat.is_zero(), self.irr.is_zero()) {
            (_, true) => write!(f, "{}", self.rat),
            (true, false) => {
                if self.irr.is_negative() {
                    write!(f, "-{}", irr_term(&-self.irr.clone()))
                } else {
                    write!(f, "{}", irr_term(&self.irr))
                }
            }
            (false, false) => {
                if self.irr.is_negative() {
                    write!(f, "{} - {}", self.rat, irr_term(&-self.irr.clone()))
                } else {
                    write!(f, "{} + {}", self.rat, irr_term(&self.irr))
                }
            }
        }
    }
}

/// Parses sums of products such as `1/2`, `sqrt2/2`, `1/3 + sqrt2/7`,
/// `-3/4*sqrt2` or `1/sqrt2`. Factors are unsigned integers or `sqrt2`
/// (also written `√2`), joined by `*` and `/`; terms are joined by `+`/`-`.
impl FromStr for QSqrt2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExprParser::new(s).parse()
    }
}

struct ExprParser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn new(input: &'a str) -> Self {
        ExprParser {
            input,
            chars: input.chars().collect(),
            pos: 0,
        }
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        Error::ParseNumber {
            input: self.input.to_string(),
            reason: reason.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<QSqrt2> {
        if self.peek().is_none() {
            return Err(self.err("empty input"));
        }
        let mut total = QSqrt2::zero();
        let mut first = true;
        loop {
            let negate = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    false
                }
                Some('-') => {
                    self.pos += 1;
                    true
                }
                None => break,
                Some(_) if first => false,
                Some(c) => return Err(self.err(format!("expected `+` or `-`, found `{c}`"))),
            };
            first = false;
            let term = self.parse_term()?;
            total = if negate { total - term } else { total + term };
        }
        Ok(total)
    }

    fn parse_term(&mut self) -> Result<QSqrt2> {
        let mut value = self.parse_factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    value = value * self.parse_factor()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let divisor = self.parse_factor()?;
                    value = value
                        .checked_div(&divisor)
                        .map_err(|_| self.err("division by zero"))?;
                }
                _ => return Ok(value),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<QSqrt2> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let n: BigInt = digits.parse().map_err(|_| self.err("bad integer"))?;
                Ok(QSqrt2::from_rational(Rational::from_integer(n)))
            }
            Some('√') => {
                self.pos += 1;
                self.expect_literal("2")?;
                Ok(QSqrt2::sqrt2())
            }
            Some('s') => {
                self.expect_literal("sqrt2")?;
                Ok(QSqrt2::sqrt2())
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn expect_literal(&mut self, lit: &str) -> Result<()> {
        for expected in lit.chars() {
            if self.chars.get(self.pos) != Some(&expected) {
                return Err(self.err(format!("expected `{lit}`")));
            }
            self.pos += 1;
        }
        Ok(())
    }
}

impl Serialize for QSqrt2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QSqrt2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A value of ℚ(√2) known to lie in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Probability(QSqrt2);

impl Probability {
    pub fn new(value: QSqrt2) -> Result<Self> {
        if value.sign() < 0 || value > QSqrt2::one() {
            return Err(Error::ParseNumber {
                input: value.to_string(),
                reason: "probability outside [0, 1]".into(),
            });
        }
        Ok(Probability(value))
    }

    pub fn zero() -> Self {
        Probability(QSqrt2::zero())
    }

    pub fn one() -> Self {
        Probability(QSqrt2::one())
    }

    pub fn value(&self) -> &QSqrt2 {
        &self.0
    }

    pub fn into_value(self) -> QSqrt2 {
        self.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<Probability> for QSqrt2 {
    fn from(p: Probability) -> Self {
        p.0
    }
}
