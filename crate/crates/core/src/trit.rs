//! Ternary digits and numbers.
//!
//! Digit vectors are stored little-endian (index = weight) and rendered
//! most-significant digit first. Unbalanced literals may carry a `0t`
//! prefix (`0t21` is seven); balanced literals use `T` for the digit -1
//! (`10T` is eight).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A digit of unbalanced ternary, 0, 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Trit(u8);

impl Trit {
    pub const ZERO: Trit = Trit(0);
    pub const ONE: Trit = Trit(1);
    pub const TWO: Trit = Trit(2);
    pub const ALL: [Trit; 3] = [Trit::ZERO, Trit::ONE, Trit::TWO];

    pub fn new(value: i64) -> Result<Self> {
        match value {
            0..=2 => Ok(Trit(value as u8)),
            _ => Err(Error::InvalidTrit(value)),
        }
    }

    #[inline]
    pub const fn value(self) -> u8 {
        self.0
    }

    /// Builds a trit from a value the caller has already range-checked.
    #[inline]
    pub(crate) const fn from_u8_unchecked(value: u8) -> Self {
        debug_assert!(value < 3);
        Trit(value)
    }

    #[inline]
    pub fn and(self, other: Trit) -> Trit {
        t_and(self, other)
    }

    #[inline]
    pub fn or(self, other: Trit) -> Trit {
        t_or(self, other)
    }
}

impl std::ops::Not for Trit {
    type Output = Trit;

    fn not(self) -> Trit {
        t_not(self)
    }
}

impl TryFrom<u8> for Trit {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        Trit::new(value as i64)
    }
}

impl From<Trit> for u8 {
    fn from(t: Trit) -> u8 {
        t.0
    }
}

impl fmt::Display for Trit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ternary conjunction: `min(a, b)`.
#[inline]
pub fn t_and(a: Trit, b: Trit) -> Trit {
    a.min(b)
}

/// Ternary disjunction: `max(a, b)`.
#[inline]
pub fn t_or(a: Trit, b: Trit) -> Trit {
    a.max(b)
}

/// Ternary negation: `2 - a`.
#[inline]
pub fn t_not(a: Trit) -> Trit {
    Trit(2 - a.0)
}

/// An unbalanced ternary number, least significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TritVec {
    digits: Vec<Trit>,
}

impl TritVec {
    /// Wraps a digit vector (index 0 least significant). Empty input is
    /// treated as the single digit zero.
    pub fn from_digits(digits: Vec<Trit>) -> Self {
        if digits.is_empty() {
            TritVec {
                digits: vec![Trit::ZERO],
            }
        } else {
            TritVec { digits }
        }
    }

    pub fn from_raw(digits: &[u8]) -> Result<Self> {
        let digits = digits
            .iter()
            .map(|&d| Trit::new(d as i64))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_digits(digits))
    }

    /// Encodes `n`, zero-padding up to `min_width` digits.
    pub fn from_value(mut n: u128, min_width: Option<usize>) -> Self {
        let mut digits = Vec::new();
        while n > 0 {
            digits.push(Trit((n % 3) as u8));
            n /= 3;
        }
        if digits.is_empty() {
            digits.push(Trit::ZERO);
        }
        if let Some(w) = min_width {
            if digits.len() < w {
                digits.resize(w, Trit::ZERO);
            }
        }
        TritVec { digits }
    }

    pub fn digits(&self) -> &[Trit] {
        &self.digits
    }

    pub fn width(&self) -> usize {
        self.digits.len()
    }

    /// Numeric value, or `None` when it exceeds `u128`.
    pub fn checked_value(&self) -> Option<u128> {
        self.digits.iter().rev().try_fold(0u128, |acc, d| {
            acc.checked_mul(3)?.checked_add(d.0 as u128)
        })
    }

    /// Digitwise [`t_not`]; for width `n` the result is `3^n - 1 - self`.
    pub fn complement(&self) -> TritVec {
        TritVec {
            digits: self.digits.iter().map(|&d| t_not(d)).collect(),
        }
    }

    /// Drops leading zero digits, keeping at least one digit.
    pub fn normalized(&self) -> TritVec {
        let len = self
            .digits
            .iter()
            .rposition(|d| d.0 != 0)
            .map_or(1, |i| i + 1);
        TritVec {
            digits: self.digits[..len].to_vec(),
        }
    }

    /// `0t`-prefixed rendering, e.g. `0t21`.
    pub fn literal(&self) -> String {
        format!("0t{self}")
    }
}

impl fmt::Display for TritVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits.iter().rev() {
            write!(f, "{}", d.0)?;
        }
        Ok(())
    }
}

impl FromStr for TritVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.strip_prefix("0t").unwrap_or(s);
        if body.is_empty() {
            return Err(Error::Literal {
                text: s.into(),
                reason: "no digits".into(),
            });
        }
        let mut digits = Vec::with_capacity(body.len());
        for c in body.chars().rev() {
            match c {
                '0'..='2' => digits.push(Trit(c as u8 - b'0')),
                _ => {
                    return Err(Error::Literal {
                        text: s.into(),
                        reason: format!("{c:?} is not an unbalanced ternary digit"),
                    })
                }
            }
        }
        Ok(TritVec { digits })
    }
}

/// Encodes a non-negative integer; `min_width` pads with leading zeros.
pub fn to_unbalanced(n: i128, min_width: Option<usize>) -> Result<TritVec> {
    if n < 0 {
        return Err(Error::NegativeValue(n));
    }
    Ok(TritVec::from_value(n as u128, min_width))
}

pub fn from_unbalanced(v: &TritVec) -> Result<u128> {
    v.checked_value().ok_or(Error::Overflow)
}

/// A balanced ternary number with digits in {-1, 0, 1}, least significant
/// first, kept in minimal width.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BalancedVec {
    digits: Vec<i8>,
}

impl BalancedVec {
    /// Validates the digits and strips leading zeros.
    pub fn from_digits(digits: &[i64]) -> Result<Self> {
        let mut out = Vec::with_capacity(digits.len().max(1));
        for &d in digits {
            if !(-1..=1).contains(&d) {
                return Err(Error::InvalidBalancedDigit(d));
            }
            out.push(d as i8);
        }
        while out.len() > 1 && out.last() == Some(&0) {
            out.pop();
        }
        if out.is_empty() {
            out.push(0);
        }
        Ok(BalancedVec { digits: out })
    }

    pub fn digits(&self) -> &[i8] {
        &self.digits
    }

    pub fn width(&self) -> usize {
        self.digits.len()
    }

    pub fn checked_value(&self) -> Option<i128> {
        self.digits.iter().rev().try_fold(0i128, |acc, &d| {
            acc.checked_mul(3)?.checked_add(d as i128)
        })
    }

    pub fn negated(&self) -> BalancedVec {
        BalancedVec {
            digits: self.digits.iter().map(|d| -d).collect(),
        }
    }
}

impl fmt::Display for BalancedVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits.iter().rev() {
            let c = match d {
                -1 => 'T',
                0 => '0',
                _ => '1',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for BalancedVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Literal {
                text: s.into(),
                reason: "no digits".into(),
            });
        }
        let mut digits = Vec::with_capacity(s.len());
        for c in s.chars().rev() {
            digits.push(match c {
                'T' | 't' => -1,
                '0' => 0,
                '1' => 1,
                _ => {
                    return Err(Error::Literal {
                        text: s.into(),
                        reason: format!("{c:?} is not a balanced ternary digit (use 1, 0, T)"),
                    })
                }
            });
        }
        BalancedVec::from_digits(&digits)
    }
}

pub fn to_balanced(n: i128) -> BalancedVec {
    let mut digits = Vec::new();
    let mut rest = n;
    while rest != 0 {
        // rem_euclid keeps the remainder in 0..3 for negative values too.
        let r = rest.rem_euclid(3);
        let d: i8 = if r == 2 { -1 } else { r as i8 };
        digits.push(d);
        rest = (rest - d as i128).div_euclid(3);
    }
    if digits.is_empty() {
        digits.push(0);
    }
    BalancedVec { digits }
}

pub fn from_balanced(v: &BalancedVec) -> Result<i128> {
    v.checked_value().ok_or(Error::Overflow)
}

/// Parses an integer literal: decimal (optionally negative) or `0t`-prefixed
/// unbalanced ternary.
pub fn parse_integer_literal(s: &str) -> Result<i128> {
    let s = s.trim();
    if s.starts_with("0t") {
        let v: TritVec = s.parse()?;
        return v
            .checked_value()
            .map(|v| v as i128)
            .filter(|v| *v >= 0)
            .ok_or(Error::Overflow);
    }
    s.parse::<i128>().map_err(|e| Error::Literal {
        text: s.into(),
        reason: e.to_string(),
    })
}
