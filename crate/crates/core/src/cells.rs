//! Behavioural models of the arithmetic cells.
//!
//! Every two-output cell produces a [`CellOutputPair`] whose `lo` trit keeps
//! the input weight `3^n` and whose `hi` trit sits at `3^(n+1)`. The cells are
//! computed arithmetically; the truth tables in the tests are test vectors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trit::{t_not, Trit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellOutputPair {
    pub hi: Trit,
    pub lo: Trit,
}

impl CellOutputPair {
    /// Splits `v < 9` into two trits.
    #[inline]
    fn split(v: u8) -> Self {
        debug_assert!(v < 9);
        CellOutputPair {
            hi: Trit::from_u8_unchecked(v / 3),
            lo: Trit::from_u8_unchecked(v % 3),
        }
    }

    /// `3 * hi + lo`.
    #[inline]
    pub fn value(self) -> u8 {
        3 * self.hi.value() + self.lo.value()
    }
}

/// Ternary half adder.
#[inline]
pub fn tha(a: Trit, b: Trit) -> CellOutputPair {
    CellOutputPair::split(a.value() + b.value())
}

/// Ternary full adder with an unrestricted carry-in.
#[inline]
pub fn tfa_complete(a: Trit, b: Trit, cin: Trit) -> CellOutputPair {
    CellOutputPair::split(a.value() + b.value() + cin.value())
}

/// Ternary full adder whose carry-in must be 0 or 1.
///
/// A carry-in of 2 is outside the cell's domain and yields
/// [`Error::CarryInTwo`]; it indicates a miswired circuit.
#[inline]
pub fn tfa_partial(a: Trit, b: Trit, cin: Trit) -> Result<CellOutputPair> {
    if cin == Trit::TWO {
        return Err(Error::CarryInTwo {
            cell: None,
            wire: None,
        });
    }
    Ok(tfa_complete(a, b, cin))
}

/// Single-digit multiplier: `lo` is the product digit, `hi` the carry.
#[inline]
pub fn mul_cell(a: Trit, b: Trit) -> CellOutputPair {
    CellOutputPair::split(a.value() * b.value())
}

/// Ternary 4:2 compressor. The sum of four trits is at most 8 = `22`, so no
/// carry ports are needed.
#[inline]
pub fn comp42(x1: Trit, x2: Trit, x3: Trit, x4: Trit) -> CellOutputPair {
    CellOutputPair::split(x1.value() + x2.value() + x3.value() + x4.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CellKind {
    #[serde(rename = "THA")]
    Tha,
    #[serde(rename = "TFA_C")]
    TfaComplete,
    #[serde(rename = "TFA_P")]
    TfaPartial,
    #[serde(rename = "MUL")]
    Mul,
    #[serde(rename = "C42")]
    Comp42,
    #[serde(rename = "NOT")]
    Not,
    #[serde(rename = "CONST")]
    Const,
}

impl CellKind {
    pub const ALL: [CellKind; 7] = [
        CellKind::Tha,
        CellKind::TfaComplete,
        CellKind::TfaPartial,
        CellKind::Mul,
        CellKind::Comp42,
        CellKind::Not,
        CellKind::Const,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CellKind::Tha => "THA",
            CellKind::TfaComplete => "TFA_C",
            CellKind::TfaPartial => "TFA_P",
            CellKind::Mul => "MUL",
            CellKind::Comp42 => "C42",
            CellKind::Not => "NOT",
            CellKind::Const => "CONST",
        }
    }

    pub fn input_arity(self) -> usize {
        match self {
            CellKind::Tha | CellKind::Mul => 2,
            CellKind::TfaComplete | CellKind::TfaPartial => 3,
            CellKind::Comp42 => 4,
            CellKind::Not => 1,
            CellKind::Const => 0,
        }
    }

    pub fn output_arity(self) -> usize {
        match self {
            CellKind::Not | CellKind::Const => 1,
            _ => 2,
        }
    }

    /// Evaluates the cell. Outputs are returned `[lo, hi]`; single-output
    /// kinds leave `hi` at zero. `constant` is only read by `CONST`.
    #[inline]
    pub fn eval(self, inputs: &[Trit], constant: Trit) -> Result<[Trit; 2]> {
        let pair = match self {
            CellKind::Tha => tha(inputs[0], inputs[1]),
            CellKind::TfaComplete => tfa_complete(inputs[0], inputs[1], inputs[2]),
            CellKind::TfaPartial => tfa_partial(inputs[0], inputs[1], inputs[2])?,
            CellKind::Mul => mul_cell(inputs[0], inputs[1]),
            CellKind::Comp42 => comp42(inputs[0], inputs[1], inputs[2], inputs[3]),
            CellKind::Not => return Ok([t_not(inputs[0]), Trit::ZERO]),
            CellKind::Const => return Ok([constant, Trit::ZERO]),
        };
        Ok([pair.lo, pair.hi])
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CellKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown cell kind {s:?}")))
    }
}
