use thiserror::Error;

use crate::netlist::{CellId, WireId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an unbalanced trit (expected 0, 1 or 2)")]
    InvalidTrit(i64),

    #[error("{0} is not a balanced digit (expected -1, 0 or 1)")]
    InvalidBalancedDigit(i64),

    #[error("negative value {0} has no unbalanced ternary representation")]
    NegativeValue(i128),

    #[error("value does not fit in a 128-bit integer")]
    Overflow,

    #[error("malformed literal {text:?}: {reason}")]
    Literal { text: String, reason: String },

    /// A partial full adder was driven with a carry-in of 2.
    #[error("partial TFA {} received carry-in 2{}", fmt_cell(*.cell), fmt_wire(*.wire))]
    CarryInTwo {
        cell: Option<CellId>,
        wire: Option<WireId>,
    },

    #[error("{kind} takes {expected} input(s), got {got}")]
    Arity {
        kind: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("{kind} inputs must share one weight, got {weights:?}")]
    WeightMismatch {
        kind: &'static str,
        weights: Vec<u32>,
    },

    #[error("unknown wire {0}")]
    UnknownWire(WireId),

    #[error("netlist contains a combinational cycle")]
    Cycle,

    #[error("malformed netlist: {0}")]
    Malformed(String),

    #[error("input {operand}[{index}] = {value} lies outside its declared range {range}")]
    OutOfRange {
        operand: String,
        index: usize,
        value: u8,
        range: String,
    },

    #[error("bad stimulus: {0}")]
    Stimulus(String),

    #[error("bad parameter: {0}")]
    Param(String),

    #[error("oracle does not match netlist: {0}")]
    Shape(String),

    #[error("column reduction failed: {0}")]
    Scheduling(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn fmt_cell(cell: Option<CellId>) -> String {
    cell.map(|c| c.to_string()).unwrap_or_else(|| "(detached)".into())
}

fn fmt_wire(wire: Option<WireId>) -> String {
    wire.map(|w| format!(" on wire {w}")).unwrap_or_default()
}
