//! Unbalanced-ternary arithmetic circuits.
//!
//! The crate is layered bottom-up:
//!
//! * [`trit`]: digits, number representations and the min/max/complement
//!   connectives.
//! * [`cells`]: behavioural truth functions of the arithmetic cells (half
//!   adder, complete and partial full adders, digit multiplier, 4:2
//!   compressor).
//! * [`netlist`]: combinational DAGs of cells, simulation and exact
//!   value-set range analysis.
//! * [`builders`]: ripple-carry adders, complement subtractors,
//!   column-compression multipliers and m:3 compressors.
//! * [`verify`]: integer oracles, stimulus sweeps and the claim battery.
//!
//! A partial full adder only accepts a carry-in of 0 or 1. Every builder in
//! this crate emits circuits whose partial adders are statically certified
//! never to see a carry-in of 2.

pub mod builders;
pub mod cells;
mod error;
pub mod sweep;
pub mod netlist;
pub mod trit;
pub mod verify;

pub use cells::{CellKind, CellOutputPair};
pub use error::{Error, Result};
pub use netlist::{Netlist, RangeCertificate, ValueSet};
pub use trit::{BalancedVec, Trit, TritVec};
pub use verify::{ClaimResult, Oracle, SweepConfig, VerifyReport};
