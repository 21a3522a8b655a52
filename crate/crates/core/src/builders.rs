//! Circuit generators.
//!
//! All generators emit netlists that use only half adders, partial full
//! adders, 4:2 compressors, digit multipliers, complements and constants.
//! The complete full adder only appears in [`build_rca`] with
//! [`AdderStyle::Complete`], which exists as the reference design.
//!
//! Port naming:
//!
//! | builder        | inputs            | outputs                  |
//! |----------------|-------------------|--------------------------|
//! | rca            | `A`, `B`          | `S` (n), `COUT` (1)      |
//! | sub            | `A`, `B`          | `D` (n), `NOBORROW` (1)  |
//! | mul            | `A`, `B`          | `P` (n+m), `OVF` (rare)  |
//! | comp           | `X` (m, weight 0) | `O` (3)                  |
//! | miswired       | `A`, `B`, `CIN`   | `S` (n), `COUT` (1)      |

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cells::CellKind;
use crate::error::{Error, Result};
use crate::netlist::{cell_image, Driver, Meta, Netlist, ValueSet, WireId};
use crate::trit::Trit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdderStyle {
    Complete,
    Partial,
}

impl AdderStyle {
    fn full_adder(self) -> CellKind {
        match self {
            AdderStyle::Complete => CellKind::TfaComplete,
            AdderStyle::Partial => CellKind::TfaPartial,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AdderStyle::Complete => "complete",
            AdderStyle::Partial => "partial",
        }
    }
}

impl fmt::Display for AdderStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdderStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(AdderStyle::Complete),
            "partial" => Ok(AdderStyle::Partial),
            _ => Err(Error::Param(format!("unknown adder style {s:?} (complete|partial)"))),
        }
    }
}

fn check_width(name: &str, n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::Param(format!("{name} must be at least 1")));
    }
    Ok(())
}

fn operand(net: &mut Netlist, name: &str, width: usize) -> Vec<WireId> {
    (0..width)
        .map(|i| net.add_input(name, i, i as u32, ValueSet::FULL))
        .collect()
}

/// Ripple-carry adder: a half adder in column 0 followed by a chain of full
/// adders whose carry-in is the previous column's carry.
pub fn build_rca(n: usize, style: AdderStyle) -> Result<Netlist> {
    check_width("n", n)?;
    let mut net = Netlist::new(Meta::new("rca").with("n", n).with("style", style.name()));
    let a = operand(&mut net, "A", n);
    let b = operand(&mut net, "B", n);
    let first = net.add_cell(CellKind::Tha, &[a[0], b[0]])?;
    net.add_output("S", 0, first[0])?;
    let mut carry = first[1];
    for i in 1..n {
        let out = net.add_cell(style.full_adder(), &[a[i], b[i], carry])?;
        net.add_output("S", i, out[0])?;
        carry = out[1];
    }
    net.add_output("COUT", 0, carry)?;
    Ok(net)
}

/// `A - B` as `A + not(B) + 1` on a chain of partial full adders.
///
/// `D` is `(A - B) mod 3^n`; `NOBORROW` is 1 exactly when `A >= B`.
pub fn build_subtractor(n: usize) -> Result<Netlist> {
    check_width("n", n)?;
    let mut net = Netlist::new(Meta::new("sub").with("n", n));
    let a = operand(&mut net, "A", n);
    let b = operand(&mut net, "B", n);
    let mut carry = net.add_const(Trit::ONE, 0);
    for i in 0..n {
        let nb = net.add_cell(CellKind::Not, &[b[i]])?[0];
        let out = net.add_cell(CellKind::TfaPartial, &[a[i], nb, carry])?;
        net.add_output("D", i, out[0])?;
        carry = out[1];
    }
    net.add_output("NOBORROW", 0, carry)?;
    Ok(net)
}

/// Where a column-matrix entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PpProduct,
    PpCarry,
    CellSum,
    CellCarry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub wire: WireId,
    pub range: ValueSet,
    pub provenance: Provenance,
}

impl Entry {
    /// Restricted to {0, 1}: eligible for a partial adder's carry-in.
    pub fn is_asterisk(&self) -> bool {
        self.range.is_subset(ValueSet::CARRY)
    }
}

/// Partial-product bits arranged by weight. Entries in a column are kept in
/// insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColumnMatrix {
    columns: BTreeMap<u32, Vec<Entry>>,
}

impl ColumnMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, weight: u32, entry: Entry) {
        self.columns.entry(weight).or_default().push(entry);
    }

    pub fn column(&self, weight: u32) -> &[Entry] {
        self.columns.get(&weight).map_or(&[], Vec::as_slice)
    }

    pub fn columns(&self) -> impl Iterator<Item = (u32, &[Entry])> {
        self.columns.iter().map(|(&w, e)| (w, e.as_slice()))
    }

    pub fn total_entries(&self) -> usize {
        self.columns.values().map(Vec::len).sum()
    }

    pub fn max_height(&self) -> usize {
        self.columns.values().map(Vec::len).max().unwrap_or(0)
    }

    /// Highest populated weight.
    pub fn top(&self) -> Option<u32> {
        self.columns.keys().next_back().copied()
    }

    /// Checks that every entry's wire has its column's weight.
    pub fn check(&self, net: &Netlist) -> Result<()> {
        for (&w, entries) in &self.columns {
            for e in entries {
                if net.wire(e.wire)?.weight != w {
                    return Err(Error::Scheduling(format!("{} filed under weight {w}", e.wire)));
                }
            }
        }
        Ok(())
    }
}

/// Creates the `A` and `B` operands and one digit multiplier per digit pair.
/// Each product digit enters column `i + j`, its carry column `i + j + 1`.
pub fn generate_pps(n: usize, m: usize) -> Result<(Netlist, ColumnMatrix)> {
    check_width("n", n)?;
    check_width("m", m)?;
    let mut net = Netlist::new(Meta::new("mul").with("n", n).with("m", m));
    let a = operand(&mut net, "A", n);
    let b = operand(&mut net, "B", m);
    let mut matrix = ColumnMatrix::new();
    let [lo_range, hi_range] = cell_image(CellKind::Mul, &[ValueSet::FULL, ValueSet::FULL], Trit::ZERO);
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            let out = net.add_cell(CellKind::Mul, &[ai, bj])?;
            let w = (i + j) as u32;
            matrix.push(
                w,
                Entry {
                    wire: out[0],
                    range: lo_range,
                    provenance: Provenance::PpProduct,
                },
            );
            matrix.push(
                w + 1,
                Entry {
                    wire: out[1],
                    range: hi_range,
                    provenance: Provenance::PpCarry,
                },
            );
        }
    }
    Ok((net, matrix))
}

/// Outcome of [`reduce_columns`].
#[derive(Debug, Clone)]
pub struct Reduction {
    pub matrix: ColumnMatrix,
    pub cells_added: usize,
    /// Total entry count before the first stage and after each stage.
    pub stage_totals: Vec<usize>,
}

fn add_counted(net: &mut Netlist, kind: CellKind, inputs: &[Entry], added: &mut usize) -> Result<[Entry; 2]> {
    let ranges: Vec<ValueSet> = inputs.iter().map(|e| e.range).collect();
    let wires: Vec<WireId> = inputs.iter().map(|e| e.wire).collect();
    let [lo, hi] = cell_image(kind, &ranges, Trit::ZERO);
    let out = net.add_cell(kind, &wires)?;
    *added += 1;
    Ok([
        Entry {
            wire: out[0],
            range: lo,
            provenance: Provenance::CellSum,
        },
        Entry {
            wire: out[1],
            range: hi,
            provenance: Provenance::CellCarry,
        },
    ])
}

/// Wallace-style column compression down to at most two entries per column.
///
/// Each stage treats every column with more than two entries: it forms
/// partial full adders from one asterisk (routed to the carry-in) and two
/// other entries, dots first, for as long as an asterisk is left; the rest
/// are paired into half adders. Sums stay in the column, carries move one
/// column up. Complete full adders are never instantiated.
pub fn reduce_columns(net: &mut Netlist, matrix: ColumnMatrix) -> Result<Reduction> {
    matrix.check(net)?;
    let mut matrix = matrix;
    let mut cells_added = 0;
    let mut stage_totals = vec![matrix.total_entries()];
    while matrix.max_height() > 2 {
        let before = cells_added;
        let mut next = ColumnMatrix::new();
        let columns = std::mem::take(&mut matrix.columns);
        for (w, entries) in columns {
            if entries.len() <= 2 {
                for e in entries {
                    next.push(w, e);
                }
                continue;
            }
            let (stars, dots): (VecDeque<Entry>, VecDeque<Entry>) =
                entries.into_iter().partition(Entry::is_asterisk);
            let (mut stars, mut dots) = (stars, dots);
            while stars.len() + dots.len() >= 3 && !stars.is_empty() {
                let cin = stars.pop_front().unwrap();
                let mut pick = || dots.pop_front().or_else(|| stars.pop_front()).unwrap();
                let (x, y) = (pick(), pick());
                if !cin.is_asterisk() {
                    return Err(Error::Scheduling(format!("carry-in {} is not restricted", cin.wire)));
                }
                let [sum, carry] = add_counted(net, CellKind::TfaPartial, &[x, y, cin], &mut cells_added)?;
                next.push(w, sum);
                next.push(w + 1, carry);
            }
            let mut rest: Vec<Entry> = dots.into_iter().chain(stars).collect();
            while rest.len() >= 2 {
                let pair: Vec<Entry> = rest.drain(..2).collect();
                let [sum, carry] = add_counted(net, CellKind::Tha, &pair, &mut cells_added)?;
                next.push(w, sum);
                next.push(w + 1, carry);
            }
            for e in rest {
                next.push(w, e);
            }
        }
        if cells_added == before {
            return Err(Error::Scheduling("stage made no progress".into()));
        }
        matrix = next;
        stage_totals.push(matrix.total_entries());
    }
    Ok(Reduction {
        matrix,
        cells_added,
        stage_totals,
    })
}

/// Column-compression multiplier: digit products, reduction to two rows, then
/// a ripple-carry adder of half and partial full adders.
///
/// The product `P` has `n + m` digits. Any wire the final adder leaves above
/// that width is exported as `OVF`; it is always zero for in-range operands.
pub fn build_multiplier(n: usize, m: usize) -> Result<Netlist> {
    let (mut net, pps) = generate_pps(n, m)?;
    let reduced = reduce_columns(&mut net, pps)?.matrix;
    let width = (n + m) as u32;
    let top = reduced.top().unwrap_or(0).max(width - 1);
    let mut carry: Option<WireId> = None;
    let mut overflow = Vec::new();
    for w in 0..=top + 1 {
        let entries: Vec<WireId> = reduced.column(w).iter().map(|e| e.wire).collect();
        let (digit, next_carry) = match (entries.as_slice(), carry) {
            ([], None) => (None, None),
            ([], Some(c)) => (Some(c), None),
            ([x], None) => (Some(*x), None),
            ([x], Some(c)) => {
                let o = net.add_cell(CellKind::Tha, &[*x, c])?;
                (Some(o[0]), Some(o[1]))
            }
            ([x, y], None) => {
                let o = net.add_cell(CellKind::Tha, &[*x, *y])?;
                (Some(o[0]), Some(o[1]))
            }
            ([x, y], Some(c)) => {
                let o = net.add_cell(CellKind::TfaPartial, &[*x, *y, c])?;
                (Some(o[0]), Some(o[1]))
            }
            _ => return Err(Error::Scheduling(format!("column {w} still holds {} entries", entries.len()))),
        };
        carry = next_carry;
        if w < width {
            let wire = match digit {
                Some(d) => d,
                None => net.add_const(Trit::ZERO, w),
            };
            net.add_output("P", w as usize, wire)?;
        } else if let Some(d) = digit {
            overflow.push(d);
        }
    }
    for (i, wire) in overflow.into_iter().enumerate() {
        net.add_output("OVF", i, wire)?;
    }
    Ok(net)
}

/// Shape of an m:3 compressor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressorSpec {
    pub m: usize,
    /// Number of inputs declared {0, 1} (always the last ones).
    pub restricted_inputs: usize,
    pub allowed_kinds: Vec<CellKind>,
    pub outputs: usize,
}

impl CompressorSpec {
    pub fn new(m: usize) -> Result<Self> {
        if !(5..=13).contains(&m) {
            return Err(Error::Param(format!("compressor size m = {m} outside 5..=13")));
        }
        let restricted_inputs = usize::from(matches!(m, 6 | 9 | 10 | 12));
        let mut allowed_kinds = vec![CellKind::Comp42, CellKind::Tha];
        if !matches!(m, 5 | 7 | 11 | 13) {
            allowed_kinds.push(CellKind::TfaPartial);
        }
        let spec = CompressorSpec {
            m,
            restricted_inputs,
            allowed_kinds,
            outputs: 3,
        };
        debug_assert!(spec.max_input_sum() <= 26);
        Ok(spec)
    }

    /// Largest possible input sum, in units of the input weight.
    pub fn max_input_sum(&self) -> usize {
        2 * self.m - self.restricted_inputs
    }
}

/// m:3 compressor built from 4:2 compressors, half adders and partial full
/// adders. Every partial adder's carry-in is a restricted input or a carry
/// that cannot exceed 1.
pub fn build_compressor(m: usize) -> Result<Netlist> {
    let spec = CompressorSpec::new(m)?;
    let mut net = Netlist::new(Meta::new("comp").with("m", m));
    let x: Vec<WireId> = (0..m)
        .map(|i| {
            let range = if i >= m - spec.restricted_inputs {
                ValueSet::CARRY
            } else {
                ValueSet::FULL
            };
            net.add_input("X", i, 0, range)
        })
        .collect();
    let c42 = |net: &mut Netlist, ins: [WireId; 4]| net.add_cell(CellKind::Comp42, &ins).map(|o| (o[0], o[1]));
    let tha = |net: &mut Netlist, a: WireId, b: WireId| net.add_cell(CellKind::Tha, &[a, b]).map(|o| (o[0], o[1]));
    let tfa = |net: &mut Netlist, a: WireId, b: WireId, cin: WireId| {
        net.add_cell(CellKind::TfaPartial, &[a, b, cin]).map(|o| (o[0], o[1]))
    };
    // (out0, out1, out2) at weights 0, 1, 2
    let outs = match m {
        5 => {
            let (s0, s1) = c42(&mut net, [x[0], x[1], x[2], x[3]])?;
            let (o0, c) = tha(&mut net, s0, x[4])?;
            let (o1, o2) = tha(&mut net, s1, c)?;
            (o0, o1, o2)
        }
        6 => {
            let (s0, s1) = c42(&mut net, [x[0], x[1], x[2], x[3]])?;
            let (o0, c) = tfa(&mut net, s0, x[4], x[5])?;
            let (o1, o2) = tha(&mut net, s1, c)?;
            (o0, o1, o2)
        }
        7 => {
            let (s0, s1) = c42(&mut net, [x[0], x[1], x[2], x[3]])?;
            let (o0, t1) = c42(&mut net, [s0, x[4], x[5], x[6]])?;
            let (o1, o2) = tha(&mut net, s1, t1)?;
            (o0, o1, o2)
        }
        8 => {
            let (s0, s1) = c42(&mut net, [x[0], x[1], x[2], x[3]])?;
            let (t0, t1) = c42(&mut net, [x[4], x[5], x[6], x[7]])?;
            let (o0, c) = tha(&mut net, s0, t0)?;
            let (o1, o2) = tfa(&mut net, s1, t1, c)?;
            (o0, o1, o2)
        }
        9 => {
            let (s0, s1) = c42(&mut net, [x[0], x[1], x[2], x[3]])?;
            let (t0, t1) = c42(&mut net, [x[4], x[5], x[6], x[7]])?;
            let (o0, c) = tfa(&mut net, s0, t0, x[8])?;
            let (o1, o2) = tfa(&mut net, s1, t1, c)?;
            (o0, o1, o2)
        }
        10 => {
            let (s0, s1) = c42(&mut net, [x[0], x[1], x[2], x[3]])?;
            let (t0, t1) = c42(&mut net, [x[4], x[5], x[6], x[7]])?;
            let (u0, c) = tfa(&mut net, s0, x[8], x[9])?;
            let (o0, d) = tha(&mut net, u0, t0)?;
            let (o1, o2) = c42(&mut net, [s1, t1, c, d])?;
            (o0, o1, o2)
        }
        11 => {
            let (s0, s1) = c42(&mut net, [x[0], x[1], x[2], x[3]])?;
            let (t0, t1) = c42(&mut net, [x[4], x[5], x[6], x[7]])?;
            let (u0, u1) = c42(&mut net, [s0, t0, x[8], x[9]])?;
            let (o0, c) = tha(&mut net, u0, x[10])?;
            let (o1, o2) = c42(&mut net, [s1, t1, u1, c])?;
            (o0, o1, o2)
        }
        12 => {
            let (s0, s1) = c42(&mut net, [x[0], x[1], x[2], x[3]])?;
            let (t0, t1) = c42(&mut net, [x[4], x[5], x[6], x[7]])?;
            let (u0, u1) = c42(&mut net, [x[8], x[9], x[10], s0])?;
            let (o0, c) = tfa(&mut net, u0, t0, x[11])?;
            let (o1, o2) = c42(&mut net, [s1, t1, u1, c])?;
            (o0, o1, o2)
        }
        13 => {
            let (s0, s1) = c42(&mut net, [x[0], x[1], x[2], x[3]])?;
            let (t0, t1) = c42(&mut net, [x[4], x[5], x[6], x[7]])?;
            let (u0, u1) = c42(&mut net, [x[8], x[9], x[10], x[11]])?;
            let (o0, v1) = c42(&mut net, [s0, t0, u0, x[12]])?;
            let (o1, o2) = c42(&mut net, [s1, t1, u1, v1])?;
            (o0, o1, o2)
        }
        _ => unreachable!("range checked by CompressorSpec"),
    };
    net.add_output("O", 0, outs.0)?;
    net.add_output("O", 1, outs.1)?;
    net.add_output("O", 2, outs.2)?;
    Ok(net)
}

/// A deliberately broken adder for negative controls: column 0 is a partial
/// full adder whose carry-in is the full-range input `CIN`.
pub fn build_miswired_rca(n: usize) -> Result<Netlist> {
    check_width("n", n)?;
    let mut net = Netlist::new(Meta::new("miswired").with("n", n));
    let a = operand(&mut net, "A", n);
    let b = operand(&mut net, "B", n);
    let mut carry = net.add_input("CIN", 0, 0, ValueSet::FULL);
    for i in 0..n {
        let out = net.add_cell(CellKind::TfaPartial, &[a[i], b[i], carry])?;
        net.add_output("S", i, out[0])?;
        carry = out[1];
    }
    net.add_output("COUT", 0, carry)?;
    Ok(net)
}

/// The cell kind driving `wire`, if any.
pub fn driver_kind(net: &Netlist, wire: WireId) -> Option<CellKind> {
    match net.wire(wire).ok()?.driver {
        Driver::Cell { cell, .. } => Some(net.cell(cell).kind),
        Driver::Input(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(net: &Netlist, operands: &[(&str, u128)]) -> u128 {
        let stim = net.stimulus_from_values(operands).unwrap();
        net.output_total(&net.simulate(&stim).unwrap())
    }

    fn read(net: &Netlist, operands: &[(&str, u128)], name: &str) -> u128 {
        let stim = net.stimulus_from_values(operands).unwrap();
        let out = net.simulate(&stim).unwrap();
        net.read_outputs(&out).into_iter().find(|o| o.operand == name).unwrap().value
    }

    #[test]
    fn rca_census_and_examples() {
        let net = build_rca(4, AdderStyle::Partial).unwrap();
        let census = net.census();
        assert_eq!(census.get(CellKind::Tha), 1);
        assert_eq!(census.get(CellKind::TfaPartial), 3);
        assert_eq!(census.total(), 4);
        assert!(net.check_partial_safety(true).pass);
        net.validate().unwrap();

        let lone = build_rca(1, AdderStyle::Partial).unwrap();
        assert_eq!(lone.cells().len(), 1);
        assert_eq!(lone.cells()[0].kind, CellKind::Tha);

        let net3 = build_rca(3, AdderStyle::Partial).unwrap();
        assert_eq!(read(&net3, &[("A", 13), ("B", 13)], "S"), 26);
        assert_eq!(read(&net3, &[("A", 13), ("B", 13)], "COUT"), 0);
        assert!(build_rca(0, AdderStyle::Partial).is_err());
    }

    #[test]
    fn rca_two_digit_sum() {
        let net = build_rca(2, AdderStyle::Partial).unwrap();
        // 5 + 7 = 12 = 0t110: two sum digits "10" and a carry-out
        assert_eq!(read(&net, &[("A", 5), ("B", 7)], "S"), 3);
        assert_eq!(read(&net, &[("A", 5), ("B", 7)], "COUT"), 1);
        assert_eq!(run(&net, &[("A", 5), ("B", 7)]), 12);
        let net4 = build_rca(4, AdderStyle::Partial).unwrap();
        assert_eq!(read(&net4, &[("A", 5), ("B", 7)], "S"), 12);
        assert_eq!(read(&net4, &[("A", 5), ("B", 7)], "COUT"), 0);
    }

    #[test]
    fn complete_style_uses_complete_adders() {
        let net = build_rca(3, AdderStyle::Complete).unwrap();
        assert_eq!(net.census().get(CellKind::TfaComplete), 2);
        assert!(!net.check_partial_safety(true).pass);
        assert!(net.check_partial_safety(false).pass);
    }

    #[test]
    fn subtractor_examples() {
        let net = build_subtractor(2).unwrap();
        assert_eq!(read(&net, &[("A", 8), ("B", 3)], "D"), 5);
        assert_eq!(read(&net, &[("A", 8), ("B", 3)], "NOBORROW"), 1);
        assert_eq!(read(&net, &[("A", 1), ("B", 2)], "D"), 8);
        assert_eq!(read(&net, &[("A", 1), ("B", 2)], "NOBORROW"), 0);
        for v in 0..9 {
            assert_eq!(read(&net, &[("A", v), ("B", v)], "D"), 0);
            assert_eq!(read(&net, &[("A", v), ("B", v)], "NOBORROW"), 1);
        }
        let census = net.census();
        assert_eq!(census.get(CellKind::Tha), 0);
        assert_eq!(census.get(CellKind::TfaComplete), 0);
        assert_eq!(census.get(CellKind::TfaPartial), 2);
        assert_eq!(census.get(CellKind::Not), 2);
        assert_eq!(census.get(CellKind::Const), 1);
        assert!(net.check_partial_safety(true).pass);
        assert!(build_subtractor(0).is_err());
    }

    #[test]
    fn pp_generation() {
        let (net, matrix) = generate_pps(6, 6).unwrap();
        assert_eq!(net.census().get(CellKind::Mul), 36);
        let (mut products, mut carries) = (0, 0);
        for (w, entries) in matrix.columns() {
            for e in entries {
                match e.provenance {
                    Provenance::PpProduct => products += 1,
                    Provenance::PpCarry => carries += 1,
                    _ => unreachable!(),
                }
            }
            if (1..=11).contains(&w) {
                assert!(entries.iter().any(Entry::is_asterisk), "column {w}");
            }
        }
        assert_eq!((products, carries), (36, 36));
        matrix.check(&net).unwrap();

        let (net, matrix) = generate_pps(1, 1).unwrap();
        assert_eq!(net.cells().len(), 1);
        assert_eq!(matrix.columns().map(|(w, _)| w).collect::<Vec<_>>(), [0, 1]);
    }

    #[test]
    fn reduction_fixed_point_adds_nothing() {
        let (mut net, matrix) = generate_pps(1, 1).unwrap();
        let r = reduce_columns(&mut net, matrix.clone()).unwrap();
        assert_eq!(r.cells_added, 0);
        assert_eq!(r.matrix, matrix);
    }

    #[test]
    fn reduction_reaches_two_rows_with_partial_adders_only() {
        for (n, m) in [(2, 2), (3, 3), (6, 6), (4, 9), (12, 12), (1, 16), (16, 3)] {
            let (mut net, matrix) = generate_pps(n, m).unwrap();
            let r = reduce_columns(&mut net, matrix).unwrap();
            assert!(r.matrix.max_height() <= 2, "{n}x{m}");
            assert!(
                r.stage_totals.windows(2).all(|p| p[1] < p[0]),
                "{n}x{m}: {:?}",
                r.stage_totals
            );
            assert_eq!(net.census().get(CellKind::TfaComplete), 0);
        }
    }

    #[test]
    fn multiplier_examples() {
        let net = build_multiplier(2, 2).unwrap();
        assert_eq!(read(&net, &[("A", 7), ("B", 8)], "P"), 56);
        assert_eq!(read(&net, &[("A", 8), ("B", 8)], "P"), 64);
        for v in 0..9 {
            assert_eq!(read(&net, &[("A", v), ("B", 0)], "P"), 0);
        }
        let net = build_multiplier(6, 6).unwrap();
        assert_eq!(run(&net, &[("A", 728), ("B", 728)]), 529_984);
        assert_eq!(net.census().get(CellKind::Mul), 36);
        let cert = net.check_partial_safety(true);
        assert!(cert.pass, "{cert}");
        net.validate().unwrap();
    }

    #[test]
    fn multiplier_exhaustive_small() {
        for (n, m) in [(1, 1), (1, 3), (2, 3), (3, 2)] {
            let net = build_multiplier(n, m).unwrap();
            for a in 0..3u128.pow(n as u32) {
                for b in 0..3u128.pow(m as u32) {
                    assert_eq!(run(&net, &[("A", a), ("B", b)]), a * b, "{n}x{m} {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn compressor_spec_bounds() {
        assert!(CompressorSpec::new(4).is_err());
        assert!(CompressorSpec::new(14).is_err());
        assert!(build_compressor(14).is_err());
        for m in 5..=13 {
            let s = CompressorSpec::new(m).unwrap();
            assert!(s.max_input_sum() <= 26);
            assert_eq!(s.outputs, 3);
        }
    }

    #[test]
    fn compressor_examples() {
        let net = build_compressor(13).unwrap();
        let all_two = vec![Trit::TWO; 13];
        assert_eq!(net.simulate(&all_two).unwrap(), vec![Trit::TWO; 3]);
        for m in 5..=13 {
            let net = build_compressor(m).unwrap();
            assert_eq!(net.simulate(&vec![Trit::ZERO; m]).unwrap(), vec![Trit::ZERO; 3]);
            for kind in net.census().0.keys() {
                assert!(CompressorSpec::new(m).unwrap().allowed_kinds.contains(kind), "m={m} {kind}");
            }
        }
        let net = build_compressor(9).unwrap();
        let mut stim = vec![Trit::TWO; 8];
        stim.push(Trit::ONE);
        // 17 = 0t122
        assert_eq!(net.simulate(&stim).unwrap(), vec![Trit::TWO, Trit::TWO, Trit::ONE]);
    }

    #[test]
    fn compressor_carry_in_sources() {
        for m in 5..=13 {
            let net = build_compressor(m).unwrap();
            let partial: Vec<_> = net.cells().iter().filter(|c| c.kind == CellKind::TfaPartial).collect();
            let restricted = net.inputs().last().unwrap().wire;
            match m {
                5 | 7 | 11 | 13 => assert!(partial.is_empty(), "m={m}"),
                6 | 10 | 12 => {
                    assert_eq!(partial.len(), 1);
                    assert_eq!(partial[0].inputs[2], restricted);
                }
                8 => {
                    assert_eq!(partial.len(), 1);
                    assert_eq!(driver_kind(&net, partial[0].inputs[2]), Some(CellKind::Tha));
                }
                9 => {
                    assert_eq!(partial.len(), 2);
                    assert_eq!(partial[0].inputs[2], restricted);
                    assert_eq!(partial[1].inputs[2], partial[0].outputs[1]);
                }
                _ => unreachable!(),
            }
            assert!(net.check_partial_safety(true).pass, "m={m}");
        }
    }

    #[test]
    fn miswired_adder_is_flagged() {
        let net = build_miswired_rca(2).unwrap();
        let cert = net.check_partial_safety(true);
        assert!(!cert.pass);
        assert_eq!(cert.violations().next().unwrap().cin_wire, net.inputs()[4].wire);
        let stim = net.stimulus_from_values(&[("A", 0), ("B", 0), ("CIN", 2)]).unwrap();
        assert!(matches!(net.simulate(&stim), Err(Error::CarryInTwo { .. })));
    }
}
