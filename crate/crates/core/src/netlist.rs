//! Combinational circuits of ternary cells.
//!
//! A [`Netlist`] is a DAG of [`Cell`]s connected by wires. Every wire carries
//! one trit and has a weight `n` meaning it contributes `trit * 3^n`. Primary
//! inputs and outputs are grouped into named operands.
//!
//! Besides simulation the module runs a forward value-set analysis: each wire
//! gets the exact set of values it can take given the declared input ranges.
//! The analysis certifies that every partial full adder sees a carry-in in
//! {0, 1}.

use std::collections::{BTreeMap, BinaryHeap};
use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cells::CellKind;
use crate::error::{Error, Result};
use crate::sweep::{self, StimulusSpace, SweepPlan};
use crate::trit::{Trit, TritVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WireId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellId(pub u32);

impl WireId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl CellId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for WireId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}", self.0)
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// A non-empty subset of {0, 1, 2}, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueSet(u8);

impl ValueSet {
    /// {0, 1, 2}: a full-range signal.
    pub const FULL: ValueSet = ValueSet(0b111);
    /// {0, 1}: a carry-like signal.
    pub const CARRY: ValueSet = ValueSet(0b011);

    pub fn from_mask(mask: u8) -> Option<Self> {
        (1..=7).contains(&mask).then_some(ValueSet(mask))
    }

    pub fn singleton(t: Trit) -> Self {
        ValueSet(1 << t.value())
    }

    pub fn from_values(values: &[u8]) -> Result<Self> {
        let mut mask = 0u8;
        for &v in values {
            mask |= 1 << Trit::new(v as i64)?.value();
        }
        ValueSet::from_mask(mask).ok_or_else(|| Error::Malformed("empty value set".into()))
    }

    /// All 7 non-empty subsets.
    pub fn all() -> impl Iterator<Item = ValueSet> {
        (1..=7).map(ValueSet)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn contains(self, t: Trit) -> bool {
        self.0 & (1 << t.value()) != 0
    }

    pub fn is_subset(self, other: ValueSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ValueSet) -> ValueSet {
        ValueSet(self.0 | other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn iter(self) -> impl Iterator<Item = Trit> {
        Trit::ALL.into_iter().filter(move |&t| self.contains(t))
    }

    pub fn values(self) -> Vec<u8> {
        self.iter().map(Trit::value).collect()
    }
}

impl fmt::Debug for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|t| t.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for ValueSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.values().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ValueSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<u8>::deserialize(d)?;
        ValueSet::from_values(&values).map_err(serde::de::Error::custom)
    }
}

/// Exact image of a cell over the product of its input sets, as `[lo, hi]`.
///
/// Combinations that put 2 on a partial adder's carry-in are outside its
/// domain; they are evaluated with complete-adder semantics so downstream
/// ranges stay meaningful while the violation itself is reported separately.
pub fn cell_image(kind: CellKind, inputs: &[ValueSet], constant: Trit) -> [ValueSet; 2] {
    let effective = match kind {
        CellKind::TfaPartial => CellKind::TfaComplete,
        k => k,
    };
    let mut lo = 0u8;
    let mut hi = 0u8;
    let mut buf = [Trit::ZERO; 4];
    let n = inputs.len();
    let members: Vec<Vec<Trit>> = inputs.iter().map(|s| s.iter().collect()).collect();
    let total: usize = members.iter().map(Vec::len).product();
    for mut code in 0..total {
        for i in 0..n {
            let m = &members[i];
            buf[i] = m[code % m.len()];
            code /= m.len();
        }
        let [l, h] = effective
            .eval(&buf[..n], constant)
            .expect("complete semantics are total");
        lo |= 1 << l.value();
        hi |= 1 << h.value();
    }
    [ValueSet(lo), ValueSet(hi)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Driver {
    Input(usize),
    Cell { cell: CellId, port: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wire {
    pub weight: u32,
    pub driver: Driver,
}

/// A cell instance. `outputs` are ordered `[lo, hi]`; `weight` is the weight
/// of the `lo` output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub id: CellId,
    pub kind: CellKind,
    pub inputs: Vec<WireId>,
    pub outputs: Vec<WireId>,
    pub weight: u32,
    pub constant: Option<Trit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputPort {
    pub operand: String,
    pub index: usize,
    pub wire: WireId,
    pub weight: u32,
    pub range: ValueSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputPort {
    pub operand: String,
    pub index: usize,
    pub wire: WireId,
    pub weight: u32,
}

/// Provenance of a netlist: the builder that produced it and its
/// parameters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub builder: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
}

impl fmt::Display for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.builder)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            let sep = if i == 0 { "" } else { ", " };
            match v {
                serde_json::Value::String(s) => write!(f, "{sep}{k}={s}")?,
                v => write!(f, "{sep}{k}={v}")?,
            }
        }
        write!(f, ")")
    }
}

impl Meta {
    pub fn new(builder: &str) -> Self {
        Meta {
            builder: builder.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn param_u64(&self, key: &str) -> Option<u64> {
        self.params.get(key).and_then(|v| v.as_u64())
    }
}

/// Cell counts by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Census(pub BTreeMap<CellKind, usize>);

impl Census {
    pub fn get(&self, kind: CellKind) -> usize {
        self.0.get(&kind).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, n)| format!("{k}:{n}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// One operand's reading after simulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperandValue {
    pub operand: String,
    /// Digits by port index.
    pub digits: Vec<u8>,
    /// `sum(digit * 3^(weight - base))` with `base` the operand's lowest weight.
    pub value: u128,
}

impl OperandValue {
    pub fn literal(&self) -> String {
        TritVec::from_raw(&self.digits)
            .expect("simulated digits are trits")
            .normalized()
            .literal()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Netlist {
    pub meta: Meta,
    wires: Vec<Wire>,
    cells: Vec<Cell>,
    inputs: Vec<InputPort>,
    outputs: Vec<OutputPort>,
    order: Vec<CellId>,
}

impl Netlist {
    pub fn new(meta: Meta) -> Self {
        Netlist {
            meta,
            ..Default::default()
        }
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn wire(&self, id: WireId) -> Result<&Wire> {
        self.wires.get(id.index()).ok_or(Error::UnknownWire(id))
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id.index()]
    }

    pub fn inputs(&self) -> &[InputPort] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[OutputPort] {
        &self.outputs
    }

    /// Cells in evaluation order.
    pub fn order(&self) -> &[CellId] {
        &self.order
    }

    fn fresh_wire(&mut self, weight: u32, driver: Driver) -> WireId {
        let id = WireId(self.wires.len() as u32);
        self.wires.push(Wire { weight, driver });
        id
    }

    pub fn add_input(&mut self, operand: &str, index: usize, weight: u32, range: ValueSet) -> WireId {
        let wire = self.fresh_wire(weight, Driver::Input(self.inputs.len()));
        self.inputs.push(InputPort {
            operand: operand.into(),
            index,
            wire,
            weight,
            range,
        });
        wire
    }

    /// Adds a cell on existing wires and returns its fresh output wires
    /// (`[lo, hi]` for two-output kinds).
    ///
    /// Outputs are always fresh, so the graph stays acyclic and the cell can
    /// be appended to the evaluation order.
    pub fn add_cell(&mut self, kind: CellKind, inputs: &[WireId]) -> Result<Vec<WireId>> {
        if kind == CellKind::Const {
            return Err(Error::Param("use add_const for CONST cells".into()));
        }
        let weight = self.output_weight(kind, inputs, None)?;
        Ok(self.push_cell(kind, inputs.to_vec(), weight, None))
    }

    pub fn add_const(&mut self, value: Trit, weight: u32) -> WireId {
        self.push_cell(CellKind::Const, Vec::new(), weight, Some(value))[0]
    }

    fn push_cell(&mut self, kind: CellKind, inputs: Vec<WireId>, weight: u32, constant: Option<Trit>) -> Vec<WireId> {
        let id = CellId(self.cells.len() as u32);
        let outputs: Vec<WireId> = (0..kind.output_arity())
            .map(|port| {
                self.fresh_wire(
                    weight + port as u32,
                    Driver::Cell {
                        cell: id,
                        port: port as u8,
                    },
                )
            })
            .collect();
        self.cells.push(Cell {
            id,
            kind,
            inputs,
            outputs: outputs.clone(),
            weight,
            constant,
        });
        self.order.push(id);
        outputs
    }

    /// Checks arity and weights; returns the weight of the `lo` output.
    fn output_weight(&self, kind: CellKind, inputs: &[WireId], constant_weight: Option<u32>) -> Result<u32> {
        if inputs.len() != kind.input_arity() {
            return Err(Error::Arity {
                kind: kind.name(),
                expected: kind.input_arity(),
                got: inputs.len(),
            });
        }
        let weights = inputs
            .iter()
            .map(|&w| self.wire(w).map(|w| w.weight))
            .collect::<Result<Vec<_>>>()?;
        match kind {
            CellKind::Const => constant_weight.ok_or_else(|| Error::Malformed("CONST without weight".into())),
            // a digit product of weights i and j lands on i + j
            CellKind::Mul => Ok(weights[0] + weights[1]),
            _ => {
                if weights.windows(2).any(|p| p[0] != p[1]) {
                    return Err(Error::WeightMismatch {
                        kind: kind.name(),
                        weights,
                    });
                }
                Ok(weights[0])
            }
        }
    }

    /// Replaces the declared range of input port `port` (port order).
    pub fn set_input_range(&mut self, port: usize, range: ValueSet) -> Result<()> {
        let p = self
            .inputs
            .get_mut(port)
            .ok_or_else(|| Error::Stimulus(format!("no input port {port}")))?;
        p.range = range;
        Ok(())
    }

    pub fn add_output(&mut self, operand: &str, index: usize, wire: WireId) -> Result<()> {
        let weight = self.wire(wire)?.weight;
        self.outputs.push(OutputPort {
            operand: operand.into(),
            index,
            wire,
            weight,
        });
        Ok(())
    }

    pub fn census(&self) -> Census {
        let mut counts = BTreeMap::new();
        for c in &self.cells {
            *counts.entry(c.kind).or_insert(0) += 1;
        }
        Census(counts)
    }

    /// Checks structural invariants: every wire is driven exactly once,
    /// consumed by a cell or exported, and the cell graph is acyclic.
    pub fn validate(&self) -> Result<()> {
        let mut used = vec![false; self.wires.len()];
        for cell in &self.cells {
            let weight = self.output_weight(cell.kind, &cell.inputs, Some(cell.weight))?;
            if weight != cell.weight {
                return Err(Error::Malformed(format!(
                    "{} declares weight {} but its inputs imply {}",
                    cell.id, cell.weight, weight
                )));
            }
            if cell.outputs.len() != cell.kind.output_arity() {
                return Err(Error::Malformed(format!("{} has wrong output count", cell.id)));
            }
            if (cell.kind == CellKind::Const) != cell.constant.is_some() {
                return Err(Error::Malformed(format!("{} constant value mismatch", cell.id)));
            }
            for &w in &cell.inputs {
                used[w.index()] = true;
            }
        }
        for out in &self.outputs {
            self.wire(out.wire)?;
            used[out.wire.index()] = true;
        }
        if let Some(pos) = used.iter().position(|u| !u) {
            return Err(Error::Malformed(format!(
                "wire {} is neither consumed nor exported",
                WireId(pos as u32)
            )));
        }
        topo_order(&self.cells, &self.wires)?;
        Ok(())
    }

    /// Names of the input operands in first-appearance order.
    pub fn input_operands(&self) -> Vec<String> {
        operand_names(self.inputs.iter().map(|p| p.operand.as_str()))
    }

    pub fn output_operands(&self) -> Vec<String> {
        operand_names(self.outputs.iter().map(|p| p.operand.as_str()))
    }

    /// Number of ports of an input operand (max index + 1).
    pub fn input_width(&self, operand: &str) -> usize {
        self.inputs
            .iter()
            .filter(|p| p.operand == operand)
            .map(|p| p.index + 1)
            .max()
            .unwrap_or(0)
    }

    /// Builds a stimulus vector (input port order) from operand digit
    /// vectors. Operands that are not mentioned are driven with zero.
    pub fn stimulus(&self, operands: &[(&str, &TritVec)]) -> Result<Vec<Trit>> {
        for (name, digits) in operands {
            let width = self.input_width(name);
            if width == 0 {
                return Err(Error::Stimulus(format!("no input operand named {name:?}")));
            }
            if digits.normalized().width() > width && digits.checked_value() != Some(0) {
                return Err(Error::Stimulus(format!(
                    "operand {name} has {width} digits, value {} does not fit",
                    digits.literal()
                )));
            }
        }
        Ok(self
            .inputs
            .iter()
            .map(|p| {
                operands
                    .iter()
                    .find(|(n, _)| *n == p.operand)
                    .and_then(|(_, v)| v.digits().get(p.index).copied())
                    .unwrap_or(Trit::ZERO)
            })
            .collect())
    }

    /// Stimulus from integer operand values, one base-3 digit per port index.
    pub fn stimulus_from_values(&self, operands: &[(&str, u128)]) -> Result<Vec<Trit>> {
        let vecs: Vec<(&str, TritVec)> = operands
            .iter()
            .map(|&(n, v)| (n, TritVec::from_value(v, None)))
            .collect();
        let refs: Vec<(&str, &TritVec)> = vecs.iter().map(|(n, v)| (*n, v)).collect();
        self.stimulus(&refs)
    }

    pub fn stimulus_space(&self) -> StimulusSpace {
        StimulusSpace::new(self.inputs.iter().map(|p| p.range.iter().collect()).collect())
    }

    /// Evaluates every wire into `values` (resized to the wire count).
    pub fn eval_into(&self, stimulus: &[Trit], values: &mut Vec<Trit>) -> Result<()> {
        if stimulus.len() != self.inputs.len() {
            return Err(Error::Stimulus(format!(
                "expected {} input trits, got {}",
                self.inputs.len(),
                stimulus.len()
            )));
        }
        values.clear();
        values.resize(self.wires.len(), Trit::ZERO);
        for (port, &t) in self.inputs.iter().zip(stimulus) {
            if !port.range.contains(t) {
                return Err(Error::OutOfRange {
                    operand: port.operand.clone(),
                    index: port.index,
                    value: t.value(),
                    range: port.range.to_string(),
                });
            }
            values[port.wire.index()] = t;
        }
        let mut ins = [Trit::ZERO; 4];
        for &id in &self.order {
            let cell = &self.cells[id.index()];
            for (slot, w) in ins.iter_mut().zip(&cell.inputs) {
                *slot = values[w.index()];
            }
            let out = cell
                .kind
                .eval(&ins[..cell.inputs.len()], cell.constant.unwrap_or(Trit::ZERO))
                .map_err(|_| Error::CarryInTwo {
                    cell: Some(id),
                    wire: Some(cell.inputs[2]),
                })?;
            for (w, t) in cell.outputs.iter().zip(out) {
                values[w.index()] = t;
            }
        }
        Ok(())
    }

    /// Runs one stimulus (input port order) and returns the output trits in
    /// output port order.
    pub fn simulate(&self, stimulus: &[Trit]) -> Result<Vec<Trit>> {
        let mut values = Vec::new();
        self.eval_into(stimulus, &mut values)?;
        Ok(self.outputs.iter().map(|p| values[p.wire.index()]).collect())
    }

    /// `sum(trit * 3^weight)` over all output ports.
    pub fn output_total(&self, outputs: &[Trit]) -> u128 {
        weighted_total(self.outputs.iter().map(|p| p.weight).zip(outputs.iter().copied()))
    }

    /// Groups output trits by operand.
    pub fn read_outputs(&self, outputs: &[Trit]) -> Vec<OperandValue> {
        self.output_operands()
            .into_iter()
            .map(|name| {
                let ports: Vec<(&OutputPort, Trit)> = self
                    .outputs
                    .iter()
                    .zip(outputs.iter().copied())
                    .filter(|(p, _)| p.operand == name)
                    .collect();
                let width = ports.iter().map(|(p, _)| p.index + 1).max().unwrap_or(0);
                let base = ports.iter().map(|(p, _)| p.weight).min().unwrap_or(0);
                let mut digits = vec![0u8; width];
                for (p, t) in &ports {
                    digits[p.index] = t.value();
                }
                let value = weighted_total(ports.iter().map(|(p, t)| (p.weight - base, *t)));
                OperandValue {
                    operand: name,
                    digits,
                    value,
                }
            })
            .collect()
    }

    /// Forward value-set propagation from the declared input ranges.
    pub fn propagate_ranges(&self) -> RangeCertificate {
        self.check_partial_safety(false)
    }

    /// Range analysis plus the partial-adder verdicts. With
    /// `forbid_complete`, any complete full adder also fails the certificate.
    pub fn check_partial_safety(&self, forbid_complete: bool) -> RangeCertificate {
        let mut ranges = vec![ValueSet::FULL; self.wires.len()];
        for p in &self.inputs {
            ranges[p.wire.index()] = p.range;
        }
        let mut partial = Vec::new();
        let mut ins = [ValueSet::FULL; 4];
        for &id in &self.order {
            let cell = &self.cells[id.index()];
            for (slot, w) in ins.iter_mut().zip(&cell.inputs) {
                *slot = ranges[w.index()];
            }
            let ins = &ins[..cell.inputs.len()];
            let image = cell_image(cell.kind, ins, cell.constant.unwrap_or(Trit::ZERO));
            for (w, set) in cell.outputs.iter().zip(image) {
                ranges[w.index()] = set;
            }
            if cell.kind == CellKind::TfaPartial {
                let cin_range = ins[2];
                partial.push(PartialVerdict {
                    cell: id,
                    cin_wire: cell.inputs[2],
                    cin_range,
                    port_ranges: [ins[0], ins[1], ins[2]],
                    ok: cin_range.is_subset(ValueSet::CARRY),
                });
            }
        }
        let census = self.census();
        let pass = partial.iter().all(|v| v.ok)
            && (!forbid_complete || census.get(CellKind::TfaComplete) == 0);
        RangeCertificate {
            wire_ranges: ranges,
            partial,
            census,
            forbid_complete,
            pass,
        }
    }

    /// Simulates the input space (exhaustively when it fits in `budget`) and
    /// checks every observed wire value against its static range.
    pub fn exhaustive_soundness(&self, budget: u64, seed: u64) -> SoundnessReport {
        let cert = self.propagate_ranges();
        let ranges = &cert.wire_ranges;
        let space = self.stimulus_space();
        let plan = SweepPlan::new(&space, budget, seed);
        let tally = sweep::run(
            &space,
            &plan,
            || (Vec::new(), SoundnessTally::default()),
            |(buf, tally), stim| match self.eval_into(stim, buf) {
                Ok(()) => {
                    for (i, (&v, &r)) in buf.iter().zip(ranges).enumerate() {
                        if !r.contains(v) {
                            tally.violations += 1;
                            if tally.examples.len() < MAX_LISTED {
                                tally.examples.push(RangeEscape {
                                    wire: WireId(i as u32),
                                    value: v.value(),
                                    range: r,
                                });
                            }
                        }
                    }
                }
                Err(_) => tally.aborts += 1,
            },
            |(b, mut x), (_, y)| {
                x.merge(y);
                (b, x)
            },
        )
        .1;
        SoundnessReport {
            plan,
            violations: tally.violations,
            examples: tally.examples,
            aborts: tally.aborts,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&NetlistFile::from(self)).expect("netlist serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetlistFile = serde_json::from_str(text)?;
        Netlist::try_from(file)
    }
}

/// Upper bound on individually listed findings in reports.
pub const MAX_LISTED: usize = 20;

fn weighted_total(items: impl Iterator<Item = (u32, Trit)>) -> u128 {
    items.fold(0u128, |acc, (w, t)| acc + t.value() as u128 * 3u128.pow(w))
}

fn operand_names<'a>(names: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for n in names {
        if !out.iter().any(|o| o == n) {
            out.push(n.into());
        }
    }
    out
}

/// Kahn's algorithm, always releasing the lowest ready cell id.
fn topo_order(cells: &[Cell], wires: &[Wire]) -> Result<Vec<CellId>> {
    let mut pending: Vec<usize> = vec![0; cells.len()];
    let mut consumers: Vec<Vec<usize>> = vec![Vec::new(); wires.len()];
    for (i, cell) in cells.iter().enumerate() {
        for w in &cell.inputs {
            if let Driver::Cell { .. } = wires[w.index()].driver {
                pending[i] += 1;
            }
            consumers[w.index()].push(i);
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = pending
        .iter()
        .enumerate()
        .filter(|(_, &n)| n == 0)
        .map(|(i, _)| Reverse(i))
        .collect();
    let mut order = Vec::with_capacity(cells.len());
    while let Some(Reverse(i)) = ready.pop() {
        order.push(CellId(i as u32));
        for w in &cells[i].outputs {
            for &c in &consumers[w.index()] {
                pending[c] -= 1;
                if pending[c] == 0 {
                    ready.push(Reverse(c));
                }
            }
        }
    }
    if order.len() != cells.len() {
        return Err(Error::Cycle);
    }
    Ok(order)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialVerdict {
    pub cell: CellId,
    pub cin_wire: WireId,
    pub cin_range: ValueSet,
    /// Ranges of all three ports `(a, b, cin)`; only `cin` is enforced.
    pub port_ranges: [ValueSet; 3],
    pub ok: bool,
}

/// Result of the static range analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeCertificate {
    pub wire_ranges: Vec<ValueSet>,
    pub partial: Vec<PartialVerdict>,
    pub census: Census,
    pub forbid_complete: bool,
    pub pass: bool,
}

impl RangeCertificate {
    pub fn range(&self, wire: WireId) -> ValueSet {
        self.wire_ranges[wire.index()]
    }

    pub fn violations(&self) -> impl Iterator<Item = &PartialVerdict> {
        self.partial.iter().filter(|v| !v.ok)
    }
}

impl fmt::Display for RangeCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "certificate: {}", if self.pass { "PASS" } else { "FAIL" })?;
        writeln!(f, "  census: {}", self.census)?;
        let ok = self.partial.iter().filter(|v| v.ok).count();
        writeln!(f, "  partial TFAs with carry-in in {{0,1}}: {ok}/{}", self.partial.len())?;
        for v in self.violations() {
            writeln!(
                f,
                "  violation: {} carry-in {} has range {}",
                v.cell, v.cin_wire, v.cin_range
            )?;
        }
        if self.forbid_complete && self.census.get(CellKind::TfaComplete) > 0 {
            writeln!(
                f,
                "  violation: {} complete TFA(s) present",
                self.census.get(CellKind::TfaComplete)
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeEscape {
    pub wire: WireId,
    pub value: u8,
    pub range: ValueSet,
}

#[derive(Debug, Default)]
struct SoundnessTally {
    violations: u64,
    examples: Vec<RangeEscape>,
    aborts: u64,
}

impl SoundnessTally {
    fn merge(&mut self, other: SoundnessTally) {
        self.violations += other.violations;
        self.aborts += other.aborts;
        let room = MAX_LISTED.saturating_sub(self.examples.len());
        self.examples.extend(other.examples.into_iter().take(room));
    }
}

/// Dynamic check that simulated values stay inside the static ranges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessReport {
    pub plan: SweepPlan,
    pub violations: u64,
    pub examples: Vec<RangeEscape>,
    /// Stimuli on which simulation aborted (partial adder saw carry-in 2).
    pub aborts: u64,
}

impl SoundnessReport {
    pub fn is_sound(&self) -> bool {
        self.violations == 0
    }
}

// On-disk form.

#[derive(Serialize, Deserialize)]
struct NetlistFile {
    meta: Meta,
    cells: Vec<CellRecord>,
    inputs: Vec<InputPort>,
    outputs: Vec<OutputPort>,
}

#[derive(Serialize, Deserialize)]
struct CellRecord {
    id: CellId,
    kind: CellKind,
    weight: u32,
    inputs: Vec<WireId>,
    outputs: Vec<WireId>,
    #[serde(rename = "const", default, skip_serializing_if = "Option::is_none")]
    constant: Option<Trit>,
}

impl From<&Netlist> for NetlistFile {
    fn from(net: &Netlist) -> Self {
        NetlistFile {
            meta: net.meta.clone(),
            cells: net
                .cells
                .iter()
                .map(|c| CellRecord {
                    id: c.id,
                    kind: c.kind,
                    weight: c.weight,
                    inputs: c.inputs.clone(),
                    outputs: c.outputs.clone(),
                    constant: c.constant,
                })
                .collect(),
            inputs: net.inputs.clone(),
            outputs: net.outputs.clone(),
        }
    }
}

impl TryFrom<NetlistFile> for Netlist {
    type Error = Error;

    fn try_from(file: NetlistFile) -> Result<Self> {
        let n_wires = file.inputs.len() + file.cells.iter().map(|c| c.outputs.len()).sum::<usize>();
        let mut slots: Vec<Option<Wire>> = vec![None; n_wires];
        let mut claim = |w: WireId, wire: Wire| -> Result<()> {
            let slot = slots
                .get_mut(w.index())
                .ok_or_else(|| Error::Malformed(format!("wire ids must be dense, found {w}")))?;
            if slot.is_some() {
                return Err(Error::Malformed(format!("wire {w} has more than one driver")));
            }
            *slot = Some(wire);
            Ok(())
        };
        for (i, p) in file.inputs.iter().enumerate() {
            claim(
                p.wire,
                Wire {
                    weight: p.weight,
                    driver: Driver::Input(i),
                },
            )?;
        }
        let mut cells = Vec::with_capacity(file.cells.len());
        for (i, rec) in file.cells.into_iter().enumerate() {
            if rec.id.index() != i {
                return Err(Error::Malformed(format!(
                    "cell ids must be dense and ordered, found {} at position {i}",
                    rec.id
                )));
            }
            if rec.outputs.len() != rec.kind.output_arity() {
                return Err(Error::Malformed(format!("{} has wrong output count", rec.id)));
            }
            for (port, &w) in rec.outputs.iter().enumerate() {
                claim(
                    w,
                    Wire {
                        weight: rec.weight + port as u32,
                        driver: Driver::Cell {
                            cell: rec.id,
                            port: port as u8,
                        },
                    },
                )?;
            }
            cells.push(Cell {
                id: rec.id,
                kind: rec.kind,
                inputs: rec.inputs,
                outputs: rec.outputs,
                weight: rec.weight,
                constant: rec.constant,
            });
        }
        let wires: Vec<Wire> = slots
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| Error::Malformed(format!("wire {} is never driven", WireId(i as u32)))))
            .collect::<Result<_>>()?;
        for c in &cells {
            for &w in &c.inputs {
                if w.index() >= wires.len() {
                    return Err(Error::UnknownWire(w));
                }
            }
        }
        for p in &file.outputs {
            let w = wires.get(p.wire.index()).ok_or(Error::UnknownWire(p.wire))?;
            if w.weight != p.weight {
                return Err(Error::Malformed(format!(
                    "output {}[{}] declares weight {} but wire {} has weight {}",
                    p.operand, p.index, p.weight, p.wire, w.weight
                )));
            }
        }
        let order = topo_order(&cells, &wires)?;
        let net = Netlist {
            meta: file.meta,
            wires,
            cells,
            inputs: file.inputs,
            outputs: file.outputs,
            order,
        };
        net.validate()?;
        Ok(net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{comp42, mul_cell, tfa_complete, tha};

    fn t(v: u8) -> Trit {
        Trit::new(v as i64).unwrap()
    }

    fn two_input(kind: CellKind) -> (Netlist, Vec<WireId>) {
        let mut net = Netlist::new(Meta::new("test"));
        let a = net.add_input("A", 0, 0, ValueSet::FULL);
        let b = net.add_input("B", 0, 0, ValueSet::FULL);
        let out = net.add_cell(kind, &[a, b]).unwrap();
        net.add_output("S", 0, out[0]).unwrap();
        net.add_output("S", 1, out[1]).unwrap();
        (net, out)
    }

    /// A single TFA_P whose carry-in comes straight from a full-range input.
    fn miswired() -> Netlist {
        let mut net = Netlist::new(Meta::new("miswired"));
        let a = net.add_input("A", 0, 0, ValueSet::FULL);
        let b = net.add_input("B", 0, 0, ValueSet::FULL);
        let c = net.add_input("C", 0, 0, ValueSet::FULL);
        let out = net.add_cell(CellKind::TfaPartial, &[a, b, c]).unwrap();
        net.add_output("S", 0, out[0]).unwrap();
        net.add_output("S", 1, out[1]).unwrap();
        net
    }

    #[test]
    fn value_set_basics() {
        assert_eq!(ValueSet::all().count(), 7);
        assert!(ValueSet::CARRY.is_subset(ValueSet::FULL));
        assert!(!ValueSet::FULL.is_subset(ValueSet::CARRY));
        assert_eq!(ValueSet::CARRY.to_string(), "{0,1}");
        assert!(ValueSet::from_mask(0).is_none());
        assert!(ValueSet::from_values(&[]).is_err());
        assert!(ValueSet::from_values(&[3]).is_err());
        let json = serde_json::to_string(&ValueSet::CARRY).unwrap();
        assert_eq!(json, "[0,1]");
        assert_eq!(serde_json::from_str::<ValueSet>(&json).unwrap(), ValueSet::CARRY);
    }

    #[test]
    fn add_cell_weight_rules() {
        let (net, out) = two_input(CellKind::Tha);
        assert_eq!(net.wire(out[0]).unwrap().weight, 0);
        assert_eq!(net.wire(out[1]).unwrap().weight, 1);
        net.validate().unwrap();

        let mut net = Netlist::new(Meta::default());
        let ws: Vec<_> = (0..4).map(|i| net.add_input("X", i, (i % 2) as u32, ValueSet::FULL)).collect();
        assert!(matches!(
            net.add_cell(CellKind::Comp42, &ws),
            Err(Error::WeightMismatch { .. })
        ));
        assert!(matches!(
            net.add_cell(CellKind::Tha, &ws[..3]),
            Err(Error::Arity { expected: 2, got: 3, .. })
        ));
        assert!(matches!(
            net.add_cell(CellKind::Tha, &[ws[0], WireId(99)]),
            Err(Error::UnknownWire(_))
        ));
        // digit products land on the summed weight
        let p = net.add_cell(CellKind::Mul, &[ws[1], ws[3]]).unwrap();
        assert_eq!(net.wire(p[0]).unwrap().weight, 2);
        assert_eq!(net.wire(p[1]).unwrap().weight, 3);
    }

    #[test]
    fn partial_cin_from_half_adder_carry_is_accepted() {
        let mut net = Netlist::new(Meta::default());
        let x: Vec<_> = (0..4).map(|i| net.add_input("X", i, 0, ValueSet::FULL)).collect();
        let h = net.add_cell(CellKind::Tha, &[x[0], x[1]]).unwrap();
        let s = net.add_cell(CellKind::Tha, &[x[2], x[3]]).unwrap();
        let f = net.add_cell(CellKind::TfaPartial, &[s[1], h[0], h[1]]);
        // h[0] is weight 0, s[1] weight 1: rejected; realign on weight 1
        assert!(f.is_err());
        let y = net.add_input("Y", 0, 1, ValueSet::FULL);
        let f = net.add_cell(CellKind::TfaPartial, &[s[1], y, h[1]]).unwrap();
        net.add_output("O", 0, h[0]).unwrap();
        net.add_output("O", 1, s[0]).unwrap();
        net.add_output("O", 2, f[0]).unwrap();
        net.add_output("O", 3, f[1]).unwrap();
        let cert = net.check_partial_safety(true);
        assert!(cert.pass, "{cert}");
        assert_eq!(cert.partial[0].cin_range, ValueSet::CARRY);
    }

    #[test]
    fn simulate_single_cells() {
        for kind in [CellKind::Tha, CellKind::Mul] {
            let (net, _) = two_input(kind);
            for a in Trit::ALL {
                for b in Trit::ALL {
                    let out = net.simulate(&[a, b]).unwrap();
                    let want = if kind == CellKind::Tha { tha(a, b) } else { mul_cell(a, b) };
                    assert_eq!(out, vec![want.lo, want.hi]);
                    assert_eq!(net.output_total(&out), want.value() as u128);
                }
            }
        }
    }

    #[test]
    fn forced_carry_in_two_aborts() {
        let mut net = Netlist::new(Meta::default());
        let a = net.add_input("A", 0, 0, ValueSet::FULL);
        let b = net.add_input("B", 0, 0, ValueSet::FULL);
        let two = net.add_const(Trit::TWO, 0);
        let out = net.add_cell(CellKind::TfaPartial, &[a, b, two]).unwrap();
        net.add_output("S", 0, out[0]).unwrap();
        net.add_output("S", 1, out[1]).unwrap();
        let err = net.simulate(&[t(0), t(0)]).unwrap_err();
        match err {
            Error::CarryInTwo { cell, wire } => {
                assert_eq!(cell, Some(CellId(1)));
                assert_eq!(wire, Some(two));
            }
            e => panic!("unexpected {e}"),
        }
        assert!(!net.check_partial_safety(false).pass);
    }

    #[test]
    fn out_of_range_stimulus_rejected() {
        let mut net = Netlist::new(Meta::default());
        let a = net.add_input("A", 0, 0, ValueSet::CARRY);
        let n = net.add_cell(CellKind::Not, &[a]).unwrap();
        net.add_output("Y", 0, n[0]).unwrap();
        assert_eq!(net.simulate(&[t(1)]).unwrap(), vec![t(1)]);
        assert!(matches!(net.simulate(&[t(2)]), Err(Error::OutOfRange { .. })));
        assert!(matches!(net.simulate(&[]), Err(Error::Stimulus(_))));
    }

    #[test]
    fn range_examples() {
        let full = ValueSet::FULL;
        let [_, hi] = cell_image(CellKind::TfaPartial, &[full, full, ValueSet::CARRY], Trit::ZERO);
        assert_eq!(hi, ValueSet::CARRY);
        let zero = ValueSet::singleton(Trit::ZERO);
        assert_eq!(cell_image(CellKind::Tha, &[zero, zero], Trit::ZERO), [zero, zero]);
        let [_, hi] = cell_image(CellKind::TfaComplete, &[full, full, full], Trit::ZERO);
        assert_eq!(hi, full);
    }

    fn brute_image(kind: CellKind, sets: &[ValueSet]) -> [ValueSet; 2] {
        let mut lo = 0u8;
        let mut hi = 0u8;
        let n = sets.len();
        for code in 0..3usize.pow(n as u32) {
            let x: Vec<u8> = (0..n).map(|i| ((code / 3usize.pow(i as u32)) % 3) as u8).collect();
            if x.iter().zip(sets).any(|(&v, s)| !s.contains(t(v))) {
                continue;
            }
            let total: u8 = match kind {
                CellKind::Mul => x[0] * x[1],
                CellKind::Not => 2 - x[0],
                _ => x.iter().sum(),
            };
            if kind == CellKind::Not {
                lo |= 1 << total;
                hi |= 1;
            } else {
                lo |= 1 << (total % 3);
                hi |= 1 << (total / 3);
            }
        }
        [ValueSet::from_mask(lo).unwrap(), ValueSet::from_mask(hi).unwrap()]
    }

    #[test]
    fn range_images_are_exact() {
        for kind in CellKind::ALL {
            if kind == CellKind::Const {
                for v in Trit::ALL {
                    assert_eq!(cell_image(kind, &[], v)[0], ValueSet::singleton(v));
                }
                continue;
            }
            let n = kind.input_arity();
            for code in 0..7usize.pow(n as u32) {
                let sets: Vec<ValueSet> = (0..n)
                    .map(|i| ValueSet::from_mask(((code / 7usize.pow(i as u32)) % 7 + 1) as u8).unwrap())
                    .collect();
                assert_eq!(cell_image(kind, &sets, Trit::ZERO), brute_image(kind, &sets), "{kind} {sets:?}");
            }
        }
    }

    #[test]
    fn soundness_of_single_cells() {
        let (net, _) = two_input(CellKind::Tha);
        let rep = net.exhaustive_soundness(sweep::DEFAULT_BUDGET, sweep::DEFAULT_SEED);
        assert!(rep.plan.exhaustive);
        assert_eq!(rep.plan.cases, 9);
        assert!(rep.is_sound());
        assert_eq!(rep.aborts, 0);
    }

    #[test]
    fn miswired_partial_is_caught_statically_and_dynamically() {
        let net = miswired();
        let cert = net.check_partial_safety(true);
        assert!(!cert.pass);
        let v: Vec<_> = cert.violations().collect();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].cin_wire, WireId(2));
        assert_eq!(v[0].cin_range, ValueSet::FULL);
        let rep = net.exhaustive_soundness(1000, 0);
        assert_eq!(rep.aborts, 9);
    }

    #[test]
    fn forbid_complete_flags_tfa_c() {
        let mut net = Netlist::new(Meta::default());
        let x: Vec<_> = (0..3).map(|i| net.add_input("X", i, 0, ValueSet::FULL)).collect();
        let o = net.add_cell(CellKind::TfaComplete, &x).unwrap();
        net.add_output("O", 0, o[0]).unwrap();
        net.add_output("O", 1, o[1]).unwrap();
        assert!(net.check_partial_safety(false).pass);
        assert!(!net.check_partial_safety(true).pass);
        for a in Trit::ALL {
            let out = net.simulate(&[a, Trit::TWO, Trit::TWO]).unwrap();
            assert_eq!(out, {
                let p = tfa_complete(a, Trit::TWO, Trit::TWO);
                vec![p.lo, p.hi]
            });
        }
    }

    #[test]
    fn validate_rejects_dangling_wire() {
        let mut net = Netlist::new(Meta::default());
        let x: Vec<_> = (0..4).map(|i| net.add_input("X", i, 0, ValueSet::FULL)).collect();
        let o = net.add_cell(CellKind::Comp42, &x).unwrap();
        net.add_output("O", 0, o[0]).unwrap();
        assert!(matches!(net.validate(), Err(Error::Malformed(_))));
        net.add_output("O", 1, o[1]).unwrap();
        net.validate().unwrap();
        let out = net.simulate(&[t(2), t(2), t(1), t(2)]).unwrap();
        let want = comp42(t(2), t(2), t(1), t(2));
        assert_eq!(out, vec![want.lo, want.hi]);
    }

    #[test]
    fn json_round_trip_and_cycle_detection() {
        let net = miswired();
        let text = net.to_json();
        let back = Netlist::from_json(&text).unwrap();
        assert_eq!(back, net);
        assert_eq!(back.to_json(), text);

        // Two NOT cells feeding each other.
        let looped = r#"{
            "meta": {"builder": "loop"},
            "cells": [
                {"id": 0, "kind": "NOT", "weight": 0, "inputs": [1], "outputs": [0]},
                {"id": 1, "kind": "NOT", "weight": 0, "inputs": [0], "outputs": [1]}
            ],
            "inputs": [],
            "outputs": [{"operand": "Y", "index": 0, "wire": 0, "weight": 0}]
        }"#;
        assert!(matches!(Netlist::from_json(looped), Err(Error::Cycle)));

        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["cells"][0]["kind"] = serde_json::json!("XOR");
        assert!(Netlist::from_json(&v.to_string()).is_err());
    }

    #[test]
    fn operand_readout() {
        let (net, _) = two_input(CellKind::Tha);
        let stim = net.stimulus_from_values(&[("A", 2), ("B", 2)]).unwrap();
        let out = net.simulate(&stim).unwrap();
        let read = net.read_outputs(&out);
        assert_eq!(read.len(), 1);
        assert_eq!(read[0].operand, "S");
        assert_eq!(read[0].value, 4);
        assert_eq!(read[0].literal(), "0t11");
        assert!(net.stimulus_from_values(&[("A", 3)]).is_err());
        assert!(net.stimulus_from_values(&[("Q", 1)]).is_err());
    }
}
