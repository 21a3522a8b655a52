//! Integer oracles, stimulus sweeps and the claim battery.
//!
//! Oracles are plain integer arithmetic on operand values; they never call
//! into the cell models or the simulator.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::builders::{
    build_compressor, build_miswired_rca, build_multiplier, build_rca, build_subtractor, driver_kind,
    AdderStyle,
};
use crate::cells::{self, CellKind};
use crate::error::{Error, Result};
use crate::netlist::{cell_image, Census, Meta, Netlist, PartialVerdict, ValueSet, MAX_LISTED};
use crate::sweep::{self, SweepPlan, DEFAULT_BUDGET, DEFAULT_SEED};
use crate::trit::{self, Trit, TritVec};

/// Expected behaviour of a circuit, as a function of its input operands.
///
/// The circuit's result is `sum(trit * 3^weight)` over all output ports,
/// so carry-out and no-borrow flags are part of the compared value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Oracle {
    /// `A + B`
    Add,
    /// `(A - B) mod 3^width`, plus `3^width` when `A >= B`
    SubMod { width: u32 },
    /// `A * B`
    Mul,
    /// Weighted sum of every input port.
    WeightedSum,
}

impl Oracle {
    pub fn name(&self) -> String {
        match self {
            Oracle::Add => "add".into(),
            Oracle::SubMod { width } => format!("sub_mod(n={width})"),
            Oracle::Mul => "mul".into(),
            Oracle::WeightedSum => "weighted_sum".into(),
        }
    }

    /// Picks the oracle matching a builder-produced netlist.
    pub fn for_netlist(net: &Netlist) -> Oracle {
        match net.meta.builder.as_str() {
            "rca" => Oracle::Add,
            "sub" => Oracle::SubMod {
                width: net.input_width("A") as u32,
            },
            "mul" => Oracle::Mul,
            _ => Oracle::WeightedSum,
        }
    }

    /// Parses `add`, `sub`, `mul` or `sum`; `sub` takes its width from the
    /// netlist.
    pub fn parse(name: &str, net: &Netlist) -> Result<Oracle> {
        match name {
            "add" => Ok(Oracle::Add),
            "sub" | "sub_mod" => Ok(Oracle::SubMod {
                width: net.input_width("A") as u32,
            }),
            "mul" => Ok(Oracle::Mul),
            "sum" | "weighted_sum" => Ok(Oracle::WeightedSum),
            _ => Err(Error::Param(format!("unknown oracle {name:?} (add|sub|mul|sum)"))),
        }
    }

    fn needs_ab(&self) -> bool {
        !matches!(self, Oracle::WeightedSum)
    }

    pub fn expected(&self, a: u128, b: u128, weighted_sum: u128) -> u128 {
        match *self {
            Oracle::Add => a + b,
            Oracle::SubMod { width } => {
                let modulus = 3u128.pow(width);
                let diff = (a + modulus - b % modulus) % modulus;
                diff + if a >= b { modulus } else { 0 }
            }
            Oracle::Mul => a * b,
            Oracle::WeightedSum => weighted_sum,
        }
    }
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Sweep settings shared by every verification entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub budget: u64,
    pub seed: u64,
    /// Fail the certificate if any complete full adder is present.
    pub forbid_complete: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            budget: DEFAULT_BUDGET,
            seed: DEFAULT_SEED,
            forbid_complete: true,
        }
    }
}

impl SweepConfig {
    pub fn with_budget(self, budget: u64) -> Self {
        SweepConfig { budget, ..self }
    }
}

/// Oracle with operand names resolved to input ports.
struct Bound {
    oracle: Oracle,
    // per input port: 0 = A, 1 = B, 2 = other
    slot: Vec<u8>,
    weight: Vec<u32>,
}

impl Bound {
    fn new(net: &Netlist, oracle: Oracle) -> Result<Self> {
        if oracle.needs_ab() {
            for name in ["A", "B"] {
                if net.input_width(name) == 0 {
                    return Err(Error::Shape(format!("{oracle} needs an input operand {name}")));
                }
            }
            if let Some(extra) = net.input_operands().iter().find(|n| *n != "A" && *n != "B") {
                return Err(Error::Shape(format!("{oracle} takes A and B only, netlist also has {extra}")));
            }
        }
        if let Oracle::SubMod { width } = oracle {
            let (wa, wb) = (net.input_width("A"), net.input_width("B"));
            if wa != width as usize || wb != width as usize {
                return Err(Error::Shape(format!("{oracle} expects {width}-digit operands, got {wa} and {wb}")));
            }
        }
        if net.outputs().is_empty() {
            return Err(Error::Shape("netlist has no outputs".into()));
        }
        Ok(Bound {
            oracle,
            slot: net
                .inputs()
                .iter()
                .map(|p| match p.operand.as_str() {
                    "A" => 0,
                    "B" => 1,
                    _ => 2,
                })
                .collect(),
            weight: net.inputs().iter().map(|p| p.weight).collect(),
        })
    }

    fn expected(&self, stim: &[Trit]) -> u128 {
        let mut acc = [0u128; 3];
        let mut all = 0u128;
        for ((&t, &slot), &w) in stim.iter().zip(&self.slot).zip(&self.weight) {
            let v = t.value() as u128 * 3u128.pow(w);
            acc[slot as usize] += v;
            all += v;
        }
        self.oracle.expected(acc[0], acc[1], all)
    }
}

/// A stimulus on which the circuit disagreed with its reference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    /// Operand literals, digits by port index.
    pub stimulus: BTreeMap<String, String>,
    pub expected: u128,
    pub got: Option<u128>,
    /// Set when simulation aborted instead of producing a value.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub pass: bool,
    pub forbid_complete: bool,
    pub partial_tfas: usize,
    pub violations: Vec<PartialVerdict>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub circuit: Meta,
    /// Name of the reference: an oracle, or `equiv:<builder>`.
    pub reference: String,
    pub plan: SweepPlan,
    /// At most 20 listed; see `mismatch_count` for the total.
    pub mismatches: Vec<Mismatch>,
    pub mismatch_count: u64,
    /// Stimuli on which a partial adder saw carry-in 2.
    pub aborts: u64,
    pub certificate: CertificateSummary,
    pub census: Census,
    pub elapsed_ms: u128,
    pub pass: bool,
}

impl PartialEq for VerifyReport {
    /// Wall time is excluded.
    fn eq(&self, other: &Self) -> bool {
        self.circuit == other.circuit
            && self.reference == other.reference
            && self.plan == other.plan
            && self.mismatches == other.mismatches
            && self.mismatch_count == other.mismatch_count
            && self.aborts == other.aborts
            && self.certificate == other.certificate
            && self.census == other.census
            && self.pass == other.pass
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}] {} vs {}: {} cases ({}{}), {} mismatches, {} aborts, certificate {}, census {} ({} ms)",
            if self.pass { "PASS" } else { "FAIL" },
            self.circuit,
            self.reference,
            self.plan.cases,
            if self.plan.exhaustive { "exhaustive" } else { "sampled" },
            if self.plan.exhaustive {
                String::new()
            } else {
                format!(" from {}, seed {}", self.plan.space, self.plan.seed)
            },
            self.mismatch_count,
            self.aborts,
            if self.certificate.pass { "PASS" } else { "FAIL" },
            self.census,
            self.elapsed_ms
        )?;
        for v in &self.certificate.violations {
            writeln!(f, "    carry-in violation: {} wire {} range {}", v.cell, v.cin_wire, v.cin_range)?;
        }
        for m in &self.mismatches {
            let stim: Vec<String> = m.stimulus.iter().map(|(k, v)| format!("{k}={v}")).collect();
            match (&m.got, &m.error) {
                (_, Some(e)) => writeln!(f, "    {}: expected {}, aborted: {e}", stim.join(" "), m.expected)?,
                (Some(g), None) => writeln!(f, "    {}: expected {}, got {g}", stim.join(" "), m.expected)?,
                (None, None) => {}
            }
        }
        if self.mismatch_count > self.mismatches.len() as u64 {
            writeln!(f, "    ... {} more", self.mismatch_count - self.mismatches.len() as u64)?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Tally {
    mismatches: Vec<Mismatch>,
    mismatch_count: u64,
    aborts: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.mismatch_count += other.mismatch_count;
        self.aborts += other.aborts;
        let room = MAX_LISTED.saturating_sub(self.mismatches.len());
        self.mismatches.extend(other.mismatches.into_iter().take(room));
        self
    }
}

fn stimulus_literals(net: &Netlist, stim: &[Trit]) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for name in net.input_operands() {
        let mut digits = vec![Trit::ZERO; net.input_width(&name)];
        for (p, &t) in net.inputs().iter().zip(stim) {
            if p.operand == name {
                digits[p.index] = t;
            }
        }
        out.insert(name, TritVec::from_digits(digits).literal());
    }
    out
}

fn summarize(net: &Netlist, forbid_complete: bool) -> (CertificateSummary, Census) {
    let cert = net.check_partial_safety(forbid_complete);
    (
        CertificateSummary {
            pass: cert.pass,
            forbid_complete,
            partial_tfas: cert.partial.len(),
            violations: cert.violations().cloned().collect(),
        },
        cert.census,
    )
}

/// Sweeps `net` against `expected` (a function of the stimulus).
fn sweep_against<E>(net: &Netlist, reference: String, cfg: &SweepConfig, expected: E) -> VerifyReport
where
    E: Fn(&[Trit], &mut Vec<Trit>) -> std::result::Result<u128, String> + Sync + Send,
{
    let start = Instant::now();
    let space = net.stimulus_space();
    let plan = SweepPlan::new(&space, cfg.budget, cfg.seed);
    let tally = sweep::run(
        &space,
        &plan,
        || (Vec::new(), Vec::new(), Tally::default()),
        |(buf, rbuf, tally), stim| {
            let want = match expected(stim, rbuf) {
                Ok(v) => v,
                Err(e) => {
                    tally.mismatch_count += 1;
                    if tally.mismatches.len() < MAX_LISTED {
                        tally.mismatches.push(Mismatch {
                            stimulus: stimulus_literals(net, stim),
                            expected: 0,
                            got: None,
                            error: Some(format!("reference failed: {e}")),
                        });
                    }
                    return;
                }
            };
            let (got, error) = match net.eval_into(stim, buf) {
                Ok(()) => {
                    let total = net
                        .outputs()
                        .iter()
                        .fold(0u128, |acc, p| acc + buf[p.wire.index()].value() as u128 * 3u128.pow(p.weight));
                    if total == want {
                        return;
                    }
                    (Some(total), None)
                }
                Err(e) => {
                    if matches!(e, Error::CarryInTwo { .. }) {
                        tally.aborts += 1;
                    }
                    (None, Some(e.to_string()))
                }
            };
            tally.mismatch_count += 1;
            if tally.mismatches.len() < MAX_LISTED {
                tally.mismatches.push(Mismatch {
                    stimulus: stimulus_literals(net, stim),
                    expected: want,
                    got,
                    error,
                });
            }
        },
        |(b, r, x), (_, _, y)| (b, r, x.merge(y)),
    )
    .2;
    let (certificate, census) = summarize(net, cfg.forbid_complete);
    let pass = tally.mismatch_count == 0 && certificate.pass;
    VerifyReport {
        circuit: net.meta.clone(),
        reference,
        plan,
        mismatches: tally.mismatches,
        mismatch_count: tally.mismatch_count,
        aborts: tally.aborts,
        certificate,
        census,
        elapsed_ms: start.elapsed().as_millis(),
        pass,
    }
}

/// Compares simulation against an integer oracle over the legal input space
/// (exhaustive within budget, otherwise seeded sampling) and attaches the
/// partial-safety certificate.
pub fn verify_against_oracle(net: &Netlist, oracle: Oracle, cfg: &SweepConfig) -> Result<VerifyReport> {
    let bound = Bound::new(net, oracle)?;
    Ok(sweep_against(net, oracle.name(), cfg, |stim, _| Ok(bound.expected(stim))))
}

/// Compares `candidate` against `reference` on the candidate's input space.
/// Both netlists must declare the same input ports in the same order.
pub fn verify_equivalence(reference: &Netlist, candidate: &Netlist, cfg: &SweepConfig) -> Result<VerifyReport> {
    let same_ports = reference.inputs().len() == candidate.inputs().len()
        && reference
            .inputs()
            .iter()
            .zip(candidate.inputs())
            .all(|(r, c)| r.operand == c.operand && r.index == c.index && r.weight == c.weight);
    if !same_ports {
        return Err(Error::Shape("netlists declare different input ports".into()));
    }
    let label = format!("equiv:{}", reference.meta);
    Ok(sweep_against(candidate, label, cfg, |stim, buf| {
        reference.eval_into(stim, buf).map_err(|e| e.to_string())?;
        Ok(reference
            .outputs()
            .iter()
            .fold(0u128, |acc, p| acc + buf[p.wire.index()].value() as u128 * 3u128.pow(p.weight)))
    }))
}

/// One entry of the claim battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: u8,
    pub name: String,
    pub claim: String,
    pub pass: bool,
    pub details: Vec<String>,
    pub reports: Vec<VerifyReport>,
}

impl fmt::Display for ClaimResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}] {}. {}: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.claim
        )?;
        for d in &self.details {
            writeln!(f, "    {d}")?;
        }
        for r in &self.reports {
            for line in r.to_string().lines() {
                writeln!(f, "    {line}")?;
            }
        }
        Ok(())
    }
}

struct ClaimBuilder {
    result: ClaimResult,
}

impl ClaimBuilder {
    fn new(id: u8, name: &str, claim: &str) -> Self {
        ClaimBuilder {
            result: ClaimResult {
                id,
                name: name.into(),
                claim: claim.into(),
                pass: true,
                details: Vec::new(),
                reports: Vec::new(),
            },
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.result.pass = false;
            self.result.details.push(format!("failed: {}", what.into()));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.result.details.push(what.into());
    }

    fn report(&mut self, r: Result<VerifyReport>) {
        match r {
            Ok(r) => {
                self.result.pass &= r.pass;
                self.result.reports.push(r);
            }
            Err(e) => self.check(false, e.to_string()),
        }
    }

    fn done(self) -> ClaimResult {
        self.result
    }
}

// Rows (a, b, carry, sum) of the half-adder table and (a, b, [carry, sum]
// for cin = 0, 1, 2) of the full-adder table.
const THA_ROWS: [[u8; 4]; 9] = [
    [0, 0, 0, 0],
    [0, 1, 0, 1],
    [0, 2, 0, 2],
    [1, 0, 0, 1],
    [1, 1, 0, 2],
    [1, 2, 1, 0],
    [2, 0, 0, 2],
    [2, 1, 1, 0],
    [2, 2, 1, 1],
];

const TFA_ROWS: [(u8, u8, [[u8; 2]; 3]); 9] = [
    (0, 0, [[0, 0], [0, 1], [0, 2]]),
    (0, 1, [[0, 1], [0, 2], [1, 0]]),
    (0, 2, [[0, 2], [1, 0], [1, 1]]),
    (1, 0, [[0, 1], [0, 2], [1, 0]]),
    (1, 1, [[0, 2], [1, 0], [1, 1]]),
    (1, 2, [[1, 0], [1, 1], [1, 2]]),
    (2, 0, [[0, 2], [1, 0], [1, 1]]),
    (2, 1, [[1, 0], [1, 1], [1, 2]]),
    (2, 2, [[1, 1], [1, 2], [2, 0]]),
];

fn tr(v: u8) -> Trit {
    Trit::new(v as i64).expect("table digit")
}

/// Cell models against the half/full adder tables and integer arithmetic.
pub fn claim_cell_tables() -> ClaimResult {
    let mut c = ClaimBuilder::new(
        1,
        "cell-tables",
        "THA, complete TFA and partial TFA match their truth tables; MUL matches integer multiplication",
    );
    let mut rows = 0;
    for [a, b, carry, sum] in THA_ROWS {
        let out = cells::tha(tr(a), tr(b));
        c.check(
            out.hi.value() == carry && out.lo.value() == sum && out.value() == a + b,
            format!("THA row {a},{b}"),
        );
        rows += 1;
    }
    for (a, b, cols) in TFA_ROWS {
        for (cin, [carry, sum]) in cols.into_iter().enumerate() {
            let cin = cin as u8;
            let out = cells::tfa_complete(tr(a), tr(b), tr(cin));
            c.check(
                out.hi.value() == carry && out.lo.value() == sum && out.value() == a + b + cin,
                format!("TFA_C row {a},{b},{cin}"),
            );
            rows += 1;
            if cin < 2 {
                let ok = cells::tfa_partial(tr(a), tr(b), tr(cin))
                    .map(|p| p.hi.value() == carry && p.lo.value() == sum)
                    .unwrap_or(false);
                c.check(ok, format!("TFA_P row {a},{b},{cin}"));
                rows += 1;
            }
        }
    }
    for a in 0..3u8 {
        for b in 0..3u8 {
            let out = cells::mul_cell(tr(a), tr(b));
            c.check(
                out.hi.value() == a * b / 3 && out.lo.value() == a * b % 3,
                format!("MUL {a}*{b}"),
            );
            rows += 1;
        }
    }
    c.note(format!("{rows} rows checked (9 THA + 27 TFA_C + 18 TFA_P + 9 MUL)"));
    c.done()
}

/// The partial adder agrees with the complete adder wherever it is defined.
pub fn claim_partial_matches_complete() -> ClaimResult {
    let mut c = ClaimBuilder::new(
        2,
        "partial-equals-complete",
        "partial TFA equals complete TFA on all 18 triples with carry-in 0 or 1 and rejects carry-in 2",
    );
    for a in Trit::ALL {
        for b in Trit::ALL {
            for cin in [Trit::ZERO, Trit::ONE] {
                let p = cells::tfa_partial(a, b, cin).ok();
                c.check(p == Some(cells::tfa_complete(a, b, cin)), format!("{a},{b},{cin}"));
            }
            c.check(
                matches!(cells::tfa_partial(a, b, Trit::TWO), Err(Error::CarryInTwo { .. })),
                format!("{a},{b},2 must be rejected"),
            );
        }
    }
    c.done()
}

/// Partial-style ripple-carry adders are functionally identical to
/// complete-style ones.
pub fn claim_rca_equivalence(cfg: &SweepConfig, max_n: usize) -> ClaimResult {
    let mut c = ClaimBuilder::new(
        3,
        "rca-equivalence",
        "ripple-carry adders of partial TFAs equal those of complete TFAs",
    );
    for n in 1..=max_n {
        let (partial, complete) = match (build_rca(n, AdderStyle::Partial), build_rca(n, AdderStyle::Complete)) {
            (Ok(p), Ok(q)) => (p, q),
            (Err(e), _) | (_, Err(e)) => {
                c.check(false, e.to_string());
                continue;
            }
        };
        let census = partial.census();
        c.check(
            census.get(CellKind::Tha) == 1
                && census.get(CellKind::TfaPartial) == n - 1
                && census.total() == n,
            format!("n={n} census {census}"),
        );
        let cert = partial.check_partial_safety(true);
        c.check(
            cert.partial.iter().all(|v| v.cin_range.is_subset(ValueSet::CARRY)),
            format!("n={n} carry-in ranges"),
        );
        c.report(verify_equivalence(&complete, &partial, cfg));
        c.report(verify_against_oracle(&partial, Oracle::Add, cfg));
    }
    c.done()
}

pub fn claim_subtractor(cfg: &SweepConfig, max_n: usize) -> ClaimResult {
    let mut c = ClaimBuilder::new(
        4,
        "subtractor",
        "A + not(B) + 1 on partial TFAs computes (A - B) mod 3^n with carry-out = [A >= B]",
    );
    for n in 1..=max_n {
        match build_subtractor(n) {
            Ok(net) => {
                let census = net.census();
                c.check(
                    census.get(CellKind::Tha) == 0 && census.get(CellKind::TfaComplete) == 0,
                    format!("n={n} census {census}"),
                );
                c.report(verify_against_oracle(&net, Oracle::SubMod { width: n as u32 }, cfg));
            }
            Err(e) => c.check(false, e.to_string()),
        }
    }
    c.done()
}

/// Number of sampled operand pairs for the 6x6 multiplier.
pub const MULTIPLIER_SAMPLES: u64 = 10_000;

pub fn claim_multiplier(cfg: &SweepConfig) -> ClaimResult {
    let mut c = ClaimBuilder::new(
        5,
        "multiplier",
        "column-compression multipliers need no complete TFA and compute A * B",
    );
    for (n, m, budget) in [(3, 3, cfg.budget), (6, 6, MULTIPLIER_SAMPLES)] {
        let net = match build_multiplier(n, m) {
            Ok(net) => net,
            Err(e) => {
                c.check(false, e.to_string());
                continue;
            }
        };
        let sub = cfg.with_budget(budget);
        let report = verify_against_oracle(&net, Oracle::Mul, &sub);
        if let Ok(r) = &report {
            c.check(r.census.get(CellKind::TfaComplete) == 0, format!("{n}x{m} uses complete TFAs"));
            c.check(r.aborts == 0, format!("{n}x{m} saw {} carry-in-2 aborts", r.aborts));
        }
        c.report(report);
        let sound = net.exhaustive_soundness(budget, cfg.seed);
        c.check(sound.is_sound() && sound.aborts == 0, format!("{n}x{m} dynamic range check"));
        c.note(format!(
            "{n}x{m}: {} stimuli replayed against static ranges, {} escapes, {} aborts",
            sound.plan.cases, sound.violations, sound.aborts
        ));
    }
    c.done()
}

/// Checks the cell inventory a compressor of size `m` must have.
pub fn compressor_inventory_ok(net: &Netlist, m: usize) -> std::result::Result<(), String> {
    let census = net.census();
    if census.get(CellKind::TfaComplete) != 0 {
        return Err("complete TFA present".into());
    }
    let partial: Vec<_> = net.cells().iter().filter(|c| c.kind == CellKind::TfaPartial).collect();
    let restricted = net
        .inputs()
        .iter()
        .filter(|p| p.range.is_subset(ValueSet::CARRY))
        .map(|p| p.wire)
        .collect::<Vec<_>>();
    match m {
        5 | 7 | 11 | 13 if !partial.is_empty() => Err(format!("{} TFA(s), expected none", partial.len())),
        6 | 10 | 12 if partial.len() != 1 || !restricted.contains(&partial[0].inputs[2]) => {
            Err("TFA carry-in must be the restricted input".into())
        }
        8 if partial.len() != 1 || driver_kind(net, partial[0].inputs[2]) != Some(CellKind::Tha) => {
            Err("TFA carry-in must come from a half adder".into())
        }
        9 if partial.len() != 2
            || !restricted.contains(&partial[0].inputs[2])
            || partial[1].inputs[2] != partial[0].outputs[1] =>
        {
            Err("expected two TFAs, the second fed by the first's carry".into())
        }
        _ => Ok(()),
    }
}

pub fn claim_compressors(cfg: &SweepConfig) -> ClaimResult {
    let mut c = ClaimBuilder::new(
        6,
        "compressors",
        "m:3 compressors (5 <= m <= 13) of 4:2 compressors, THAs and partial TFAs conserve the weighted sum",
    );
    for m in 5..=13 {
        match build_compressor(m) {
            Ok(net) => {
                if let Err(e) = compressor_inventory_ok(&net, m) {
                    c.check(false, format!("m={m}: {e}"));
                }
                c.report(verify_against_oracle(&net, Oracle::WeightedSum, cfg));
            }
            Err(e) => c.check(false, e.to_string()),
        }
    }
    c.done()
}

/// Brute-force image of a cell over explicit input sets, using integer
/// arithmetic only.
fn brute_image(kind: CellKind, sets: &[ValueSet], constant: u8) -> [u8; 2] {
    let n = sets.len();
    let (mut lo, mut hi) = (0u8, 0u8);
    for code in 0..3usize.pow(n as u32) {
        let x: Vec<u8> = (0..n).map(|i| ((code / 3usize.pow(i as u32)) % 3) as u8).collect();
        if x.iter().zip(sets).any(|(&v, s)| s.mask() & (1 << v) == 0) {
            continue;
        }
        let (l, h) = match kind {
            CellKind::Mul => (x[0] * x[1] % 3, x[0] * x[1] / 3),
            CellKind::Not => (2 - x[0], 0),
            CellKind::Const => (constant, 0),
            _ => {
                let s: u8 = x.iter().sum();
                (s % 3, s / 3)
            }
        };
        lo |= 1 << l;
        hi |= 1 << h;
    }
    [lo, hi]
}

pub fn claim_range_exactness() -> ClaimResult {
    let mut c = ClaimBuilder::new(
        7,
        "range-exactness",
        "value-set propagation yields exact images for every cell kind and input-set combination",
    );
    let mut combos = 0usize;
    for kind in CellKind::ALL {
        let n = kind.input_arity();
        let consts: &[u8] = if kind == CellKind::Const { &[0, 1, 2] } else { &[0] };
        for &k in consts {
            for code in 0..7usize.pow(n as u32) {
                let sets: Vec<ValueSet> = (0..n)
                    .map(|i| ValueSet::from_mask(((code / 7usize.pow(i as u32)) % 7 + 1) as u8).expect("mask"))
                    .collect();
                let got = cell_image(kind, &sets, tr(k));
                let want = brute_image(kind, &sets, k);
                let outputs = kind.output_arity();
                let ok = got[0].mask() == want[0] && (outputs == 1 || got[1].mask() == want[1]);
                c.check(ok, format!("{kind} {sets:?}"));
                combos += 1;
            }
        }
    }
    c.note(format!("{combos} input-set combinations compared"));
    c.done()
}

/// Runs the partial-adder checks on a specific netlist: static certificate,
/// oracle sweep and dynamic range replay.
pub fn netlist_claim(net: &Netlist, oracle: Oracle, cfg: &SweepConfig) -> ClaimResult {
    let mut c = ClaimBuilder::new(
        0,
        "netlist",
        "every partial TFA carry-in stays in {0,1} and the circuit matches its oracle",
    );
    c.report(verify_against_oracle(net, oracle, cfg));
    let sound = net.exhaustive_soundness(cfg.budget, cfg.seed);
    c.check(sound.aborts == 0, format!("{} stimuli drove a partial TFA with carry-in 2", sound.aborts));
    c.check(sound.is_sound(), format!("{} simulated values escaped their static range", sound.violations));
    c.done()
}

/// A miswired adder must be rejected both statically and dynamically.
pub fn claim_negative_control(cfg: &SweepConfig) -> ClaimResult {
    let mut c = ClaimBuilder::new(
        8,
        "negative-control",
        "a partial TFA fed by a full-range carry-in is caught by the certificate and by simulation",
    );
    match build_miswired_rca(2) {
        Ok(net) => {
            let inner = netlist_claim(&net, Oracle::WeightedSum, cfg);
            let cert = net.check_partial_safety(true);
            let sound = net.exhaustive_soundness(cfg.budget, cfg.seed);
            c.check(!cert.pass, "certificate accepted a miswired partial TFA");
            c.check(sound.aborts >= 1, "sweep raised no carry-in-2 abort");
            c.check(!inner.pass, "netlist claim passed on a miswired circuit");
            c.note(format!(
                "certificate violations: {}, sweep aborts: {}/{}",
                cert.violations().count(),
                sound.aborts,
                sound.plan.cases
            ));
        }
        Err(e) => c.check(false, e.to_string()),
    }
    c.done()
}

pub fn claim_conversions() -> ClaimResult {
    let mut c = ClaimBuilder::new(
        9,
        "conversions",
        "decimal 0..9 convert to the reference balanced and unbalanced forms; conversions round-trip",
    );
    let table: [(i128, &str, &str); 10] = [
        (0, "0", "0"),
        (1, "1", "1"),
        (2, "1T", "2"),
        (3, "10", "10"),
        (4, "11", "11"),
        (5, "1TT", "12"),
        (6, "1T0", "20"),
        (7, "1T1", "21"),
        (8, "10T", "22"),
        (9, "100", "100"),
    ];
    for (n, bal, unbal) in table {
        c.check(trit::to_balanced(n).to_string() == bal, format!("balanced {n}"));
        let u = trit::to_unbalanced(n, None).map(|v| v.to_string());
        c.check(u.as_deref().ok() == Some(unbal), format!("unbalanced {n}"));
    }
    let bad_u = (0..3u128.pow(12))
        .filter(|&n| TritVec::from_value(n, None).checked_value() != Some(n))
        .count();
    c.check(bad_u == 0, format!("{bad_u} unbalanced round-trip failures"));
    let bound = 3i128.pow(7);
    let bad_b = (-bound..bound)
        .filter(|&n| trit::from_balanced(&trit::to_balanced(n)).ok() != Some(n))
        .count();
    c.check(bad_b == 0, format!("{bad_b} balanced round-trip failures"));
    c.done()
}

/// The full battery, in order.
pub fn claim_suite(cfg: &SweepConfig) -> Vec<ClaimResult> {
    vec![
        claim_cell_tables(),
        claim_partial_matches_complete(),
        claim_rca_equivalence(cfg, 5),
        claim_subtractor(cfg, 4),
        claim_multiplier(cfg),
        claim_compressors(cfg),
        claim_range_exactness(),
        claim_negative_control(cfg),
        claim_conversions(),
    ]
}
