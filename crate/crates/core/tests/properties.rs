use proptest::prelude::*;

use ternarith::builders::{
    build_compressor, build_multiplier, build_rca, build_subtractor, generate_pps, reduce_columns, AdderStyle,
};
use ternarith::cells::CellKind;
use ternarith::netlist::{Netlist, ValueSet};
use ternarith::sweep::{DEFAULT_BUDGET, DEFAULT_SEED};
use ternarith::verify::{verify_against_oracle, verify_equivalence};
use ternarith::{Oracle, SweepConfig, Trit};

fn any_builder() -> impl Strategy<Value = Netlist> {
    prop_oneof![
        (1usize..6, any::<bool>()).prop_map(|(n, p)| {
            build_rca(n, if p { AdderStyle::Partial } else { AdderStyle::Complete }).unwrap()
        }),
        (1usize..6).prop_map(|n| build_subtractor(n).unwrap()),
        (1usize..6, 1usize..6).prop_map(|(n, m)| build_multiplier(n, m).unwrap()),
        (5usize..=13).prop_map(|m| build_compressor(m).unwrap()),
    ]
}

/// Checks `3 * hi + lo` against each cell's arithmetic for one evaluated
/// wire buffer.
fn cells_conserve(net: &Netlist, values: &[Trit]) -> bool {
    net.cells().iter().all(|c| {
        let ins: Vec<u32> = c.inputs.iter().map(|w| values[w.index()].value() as u32).collect();
        let outs: Vec<u32> = c.outputs.iter().map(|w| values[w.index()].value() as u32).collect();
        match c.kind {
            CellKind::Not => outs[0] == 2 - ins[0],
            CellKind::Const => outs[0] == c.constant.unwrap().value() as u32,
            CellKind::Mul => 3 * outs[1] + outs[0] == ins[0] * ins[1],
            _ => 3 * outs[1] + outs[0] == ins.iter().sum::<u32>(),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplier_matches_integer_product(n in 1usize..9, m in 1usize..9, a in any::<u64>(), b in any::<u64>()) {
        let net = build_multiplier(n, m).unwrap();
        let a = a as u128 % 3u128.pow(n as u32);
        let b = b as u128 % 3u128.pow(m as u32);
        let stim = net.stimulus_from_values(&[("A", a), ("B", b)]).unwrap();
        let out = net.simulate(&stim).unwrap();
        prop_assert_eq!(net.output_total(&out), a * b);
        let p = net.read_outputs(&out).into_iter().find(|o| o.operand == "P").unwrap();
        prop_assert_eq!(p.digits.len(), n + m);
        prop_assert_eq!(p.value, a * b);
        prop_assert!(net.check_partial_safety(true).pass);
    }

    #[test]
    fn reduction_strictly_shrinks_each_stage(n in 1usize..17, m in 1usize..17) {
        let (mut net, pps) = generate_pps(n, m).unwrap();
        let r = reduce_columns(&mut net, pps).unwrap();
        prop_assert!(r.matrix.max_height() <= 2);
        prop_assert!(r.stage_totals.windows(2).all(|p| p[1] < p[0]), "{:?}", r.stage_totals);
        prop_assert_eq!(net.census().get(CellKind::TfaComplete), 0);
    }

    #[test]
    fn file_round_trip(net in any_builder()) {
        let text = net.to_json();
        let back = Netlist::from_json(&text).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn simulation_conserves_per_cell(net in any_builder(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut values = Vec::new();
        for _ in 0..32 {
            let stim: Vec<Trit> = net
                .inputs()
                .iter()
                .map(|p| {
                    let choices: Vec<Trit> = p.range.iter().collect();
                    choices[rng.gen_range(0..choices.len())]
                })
                .collect();
            net.eval_into(&stim, &mut values).unwrap();
            prop_assert!(cells_conserve(&net, &values));
        }
    }

    #[test]
    fn shrinking_inputs_never_grows_ranges(net in any_builder(), masks in proptest::collection::vec(1u8..8, 32)) {
        let wide = net.propagate_ranges();
        let mut narrow_net = net.clone();
        for (i, p) in net.inputs().iter().enumerate() {
            let shrunk = ValueSet::from_mask(p.range.mask() & masks[i % masks.len()])
                .unwrap_or(p.range);
            narrow_net.set_input_range(i, shrunk).unwrap();
        }
        let narrow = narrow_net.propagate_ranges();
        for (a, b) in narrow.wire_ranges.iter().zip(&wide.wire_ranges) {
            prop_assert!(a.is_subset(*b));
        }
    }
}

#[test]
fn rca_partial_equals_complete_exhaustively() {
    let cfg = SweepConfig::default();
    for n in 1..=5 {
        let p = build_rca(n, AdderStyle::Partial).unwrap();
        let c = build_rca(n, AdderStyle::Complete).unwrap();
        let r = verify_equivalence(&c, &p, &cfg).unwrap();
        assert!(r.pass && r.plan.exhaustive, "{r}");
    }
}

#[test]
fn subtractor_exhaustive_against_oracle() {
    for n in 1..=4 {
        let net = build_subtractor(n).unwrap();
        let r = verify_against_oracle(&net, Oracle::for_netlist(&net), &SweepConfig::default()).unwrap();
        assert!(r.pass && r.plan.exhaustive, "{r}");
        assert_eq!(r.plan.cases, 3u64.pow(2 * n as u32));
    }
}

#[test]
fn certified_builders_never_abort() {
    let nets = vec![
        build_rca(3, AdderStyle::Partial).unwrap(),
        build_subtractor(3).unwrap(),
        build_multiplier(3, 3).unwrap(),
        build_multiplier(2, 5).unwrap(),
        build_compressor(9).unwrap(),
        build_compressor(12).unwrap(),
    ];
    for net in nets {
        assert!(net.check_partial_safety(true).pass);
        let rep = net.exhaustive_soundness(DEFAULT_BUDGET, DEFAULT_SEED);
        assert!(rep.plan.exhaustive);
        assert_eq!(rep.aborts, 0, "{}", net.meta.builder);
        assert!(rep.is_sound(), "{:?}", rep.examples);
    }
}

#[test]
fn soundness_sweep_sizes() {
    let rca = build_rca(3, AdderStyle::Partial).unwrap();
    let rep = rca.exhaustive_soundness(DEFAULT_BUDGET, DEFAULT_SEED);
    assert_eq!(rep.plan.cases, 729);
    assert!(rep.is_sound());

    let comp = build_compressor(13).unwrap();
    let rep = comp.exhaustive_soundness(DEFAULT_BUDGET, DEFAULT_SEED);
    assert!(rep.plan.exhaustive);
    assert_eq!(rep.plan.cases, 1_594_323);
    assert!(rep.is_sound());
    assert_eq!(rep.aborts, 0);
}

#[test]
fn complete_rca_carries_are_restricted() {
    // In a complete-style RCA every carry-in is still statically {0,1}.
    let net = build_rca(5, AdderStyle::Complete).unwrap();
    let cert = net.propagate_ranges();
    for c in net.cells().iter().filter(|c| c.kind == CellKind::TfaComplete) {
        assert_eq!(cert.range(c.inputs[2]), ValueSet::CARRY);
    }
}
