use spikegate::report::{csv_table, Table};
use spikegate::sweep::{run_sweep_with, LpDecider};
use spikegate::{
    all_gates, features, is_separable, sample_weights, simulate, EncodingScheme, EncodingVariant, InputPattern,
    NeuronConfig, ReservoirConfig, SeparabilityInstance, SpikeTrain, SweepConfig, TimeStep, Variant, WeightMatrix,
    XOR_GATE,
};

fn reservoir(variant: Variant, beta: f64, weights: WeightMatrix) -> ReservoirConfig {
    ReservoirConfig {
        neuron: NeuronConfig::for_variant(variant, 1.0, beta, 0).unwrap(),
        weights,
        horizon: TimeStep(20),
    }
}

fn gate_instance(cfg: &ReservoirConfig, scheme: &EncodingScheme, gate: usize) -> SeparabilityInstance {
    let g = &all_gates()[gate];
    let pick = |class: &[InputPattern]| {
        class.iter().map(|&p| features(&simulate(cfg, &scheme.encode(p)).unwrap())).collect::<Vec<_>>()
    };
    SeparabilityInstance::new(pick(&g.class_a), pick(&g.class_b)).unwrap()
}

#[test]
fn relay_reservoir_reaches_neuron_one_a_tick_later() {
    let w = WeightMatrix::from_rows(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
    let out = simulate(&reservoir(Variant::PRM, 1.0, w), &SpikeTrain::from_pairs([(0, 1.0)])).unwrap();
    assert_eq!(out[0], SpikeTrain::from_pairs([(0, 1.0)]));
    assert_eq!(out[1], SpikeTrain::from_pairs([(1, 1.0)]));
}

#[test]
fn silent_reservoir_cannot_solve_xor() {
    // zero weights: neuron 1 never fires, features collapse onto one axis
    let cfg = reservoir(Variant::PRM, 1.0, WeightMatrix::zeros(2));
    let scheme = EncodingScheme::preset(EncodingVariant::B);
    let v = is_separable(&gate_instance(&cfg, &scheme, XOR_GATE)).unwrap();
    assert!(!v.separable);
    assert!(v.hull_weights.is_some());
}

#[test]
fn separable_verdicts_carry_a_working_witness() {
    let scheme = EncodingScheme::graded(EncodingVariant::B);
    let mut seen = 0;
    for seed in 0..40 {
        let cfg = reservoir(Variant::PRM, 0.5, sample_weights(2, seed));
        for gate in 0..7 {
            let inst = gate_instance(&cfg, &scheme, gate);
            let v = is_separable(&inst).unwrap();
            if v.separable {
                seen += 1;
                assert!(v.witness.unwrap().separates(&inst), "seed {seed} gate {gate}");
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn weight_csv_round_trips() {
    let w = sample_weights(3, 11);
    let mut buf = Vec::new();
    w.write_csv(&mut buf).unwrap();
    assert_eq!(WeightMatrix::read_csv(buf.as_slice()).unwrap(), w);
}

#[test]
fn sweep_tables_do_not_depend_on_worker_count() {
    let config = SweepConfig { runs: 24, variants: vec![Variant::PRM, Variant::SRS], ..SweepConfig::default() };
    let one = run_sweep_with(&config, &LpDecider, 1).unwrap();
    let four = run_sweep_with(&config, &LpDecider, 4).unwrap();
    for table in Table::ALL {
        assert_eq!(csv_table(&one, table), csv_table(&four, table));
    }
    assert!(!one.any_invalid());
    assert_eq!(one.cells.len(), 7 * 2 * 2);
}
