//! Prints the probability table for one encoding next to the reference.
//!
//! cargo run --release -p spikegate --example encoding_table -- <gap> <amp0> <amp1> [sign2] [horizon] [self 0|1] [runs] [seed]

use spikegate::encoding::{EncodingScheme, EncodingVariant};
use spikegate::neuron::Variant;
use spikegate::reference;
use spikegate::sweep::{run_sweep, SweepConfig};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: f64| args.get(i).map(|s| s.parse::<f64>().expect("number")).unwrap_or(d);
    let encoding = EncodingScheme {
        variant: EncodingVariant::B,
        spike_times: vec![0, num(0, 2.0) as u32],
        amp_zero: num(1, 1.0),
        amp_one: num(2, 2.0),
        reference_spikes: vec![],
        slot_signs: vec![1.0, num(3, 1.0)],
    };
    let config = SweepConfig {
        encoding,
        horizon: num(4, 20.0) as u32,
        self_connections: num(5, 1.0) != 0.0,
        runs: num(6, 200.0) as usize,
        seed: num(7, 1.0) as u64,
        t_r: std::env::var("T_R").ok().map_or(1, |s| s.parse().expect("T_R")),
        ..SweepConfig::default()
    };
    let report = run_sweep(&config).expect("sweep");
    for &beta in &config.betas {
        println!("beta = {beta}   probability % (reference) | mean l1 (reference)");
        for g in 0..7 {
            let mut line = format!("{g}");
            for v in Variant::ALL {
                let c = report.cell(g, v, beta).unwrap();
                let r = reference::probability(EncodingVariant::B, beta, g, v).unwrap();
                line += &format!(" | {v} {:5.1} ({:4.1})", c.probability_pct, r);
            }
            for v in [Variant::SRM, Variant::PRM] {
                let c = report.cell(g, v, beta).unwrap();
                let r = reference::l1_mean(EncodingVariant::B, beta, g, v);
                line += &format!(
                    " | l1 {v} {} ({})",
                    c.l1_mean.map_or("-".into(), |m| format!("{m:.1}")),
                    r.map_or("-".into(), |m| format!("{m:.1}"))
                );
            }
            println!("{line}");
        }
    }
}
