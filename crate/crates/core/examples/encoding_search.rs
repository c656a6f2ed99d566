//! Grid search over two-slot encodings and simulation horizons, scored
//! against the reference tables for encoding B.
//!
//! cargo run --release -p spikegate --example encoding_search [-- runs]

use spikegate::encoding::{EncodingScheme, EncodingVariant};
use spikegate::neuron::Variant;
use spikegate::reference;
use spikegate::sweep::{run_sweep, SweepConfig};

const AMPS: [f64; 9] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0];

struct Score {
    sign2: f64,
    self_connections: bool,
    prob_mae: f64,
    l1_log_err: f64,
    gap: u32,
    extra: u32,
    amp_zero: f64,
    amp_one: f64,
    prm_every_gate: bool,
    prm_sparser: usize,
    zero_columns: bool,
    prm_gate0: f64,
}

fn main() {
    let runs: usize = std::env::args().nth(1).map_or(200, |s| s.parse().expect("runs"));
    let mut results = Vec::new();
    for (sign2, self_connections) in [(1.0, true), (-1.0, true), (1.0, false), (-1.0, false)] {
        for gap in 1..=3u32 {
            for extra in [1u32, 2, 4, 18] {
                for &amp_zero in &AMPS {
                    for &amp_one in &AMPS {
                        if amp_zero == amp_one {
                            continue;
                        }
                        let encoding = EncodingScheme {
                            variant: EncodingVariant::B,
                            spike_times: vec![0, gap],
                            amp_zero,
                            amp_one,
                            reference_spikes: vec![],
                            slot_signs: vec![1.0, sign2],
                        };
                        let config = SweepConfig {
                            encoding,
                            runs,
                            horizon: gap + extra,
                            self_connections,
                            ..SweepConfig::default()
                        };
                        results.push(score(&config, gap, extra));
                    }
                }
            }
        }
    }
    results.retain(|r| r.zero_columns && r.prm_every_gate);
    results.sort_by(|a, b| a.prob_mae.total_cmp(&b.prob_mae));
    println!("prob_mae\tl1_logerr\tgap\thorizon\tsign2\tself\tamp0\tamp1\tprm_all\tsparser\tzero_cols\tprm_g0");
    for r in results.iter().take(40) {
        println!(
            "{:.2}\t{:.2}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.1}",
            r.prob_mae,
            r.l1_log_err,
            r.gap,
            r.gap + r.extra,
            r.sign2,
            r.self_connections,
            r.amp_zero,
            r.amp_one,
            r.prm_every_gate,
            r.prm_sparser,
            r.zero_columns,
            r.prm_gate0
        );
    }
}

fn score(config: &SweepConfig, gap: u32, extra: u32) -> Score {
    let report = run_sweep(config).expect("sweep");
    let (mut err, mut n) = (0.0, 0.0);
    let (mut lerr, mut ln) = (0.0, 0.0);
    for c in &report.cells {
        if let Some(r) = reference::probability(EncodingVariant::B, c.beta, c.gate, c.variant) {
            err += (c.probability_pct - r).abs();
            n += 1.0;
        }
        if let (Some(m), Some(r)) = (c.l1_mean, reference::l1_mean(EncodingVariant::B, c.beta, c.gate, c.variant)) {
            lerr += (m.max(1e-3) / r).ln().abs();
            ln += 1.0;
        }
    }
    let prm_every_gate = (0..7).all(|g| report.cell(g, Variant::PRM, 0.5).unwrap().solvable_count > 0);
    let prm_sparser = (0..7)
        .filter(|&g| {
            let p = report.cell(g, Variant::PRM, 0.5).unwrap().l1_mean;
            let s = report.cell(g, Variant::SRM, 0.5).unwrap().l1_mean;
            matches!((p, s), (Some(p), Some(s)) if p <= s)
        })
        .count();
    let zero_columns =
        report.cells.iter().filter(|c| matches!(c.variant, Variant::SRZ | Variant::PRZ)).all(|c| c.solvable_count == 0);
    Score {
        sign2: config.encoding.slot_signs[1],
        self_connections: config.self_connections,
        prob_mae: err / n,
        l1_log_err: if ln > 0.0 { lerr / ln } else { 10.0 },
        gap,
        extra,
        amp_zero: config.encoding.amp_zero,
        amp_one: config.encoding.amp_one,
        prm_every_gate,
        prm_sparser,
        zero_columns,
        prm_gate0: report.cell(0, Variant::PRM, 0.5).unwrap().probability_pct,
    }
}
