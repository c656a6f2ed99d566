//! Fully connected reservoir of identical LIF neurons driven by one input
//! channel.
//!
//! The input feeds neuron 0 only, with unit weight. Recurrent spikes travel
//! with one tick of delay: at tick `t` neuron `k` receives
//! `sum_j w[j][k] * emitted_j(t - 1)`.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::neuron::{self, NeuronConfig, NeuronError, NeuronState};
use crate::spike::{SpikeTrain, TimeStep};

#[derive(Debug, Error)]
pub enum ReservoirError {
    #[error("neuron {neuron}: {source}")]
    Neuron { neuron: usize, source: NeuronError },
    #[error("horizon {horizon} must exceed the last input tick {last}")]
    HorizonTooShort { horizon: u32, last: u32 },
    #[error("weight matrix must be non-empty and square: {0}")]
    Shape(String),
    #[error("weight w[{row}][{col}] = {value} outside [-1, 1]")]
    OutOfRange { row: usize, col: usize, value: f64 },
    #[error("weight csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("weight csv line {line}: cannot parse `{token}`")]
    Parse { line: usize, token: String },
}

/// Square recurrent weight matrix; `get(j, k)` is the weight from neuron `j`
/// into neuron `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightMatrix {
    n: usize,
    w: Vec<f64>,
}

/// Number of distinct values on the sampling grid {-1.0, -0.9, ..., 1.0}.
pub const GRID_LEVELS: u32 = 21;

impl WeightMatrix {
    pub fn zeros(n: usize) -> Self {
        WeightMatrix { n, w: vec![0.0; n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, ReservoirError> {
        let n = rows.len();
        if n == 0 {
            return Err(ReservoirError::Shape("no rows".into()));
        }
        let mut w = Vec::with_capacity(n * n);
        for (j, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(ReservoirError::Shape(format!("row {j} has {} entries, expected {n}", row.len())));
            }
            for (k, &value) in row.iter().enumerate() {
                if !(-1.0..=1.0).contains(&value) {
                    return Err(ReservoirError::OutOfRange { row: j, col: k, value });
                }
            }
            w.extend(row);
        }
        Ok(WeightMatrix { n, w })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.w[from * self.n + to]
    }

    pub fn set(&mut self, from: usize, to: usize, value: f64) -> Result<(), ReservoirError> {
        if !(-1.0..=1.0).contains(&value) {
            return Err(ReservoirError::OutOfRange { row: from, col: to, value });
        }
        self.w[from * self.n + to] = value;
        Ok(())
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.w.chunks(self.n)
    }

    pub fn entries(&self) -> &[f64] {
        &self.w
    }

    /// Row-major CSV, one row per presynaptic neuron, no header.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self, ReservoirError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .flexible(true)
            .from_reader(reader);
        let mut rows = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record?;
            let line = record.position().map(|p| p.line() as usize).unwrap_or(i + 1);
            let row = record
                .iter()
                .map(|tok| tok.parse::<f64>().map_err(|_| ReservoirError::Parse { line, token: tok.to_string() }))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), ReservoirError> {
        let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        for row in self.rows() {
            wtr.write_record(row.iter().map(|v| format!("{v:?}")))?;
        }
        wtr.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Draws an `n x n` matrix with entries uniform on the 21-point grid
/// `{-1.0, -0.9, ..., 1.0}`, self-connections included.
pub fn sample_weights(n: usize, rng_seed: u64) -> WeightMatrix {
    sample_weights_with(n, rng_seed, true)
}

/// As [`sample_weights`]; with `self_connections = false` the diagonal is zero.
pub fn sample_weights_with(n: usize, rng_seed: u64, self_connections: bool) -> WeightMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut w = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let level = rng.random_range(0..GRID_LEVELS) as i32 - 10;
            w.push(if j == k && !self_connections { 0.0 } else { level as f64 / 10.0 });
        }
    }
    WeightMatrix { n, w }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReservoirConfig {
    pub neuron: NeuronConfig,
    pub weights: WeightMatrix,
    /// Last simulated tick (inclusive).
    pub horizon: TimeStep,
}

/// Default last tick for small reservoirs.
pub const DEFAULT_HORIZON: u32 = 20;

/// Membrane potentials and emissions of all neurons after one tick.
#[derive(Clone, Debug, PartialEq)]
pub struct ReservoirTick {
    pub time: TimeStep,
    pub u: Vec<f64>,
    pub emitted: Vec<f64>,
}

/// Runs the reservoir from rest over ticks `0..=horizon` and returns one
/// output train per neuron.
pub fn simulate(config: &ReservoirConfig, input: &SpikeTrain) -> Result<Vec<SpikeTrain>, ReservoirError> {
    let trace = simulate_traced(config, input)?;
    let n = config.weights.n();
    Ok((0..n)
        .map(|k| SpikeTrain::from_pairs(trace.iter().filter(|r| r.emitted[k] != 0.0).map(|r| (r.time.0, r.emitted[k]))))
        .collect())
}

/// As [`simulate`], keeping every neuron's potential after each tick.
pub fn simulate_traced(config: &ReservoirConfig, input: &SpikeTrain) -> Result<Vec<ReservoirTick>, ReservoirError> {
    let horizon = config.horizon.0;
    if let Some(last) = input.last_time() {
        if last.0 >= horizon {
            return Err(ReservoirError::HorizonTooShort { horizon, last: last.0 });
        }
    }
    let w = &config.weights;
    let n = w.n();
    let mut states = vec![NeuronState::default(); n];
    let mut prev = vec![0.0; n];
    let mut trace = Vec::with_capacity(horizon as usize + 1);
    for t in 0..=horizon {
        let external = input.amplitude_at(TimeStep(t));
        let mut emitted = vec![0.0; n];
        for k in 0..n {
            let mut drive = if k == 0 { external } else { 0.0 };
            for (j, &s) in prev.iter().enumerate() {
                if s != 0.0 {
                    drive += w.get(j, k) * s;
                }
            }
            let (next, e) = neuron::step(&config.neuron, states[k], drive)
                .map_err(|source| ReservoirError::Neuron { neuron: k, source: neuron::with_tick(source, t) })?;
            states[k] = next;
            emitted[k] = e;
        }
        trace.push(ReservoirTick {
            time: TimeStep(t),
            u: states.iter().map(|s| s.u).collect(),
            emitted: emitted.clone(),
        });
        prev = emitted;
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuron::{ResetMechanism, Variant};
    use proptest::prelude::*;

    fn prm() -> NeuronConfig {
        NeuronConfig::for_variant(Variant::PRM, 1.0, 1.0, 0).unwrap()
    }

    #[test]
    fn single_neuron_matches_lif_trace() {
        let cfg = ReservoirConfig { neuron: prm(), weights: WeightMatrix::zeros(1), horizon: TimeStep(5) };
        let out = simulate(&cfg, &SpikeTrain::from_pairs([(0, 2.3)])).unwrap();
        assert_eq!(out, vec![SpikeTrain::from_pairs([(0, 2.0)])]);
    }

    #[test]
    fn empty_input_is_silent() {
        let cfg = ReservoirConfig { neuron: prm(), weights: sample_weights(3, 9), horizon: TimeStep(20) };
        let out = simulate(&cfg, &SpikeTrain::new()).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out.iter().all(|t| t.is_empty()));
    }

    #[test]
    fn one_tick_relay() {
        let weights = WeightMatrix::from_rows(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let cfg = ReservoirConfig { neuron: prm(), weights, horizon: TimeStep(5) };
        let out = simulate(&cfg, &SpikeTrain::from_pairs([(0, 1.0)])).unwrap();
        assert_eq!(out[0], SpikeTrain::from_pairs([(0, 1.0)]));
        assert_eq!(out[1], SpikeTrain::from_pairs([(1, 1.0)]));
    }

    #[test]
    fn horizon_must_cover_input() {
        let cfg = ReservoirConfig { neuron: prm(), weights: WeightMatrix::zeros(2), horizon: TimeStep(2) };
        assert!(matches!(
            simulate(&cfg, &SpikeTrain::from_pairs([(2, 1.0)])),
            Err(ReservoirError::HorizonTooShort { .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_on_grid() {
        let a = sample_weights(2, 42);
        assert_eq!(a.entries().len(), 4);
        assert_eq!(a, sample_weights(2, 42));
        assert_ne!(sample_weights(8, 1), sample_weights(8, 2));
        let grid: Vec<f64> = (-10..=10).map(|i| i as f64 / 10.0).collect();
        for &v in sample_weights(10, 3).entries() {
            assert!(grid.contains(&v), "{v} not on grid");
        }
        let no_diag = sample_weights_with(5, 3, false);
        for k in 0..5 {
            assert_eq!(no_diag.get(k, k), 0.0);
        }
    }

    #[test]
    fn sampling_is_uniform_over_grid() {
        // 100 x 100 = 10^4 draws; each level should appear 1/21 +- 0.01 of the time
        let m = sample_weights(100, 2024);
        let mut counts = [0usize; 21];
        for &v in m.entries() {
            counts[((v * 10.0).round() as i32 + 10) as usize] += 1;
        }
        let total = m.entries().len() as f64;
        for (i, &c) in counts.iter().enumerate() {
            let freq = c as f64 / total;
            assert!((freq - 1.0 / 21.0).abs() <= 0.01, "level {i}: {freq}");
        }
        // chi-square with 20 dof; 0.999 quantile is about 45.3
        let expected = total / 21.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 45.3, "chi2 = {chi2}");
    }

    #[test]
    fn csv_round_trip_and_validation() {
        let m = sample_weights(3, 11);
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        assert_eq!(WeightMatrix::read_csv(buf.as_slice()).unwrap(), m);

        let three_by_two = "0.1,0.2\n0.3,0.4\n0.5,0.6\n";
        assert!(matches!(WeightMatrix::read_csv(three_by_two.as_bytes()), Err(ReservoirError::Shape(_))));
        assert!(matches!(
            WeightMatrix::read_csv("0.1,1.5\n0,0\n".as_bytes()),
            Err(ReservoirError::OutOfRange { row: 0, col: 1, .. })
        ));
        assert!(matches!(WeightMatrix::read_csv("0.1,x\n0,0\n".as_bytes()), Err(ReservoirError::Parse { .. })));
    }

    fn arb_symmetric_config() -> impl Strategy<Value = (NeuronConfig, u64, usize)> {
        (
            prop::sample::select(vec![Variant::SRM, Variant::SRS, Variant::SRZ]),
            prop::sample::select(vec![1.0, 0.5, 0.8]),
            0u32..3,
            any::<u64>(),
            1usize..5,
        )
            .prop_map(|(v, beta, t_r, seed, n)| {
                let t_r = if v.reset() == ResetMechanism::ToMod { 0 } else { t_r };
                (NeuronConfig::for_variant(v, 1.0, beta, t_r).unwrap(), seed, n)
            })
    }

    fn arb_input() -> impl Strategy<Value = SpikeTrain> {
        prop::collection::vec((0u32..10, -3.0f64..3.0), 0..8).prop_map(SpikeTrain::from_pairs)
    }

    proptest! {
        #[test]
        fn odd_symmetry_lifts_to_reservoir((neuron, seed, n) in arb_symmetric_config(), input in arb_input()) {
            let cfg = ReservoirConfig { neuron, weights: sample_weights(n, seed), horizon: TimeStep(20) };
            let pos = simulate(&cfg, &input).unwrap();
            let neg = simulate(&cfg, &-&input).unwrap();
            for (p, q) in pos.iter().zip(&neg) {
                prop_assert_eq!(q, &-p);
            }
        }

        #[test]
        fn causal_and_deterministic(seed in any::<u64>(), input in arb_input(), v in prop::sample::select(Variant::ALL.to_vec())) {
            let t_r = if v.reset() == ResetMechanism::ToMod { 0 } else { 1 };
            let cfg = ReservoirConfig {
                neuron: NeuronConfig::for_variant(v, 1.0, 0.5, t_r).unwrap(),
                weights: sample_weights(3, seed),
                horizon: TimeStep(20),
            };
            let out = simulate(&cfg, &input).unwrap();
            prop_assert_eq!(&out, &simulate(&cfg, &input).unwrap());
            if let Some(first) = input.first_time() {
                for t in &out {
                    if let Some(ft) = t.first_time() {
                        prop_assert!(ft >= first);
                    }
                }
            } else {
                prop_assert!(out.iter().all(|t| t.is_empty()));
            }
        }

        #[test]
        fn silenced_neuron_can_be_deleted(seed in any::<u64>(), input in arb_input(), drop in 1usize..4) {
            // zero the outgoing row of `drop`; the rest must match a reservoir without it
            let neuron = NeuronConfig::for_variant(Variant::SRM, 1.0, 0.5, 0).unwrap();
            let full = sample_weights(4, seed);
            let mut silenced = full.clone();
            for k in 0..4 {
                silenced.set(drop, k, 0.0).unwrap();
            }
            let keep: Vec<usize> = (0..4).filter(|&k| k != drop).collect();
            let reduced = WeightMatrix::from_rows(
                keep.iter().map(|&j| keep.iter().map(|&k| full.get(j, k)).collect()).collect(),
            ).unwrap();
            let a = simulate(&ReservoirConfig { neuron, weights: silenced, horizon: TimeStep(20) }, &input).unwrap();
            let b = simulate(&ReservoirConfig { neuron, weights: reduced, horizon: TimeStep(20) }, &input).unwrap();
            for (i, &k) in keep.iter().enumerate() {
                prop_assert_eq!(&a[k], &b[i]);
            }
        }
    }
}
