//! Monte Carlo solvability sweeps over gates, neuron variants and leak factors.
//!
//! Each run draws one weight matrix and reuses it for every
//! (variant, beta, gate) cell, so columns of a report compare variants on
//! the same draws. Runs are farmed out to a worker pool; per-run outcomes are
//! collected in run order and folded sequentially, which keeps reports
//! bit-identical for any worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::{all_gates, EncodingScheme, GatePartition, InputPattern};
use crate::neuron::{NeuronConfig, NeuronError, ResetMechanism, Variant};
use crate::reservoir::{sample_weights_with, simulate, ReservoirConfig, DEFAULT_HORIZON};
use crate::separability::{
    features, homogenize, is_separable, verify_certificate, FeatureVector, HullCertificate, SeparabilityError,
    SeparabilityInstance, CERTIFICATE_TOL,
};
use crate::spike::TimeStep;

/// Failure share above which a cell is flagged invalid.
pub const MAX_FAILURE_FRACTION: f64 = 0.01;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep config: {0}")]
    Config(String),
    #[error(transparent)]
    Neuron(#[from] NeuronError),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_neurons: usize,
    pub runs: usize,
    pub seed: u64,
    pub variants: Vec<Variant>,
    pub betas: Vec<f64>,
    pub encoding: EncodingScheme,
    pub theta: f64,
    /// Refractory ticks for the reset-by-subtraction variants; the others run with zero.
    pub t_r: u32,
    /// Last simulated tick (inclusive).
    pub horizon: u32,
    /// Whether sampled matrices may carry non-zero diagonal entries.
    pub self_connections: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_neurons: 2,
            runs: 200,
            seed: 1,
            variants: Variant::ALL.to_vec(),
            betas: vec![1.0, 0.5],
            encoding: EncodingScheme::default(),
            theta: 1.0,
            t_r: 1,
            horizon: DEFAULT_HORIZON,
            self_connections: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), SweepError> {
        let bad = |m: String| Err(SweepError::Config(m));
        if self.runs == 0 {
            return bad("runs must be >= 1".into());
        }
        if self.n_neurons == 0 {
            return bad("n_neurons must be >= 1".into());
        }
        if self.variants.is_empty() || self.betas.is_empty() {
            return bad("variants and betas must be non-empty".into());
        }
        if let Some(b) = self.betas.iter().find(|&&b| !(b > 0.0 && b <= 1.0)) {
            return bad(format!("beta {b} outside (0, 1]"));
        }
        self.encoding.validate().map_err(|e| SweepError::Config(e.to_string()))?;
        if self.encoding.last_time() >= self.horizon {
            return bad(format!(
                "horizon {} must exceed the last encoded input tick {}",
                self.horizon,
                self.encoding.last_time()
            ));
        }
        for &v in &self.variants {
            for &beta in &self.betas {
                self.neuron_config(v, beta)?;
            }
        }
        Ok(())
    }

    pub fn neuron_config(&self, variant: Variant, beta: f64) -> Result<NeuronConfig, NeuronError> {
        let t_r = if variant.reset() == ResetMechanism::BySubtraction { self.t_r } else { 0 };
        NeuronConfig::for_variant(variant, self.theta, beta, t_r)
    }

    /// Single-line `key=value` echo embedded in every report file.
    pub fn echo(&self) -> String {
        let variants: Vec<&str> = self.variants.iter().map(|v| v.name()).collect();
        let betas: Vec<String> = self.betas.iter().map(|b| format!("{b:?}")).collect();
        let e = &self.encoding;
        let refs: Vec<String> = e.reference_spikes.iter().map(|(t, a)| format!("{t}:{a:?}")).collect();
        format!(
            "seed={} runs={} n_neurons={} variants={} betas={} theta={:?} t_r={} horizon={} self_connections={} \
             encoding={} times={:?} amp0={:?} amp1={:?} signs={:?} refs=[{}]",
            self.seed,
            self.runs,
            self.n_neurons,
            variants.join(","),
            betas.join(","),
            self.theta,
            self.t_r,
            self.horizon,
            self.self_connections,
            e.variant,
            e.spike_times,
            e.amp_zero,
            e.amp_one,
            e.slot_signs,
            refs.join(",")
        )
    }
}

/// Mixes the base seed with the run index.
pub fn derive_seed(base: u64, run: usize) -> u64 {
    splitmix64(splitmix64(base).wrapping_add(run as u64))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// What a [`Decider`] knows about the cell it is deciding.
#[derive(Clone, Copy, Debug)]
pub struct DecisionContext {
    pub run: usize,
    pub run_seed: u64,
    pub gate: usize,
    pub variant: Variant,
    pub beta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decision {
    pub separable: bool,
    pub boundary: bool,
    pub certificate_verified: bool,
}

/// Turns a separability instance into a solvable/unsolvable call.
pub trait Decider: Sync {
    fn decide(&self, ctx: &DecisionContext, instance: &SeparabilityInstance) -> Result<Decision, SeparabilityError>;
}

/// The hull LP, with an independent re-check of whatever certificate it returns.
#[derive(Clone, Copy, Debug, Default)]
pub struct LpDecider;

impl Decider for LpDecider {
    fn decide(&self, _ctx: &DecisionContext, instance: &SeparabilityInstance) -> Result<Decision, SeparabilityError> {
        let verdict = is_separable(instance)?;
        let certificate_verified = match (&verdict.witness, &verdict.hull_weights) {
            (Some(w), None) => w.separates(instance),
            (None, Some(x)) => {
                verify_certificate(&homogenize(instance), &HullCertificate::Combination(x.clone()), CERTIFICATE_TOL)
                    .is_ok()
            }
            _ => false,
        };
        Ok(Decision { separable: verdict.separable, boundary: verdict.boundary, certificate_verified })
    }
}

/// Mean and population standard deviation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct L1Stats {
    pub mean: f64,
    pub std: f64,
}

/// Returns `None` ("not computable") for an empty sample.
pub fn l1_statistics(samples: &[f64]) -> Option<L1Stats> {
    if samples.is_empty() {
        return None;
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Some(L1Stats { mean, std: var.sqrt() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub gate: usize,
    pub class_a: String,
    pub variant: Variant,
    pub beta: f64,
    pub solvable_count: usize,
    /// Runs that produced a decision (failed runs excluded).
    pub runs: usize,
    pub failures: usize,
    pub boundary_count: usize,
    pub certificate_violations: usize,
    pub probability_pct: f64,
    pub l1_mean: Option<f64>,
    pub l1_std: Option<f64>,
    pub invalid: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    /// Ordered by beta, then variant, then gate, following the config lists.
    pub cells: Vec<SweepCell>,
    pub run_seeds: Vec<u64>,
}

impl SweepReport {
    pub fn cell(&self, gate: usize, variant: Variant, beta: f64) -> Option<&SweepCell> {
        self.cells.iter().find(|c| c.gate == gate && c.variant == variant && c.beta == beta)
    }

    pub fn any_invalid(&self) -> bool {
        self.cells.iter().any(|c| c.invalid)
    }

    pub fn certificate_violations(&self) -> usize {
        self.cells.iter().map(|c| c.certificate_violations).sum()
    }
}

#[derive(Clone, Copy, Debug)]
enum CellOutcome {
    Failed,
    Decided { decision: Decision, l1: f64 },
}

/// Runs the sweep with the LP decider on all available cores.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport, SweepError> {
    run_sweep_with(config, &LpDecider, 0)
}

/// Runs the sweep with a custom decider on `workers` threads (0 = rayon default).
pub fn run_sweep_with<D: Decider>(
    config: &SweepConfig,
    decider: &D,
    workers: usize,
) -> Result<SweepReport, SweepError> {
    config.validate()?;
    let gates = all_gates();
    let patterns: Vec<_> = InputPattern::ALL.iter().map(|&p| (p, config.encoding.encode(p))).collect();
    let settings: Vec<(Variant, f64, NeuronConfig)> = config
        .betas
        .iter()
        .flat_map(|&beta| config.variants.iter().map(move |&v| (v, beta)))
        .map(|(v, beta)| config.neuron_config(v, beta).map(|c| (v, beta, c)))
        .collect::<Result<_, _>>()?;

    let run_seeds: Vec<u64> = (0..config.runs).map(|r| derive_seed(config.seed, r)).collect();

    let evaluate_run = |run: usize| -> Vec<CellOutcome> {
        let seed = run_seeds[run];
        let weights = sample_weights_with(config.n_neurons, seed, config.self_connections);
        let mut out = Vec::with_capacity(settings.len() * gates.len());
        for &(variant, beta, neuron) in &settings {
            let rc = ReservoirConfig { neuron, weights: weights.clone(), horizon: TimeStep(config.horizon) };
            let simulated: Result<Vec<(FeatureVector, f64)>, _> = patterns
                .iter()
                .map(|(_, input)| {
                    simulate(&rc, input).map(|trains| {
                        let l1 = trains.iter().map(|t| t.l1_norm()).sum::<f64>();
                        (features(&trains), l1)
                    })
                })
                .collect();
            let Ok(simulated) = simulated else {
                out.extend(std::iter::repeat_n(CellOutcome::Failed, gates.len()));
                continue;
            };
            let l1: f64 = simulated.iter().map(|s| s.1).sum();
            for gate in &gates {
                let ctx = DecisionContext { run, run_seed: seed, gate: gate.id, variant, beta };
                let outcome = gate_instance(gate, &simulated)
                    .and_then(|inst| decider.decide(&ctx, &inst))
                    .map(|decision| CellOutcome::Decided { decision, l1 })
                    .unwrap_or(CellOutcome::Failed);
                out.push(outcome);
            }
        }
        out
    };

    let mut builder = rayon::ThreadPoolBuilder::new();
    if workers > 0 {
        builder = builder.num_threads(workers);
    }
    let pool = builder.build().map_err(|e| SweepError::Pool(e.to_string()))?;
    let per_run: Vec<Vec<CellOutcome>> = pool.install(|| (0..config.runs).into_par_iter().map(evaluate_run).collect());

    let mut cells = Vec::with_capacity(settings.len() * gates.len());
    for (s, &(variant, beta, _)) in settings.iter().enumerate() {
        for gate in &gates {
            let idx = s * gates.len() + gate.id;
            let mut solvable = 0;
            let mut decided = 0;
            let mut failures = 0;
            let mut boundary = 0;
            let mut violations = 0;
            let mut l1_samples = Vec::new();
            for run in &per_run {
                match run[idx] {
                    CellOutcome::Failed => failures += 1,
                    CellOutcome::Decided { decision, l1 } => {
                        decided += 1;
                        boundary += decision.boundary as usize;
                        violations += (!decision.certificate_verified) as usize;
                        if decision.separable {
                            solvable += 1;
                            l1_samples.push(l1);
                        }
                    }
                }
            }
            let stats = l1_statistics(&l1_samples);
            cells.push(SweepCell {
                gate: gate.id,
                class_a: gate.class_a_label(),
                variant,
                beta,
                solvable_count: solvable,
                runs: decided,
                failures,
                boundary_count: boundary,
                certificate_violations: violations,
                probability_pct: if decided > 0 { 100.0 * solvable as f64 / decided as f64 } else { 0.0 },
                l1_mean: stats.map(|s| s.mean),
                l1_std: stats.map(|s| s.std),
                invalid: failures as f64 > MAX_FAILURE_FRACTION * config.runs as f64,
            });
        }
    }
    Ok(SweepReport { config: config.clone(), cells, run_seeds })
}

fn gate_instance(
    gate: &GatePartition,
    simulated: &[(FeatureVector, f64)],
) -> Result<SeparabilityInstance, SeparabilityError> {
    let pick = |side: &[InputPattern]| side.iter().map(|p| simulated[p.index()].0.clone()).collect();
    SeparabilityInstance::new(pick(&gate.class_a), pick(&gate.class_b))
}
