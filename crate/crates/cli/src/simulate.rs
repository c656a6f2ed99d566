use std::path::PathBuf;

use clap::Args;
use spikegate::neuron::run_traced;
use spikegate::reservoir::{sample_weights_with, simulate_traced, DEFAULT_HORIZON};
use spikegate::{InputPattern, ReservoirConfig, SpikeTrain, TimeStep, WeightMatrix};

use crate::{CliError, ModelArgs};

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Input train as `tick:amplitude` pairs, e.g. "0:2.3,4:-1".
    #[arg(long, conflicts_with = "pattern")]
    input: Option<String>,
    /// Bit pair to encode instead of an explicit train, e.g. "01".
    #[arg(long)]
    pattern: Option<String>,
    /// Weight matrix CSV; switches to reservoir mode.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Sample a reservoir of this size from `--seed` (ignored with `--weights`).
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    self_connections: bool,
}

/// Fixed-point with trailing zeros trimmed, so that `2.3 - 2.0` prints as `0.3`.
pub fn fmt_real(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".to_string(),
        s => s.to_string(),
    }
}

fn parse_pattern(s: &str) -> Result<InputPattern, CliError> {
    let bits: Vec<char> = s.chars().filter(|c| !matches!(c, ',' | '(' | ')' | ' ')).collect();
    match bits.as_slice() {
        [a, b] if "01".contains(*a) && "01".contains(*b) => Ok(InputPattern::new(*a == '1', *b == '1')),
        _ => Err(CliError::Input(format!("bad --pattern `{s}`: expected two bits such as 01"))),
    }
}

pub fn run(a: &SimulateArgs) -> Result<u8, CliError> {
    let input = match (&a.input, &a.pattern) {
        (Some(text), _) => text.parse::<SpikeTrain>().map_err(|e| CliError::Input(format!("--input: {e}")))?,
        (None, Some(p)) => a.model.scheme().encode(parse_pattern(p)?),
        (None, None) => return Err(CliError::Input("one of --input or --pattern is required".into())),
    };
    let neuron = a.model.neuron()?;
    let weights = match (&a.weights, a.sample) {
        (Some(path), _) => Some(a.model.load_weights(path)?),
        (None, Some(n)) if n > 0 => Some(sample_weights_with(n, a.seed, a.self_connections)),
        (None, Some(_)) => return Err(CliError::Input("--sample must be at least 1".into())),
        (None, None) => None,
    };
    println!("input: {input}");
    match weights {
        None => single(&neuron, &input, a.model.horizon),
        Some(w) => reservoir(neuron, w, &input, a.model.horizon, a.sample.is_some() && a.weights.is_none()),
    }
}

fn single(neuron: &spikegate::NeuronConfig, input: &SpikeTrain, horizon: Option<u32>) -> Result<u8, CliError> {
    let last = input.last_time().map_or(0, |t| t.0);
    let horizon = horizon.unwrap_or(last);
    let trace = run_traced(neuron, input, TimeStep(horizon)).map_err(|e| CliError::Input(e.to_string()))?;
    println!("tick input u emitted");
    for r in &trace {
        println!("{} {} {} {}", r.time.0, fmt_real(r.input), fmt_real(r.u), fmt_real(r.emitted));
    }
    let out = SpikeTrain::from_pairs(trace.iter().map(|r| (r.time.0, r.emitted)));
    println!("spikes: {out}");
    println!("final u: {}", fmt_real(trace.last().map_or(0.0, |r| r.u)));
    Ok(0)
}

fn reservoir(
    neuron: spikegate::NeuronConfig,
    weights: WeightMatrix,
    input: &SpikeTrain,
    horizon: Option<u32>,
    print_weights: bool,
) -> Result<u8, CliError> {
    if print_weights {
        let mut buf = Vec::new();
        weights.write_csv(&mut buf).map_err(|e| CliError::Input(e.to_string()))?;
        print!("weights:\n{}", String::from_utf8_lossy(&buf));
    }
    let n = weights.n();
    let rc = ReservoirConfig { neuron, weights, horizon: TimeStep(horizon.unwrap_or(DEFAULT_HORIZON)) };
    let trace = simulate_traced(&rc, input).map_err(|e| CliError::Input(e.to_string()))?;
    let u_cols: Vec<String> = (0..n).map(|k| format!("u{k}")).collect();
    let e_cols: Vec<String> = (0..n).map(|k| format!("e{k}")).collect();
    println!("tick {} {}", u_cols.join(" "), e_cols.join(" "));
    for r in &trace {
        let u: Vec<String> = r.u.iter().map(|&x| fmt_real(x)).collect();
        let e: Vec<String> = r.emitted.iter().map(|&x| fmt_real(x)).collect();
        println!("{} {} {}", r.time.0, u.join(" "), e.join(" "));
    }
    for k in 0..n {
        let psi = SpikeTrain::from_pairs(trace.iter().map(|r| (r.time.0, r.emitted[k])));
        println!("psi{k}: {psi}");
    }
    Ok(0)
}
