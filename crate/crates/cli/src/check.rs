use std::path::{Path, PathBuf};

use clap::Args;
use spikegate::reservoir::DEFAULT_HORIZON;
use spikegate::{
    all_gates, features, is_separable, simulate, FeatureVector, InputPattern, ReservoirConfig, SeparabilityInstance,
    TimeStep,
};

use crate::simulate::fmt_real;
use crate::{CliError, ModelArgs};

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["weights", "features"])))]
pub struct CheckArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Gate id 0..=6 (6 is XOR).
    #[arg(long, default_value_t = spikegate::XOR_GATE)]
    gate: usize,
    /// Weight matrix CSV; features come from simulating the four patterns.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Four feature vectors, one CSV row per pattern in the order 00, 01, 10, 11.
    #[arg(long)]
    features: Option<PathBuf>,
}

fn read_features(path: &Path) -> Result<Vec<FeatureVector>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|tok| {
                tok.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                    CliError::Input(format!("{} line {}: cannot parse `{}`", path.display(), i + 1, tok.trim()))
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(FeatureVector(row));
    }
    if rows.len() != 4 {
        return Err(CliError::Input(format!("{}: expected 4 feature rows, found {}", path.display(), rows.len())));
    }
    if rows.iter().any(|r| r.0.len() != rows[0].0.len()) {
        return Err(CliError::Input(format!("{}: feature rows differ in length", path.display())));
    }
    Ok(rows)
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| fmt_real(x)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn run(a: &CheckArgs) -> Result<u8, CliError> {
    let gates = all_gates();
    let gate = gates
        .get(a.gate)
        .ok_or_else(|| CliError::Input(format!("--gate {} out of range 0..={}", a.gate, gates.len() - 1)))?;

    let vectors = match (&a.features, &a.weights) {
        (Some(path), _) => read_features(path)?,
        (None, Some(path)) => {
            let weights = a.model.load_weights(path)?;
            let rc = ReservoirConfig {
                neuron: a.model.neuron()?,
                weights,
                horizon: TimeStep(a.model.horizon.unwrap_or(DEFAULT_HORIZON)),
            };
            let scheme = a.model.scheme();
            InputPattern::ALL
                .iter()
                .map(|&p| simulate(&rc, &scheme.encode(p)).map(|t| features(&t)))
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Input(e.to_string()))?
        }
        (None, None) => unreachable!("clap enforces one source"),
    };

    for p in InputPattern::ALL {
        println!("{p} {}", fmt_vec(&vectors[p.index()].0));
    }
    let pick = |side: &[InputPattern]| side.iter().map(|p| vectors[p.index()].clone()).collect();
    let instance = SeparabilityInstance::new(pick(&gate.class_a), pick(&gate.class_b))
        .map_err(|e| CliError::Input(e.to_string()))?;
    println!("gate {}: class A {}", gate.id, gate.class_a_label());

    let verdict = is_separable(&instance).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(w) = &verdict.witness {
        println!("verdict: separable");
        println!("witness: D = {} threshold = {}", fmt_vec(&w.decoder), fmt_real(w.threshold));
    }
    if let Some(x) = &verdict.hull_weights {
        println!("verdict: not separable");
        println!("hull weights (class A then class B): {}", fmt_vec(x));
    }
    println!("boundary: {}", verdict.boundary);
    Ok(if verdict.separable { 0 } else { 1 })
}
