use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spikegate::encoding::EncodingVariant;
use spikegate::Variant;
use thiserror::Error;

mod check;
mod config;
mod manifest;
mod simulate;
mod sweep;

use config::Layout;

/// Leaky integrate-and-fire reservoirs for binary logic gates.
#[derive(Parser, Debug)]
#[command(name = "spikegate", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trace a single neuron, or a reservoir when a weight matrix is given.
    Simulate(simulate::SimulateArgs),
    /// Decide one gate on one reservoir (or on raw feature vectors).
    Check(check::CheckArgs),
    /// Run a Monte Carlo solvability sweep and write reports.
    Sweep(sweep::SweepArgs),
}

/// Neuron and encoding flags shared by `simulate` and `check`.
#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, default_value = "PRM")]
    pub variant: Variant,
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Refractory ticks (reset-by-subtraction variants only).
    #[arg(long = "t-r", default_value_t = 0)]
    pub t_r: u32,
    #[arg(long, default_value = "B")]
    pub encoding: EncodingVariant,
    #[arg(long, value_enum, default_value_t = Layout::Graded)]
    pub layout: Layout,
    /// Last simulated tick, inclusive.
    #[arg(long)]
    pub horizon: Option<u32>,
    /// Expected reservoir size; a weight file of another size is rejected.
    #[arg(long)]
    pub n: Option<usize>,
}

impl ModelArgs {
    pub fn neuron(&self) -> Result<spikegate::NeuronConfig, CliError> {
        let t_r = if self.variant.reset() == spikegate::ResetMechanism::BySubtraction { self.t_r } else { 0 };
        spikegate::NeuronConfig::for_variant(self.variant, self.theta, self.beta, t_r)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn scheme(&self) -> spikegate::EncodingScheme {
        let mut s = config::EncodingSection::default();
        s.select(self.encoding, Some(self.layout));
        s.scheme()
    }

    pub fn load_weights(&self, path: &std::path::Path) -> Result<spikegate::WeightMatrix, CliError> {
        let file = std::fs::File::open(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        let w =
            spikegate::WeightMatrix::read_csv(file).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        if let Some(n) = self.n {
            if w.n() != n {
                return Err(CliError::Input(format!(
                    "{}: matrix is {}x{} but --n is {n}",
                    path.display(),
                    w.n(),
                    w.n()
                )));
            }
        }
        Ok(w)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("input: {0}")]
    Input(String),
}

pub fn out_dir_default() -> PathBuf {
    PathBuf::from("spikegate-out")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate::run(&a),
        Command::Check(a) => check::run(&a),
        Command::Sweep(a) => sweep::run(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
