use std::path::PathBuf;

use clap::Args;
use spikegate::encoding::EncodingVariant;
use spikegate::report::{probability_text, write_reports};
use spikegate::sweep::{run_sweep_with, LpDecider, SweepError};
use spikegate::Variant;

use crate::config::{FileConfig, Layout};
use crate::manifest::{self, RunManifest};
use crate::CliError;

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// TOML config; omitted keys take the built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Re-run the sweep recorded in a manifest (flags below still override).
    #[arg(long, conflicts_with = "config")]
    manifest: Option<PathBuf>,
    /// Output directory for reports and the manifest.
    #[arg(long, env = "SPIKEGATE_OUT")]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long = "t-r")]
    t_r: Option<u32>,
    #[arg(long)]
    horizon: Option<u32>,
    #[arg(long = "variants", visible_alias = "variant", value_delimiter = ',')]
    variants: Option<Vec<Variant>>,
    #[arg(long = "betas", visible_alias = "beta", value_delimiter = ',')]
    betas: Option<Vec<f64>>,
    /// Encoding family; replaces the config file's encoding section.
    #[arg(long)]
    encoding: Option<EncodingVariant>,
    #[arg(long, value_enum, requires = "encoding")]
    layout: Option<Layout>,
    #[arg(long)]
    self_connections: Option<bool>,
}

impl SweepArgs {
    fn apply(&self, f: &mut FileConfig) {
        macro_rules! set {
            ($src:expr, $dst:expr) => {
                if let Some(v) = &$src {
                    $dst = Some(v.clone());
                }
            };
        }
        set!(self.runs, f.sweep.runs);
        set!(self.seed, f.sweep.seed);
        set!(self.variants, f.sweep.variants);
        set!(self.betas, f.sweep.betas);
        set!(self.n, f.reservoir.n);
        set!(self.horizon, f.reservoir.horizon);
        set!(self.self_connections, f.reservoir.self_connections);
        set!(self.theta, f.neuron.theta);
        set!(self.t_r, f.neuron.t_r);
        if let Some(e) = self.encoding {
            f.encoding.select(e, self.layout);
        }
    }
}

pub fn run(a: &SweepArgs) -> Result<u8, CliError> {
    let (mut file, recorded_out) = match (&a.config, &a.manifest) {
        (Some(p), _) => (FileConfig::load(p)?, None),
        (None, Some(p)) => {
            let m = RunManifest::load(p)?;
            (m.config, Some(PathBuf::from(m.out_dir)))
        }
        (None, None) => (FileConfig::default(), None),
    };
    a.apply(&mut file);
    let config = file.resolve();
    let out = a.out.clone().or(recorded_out).unwrap_or_else(crate::out_dir_default);

    let report = run_sweep_with(&config, &LpDecider, a.workers).map_err(|e| match e {
        SweepError::Config(m) => CliError::Config(m),
        other => CliError::Config(other.to_string()),
    })?;
    let paths = write_reports(&report, &out).map_err(|e| CliError::Io(out.display().to_string(), e))?;
    let artifacts = paths.iter().map(|p| p.display().to_string()).collect();
    let manifest_path = out.join(manifest::FILE_NAME);
    RunManifest::new("sweep", FileConfig::from_resolved(&config), config.seed, &out, artifacts)
        .write(&manifest_path)?;

    print!("{}", probability_text(&report));
    println!("reports written to {}", out.display());
    if report.any_invalid() {
        let n = report.cells.iter().filter(|c| c.invalid).count();
        eprintln!("error: {n} cell(s) exceeded the failure limit and are flagged invalid");
        return Ok(3);
    }
    Ok(0)
}
