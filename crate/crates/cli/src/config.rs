//! Experiment config files: TOML with one section per module.
//!
//! Every field is optional; anything left out falls back to
//! [`SweepConfig::default`]. The shipped `configs/default.toml` spells out
//! all of those defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};
use spikegate::encoding::EncodingVariant;
use spikegate::{EncodingScheme, SweepConfig, Variant};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// Same-sign graded amplitudes (the sweep default).
    #[default]
    Graded,
    /// The reference layouts (`B` emits -1 / +1).
    Preset,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NeuronSection {
    pub theta: Option<f64>,
    pub t_r: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReservoirSection {
    pub n: Option<usize>,
    pub horizon: Option<u32>,
    pub self_connections: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EncodingSection {
    pub variant: Option<EncodingVariant>,
    pub layout: Option<Layout>,
    pub times: Option<Vec<u32>>,
    pub amp0: Option<f64>,
    pub amp1: Option<f64>,
    pub signs: Option<Vec<f64>>,
    pub refs: Option<Vec<(u32, f64)>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub variants: Option<Vec<Variant>>,
    pub betas: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub neuron: NeuronSection,
    pub reservoir: ReservoirSection,
    pub encoding: EncodingSection,
    pub sweep: SweepSection,
}

impl EncodingSection {
    pub fn scheme(&self) -> EncodingScheme {
        let base = EncodingScheme::default();
        let variant = self.variant.unwrap_or(base.variant);
        let mut s = match self.layout.unwrap_or_default() {
            Layout::Graded => EncodingScheme::graded(variant),
            Layout::Preset => EncodingScheme::preset(variant),
        };
        if let Some(t) = &self.times {
            s.spike_times = t.clone();
        }
        if let Some(a) = self.amp0 {
            s.amp_zero = a;
        }
        if let Some(a) = self.amp1 {
            s.amp_one = a;
        }
        if let Some(g) = &self.signs {
            s.slot_signs = g.clone();
        }
        if let Some(r) = &self.refs {
            s.reference_spikes = r.clone();
        }
        s
    }

    /// Selects a named family and layout, dropping any per-field overrides.
    pub fn select(&mut self, variant: EncodingVariant, layout: Option<Layout>) {
        *self = EncodingSection { variant: Some(variant), layout, ..Default::default() };
    }
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn resolve(&self) -> SweepConfig {
        let d = SweepConfig::default();
        SweepConfig {
            n_neurons: self.reservoir.n.unwrap_or(d.n_neurons),
            runs: self.sweep.runs.unwrap_or(d.runs),
            seed: self.sweep.seed.unwrap_or(d.seed),
            variants: self.sweep.variants.clone().unwrap_or(d.variants),
            betas: self.sweep.betas.clone().unwrap_or(d.betas),
            encoding: self.encoding.scheme(),
            theta: self.neuron.theta.unwrap_or(d.theta),
            t_r: self.neuron.t_r.unwrap_or(d.t_r),
            horizon: self.reservoir.horizon.unwrap_or(d.horizon),
            self_connections: self.reservoir.self_connections.unwrap_or(d.self_connections),
        }
    }

    /// A fully spelled-out config that resolves back to `c`.
    pub fn from_resolved(c: &SweepConfig) -> Self {
        let e = &c.encoding;
        FileConfig {
            neuron: NeuronSection { theta: Some(c.theta), t_r: Some(c.t_r) },
            reservoir: ReservoirSection {
                n: Some(c.n_neurons),
                horizon: Some(c.horizon),
                self_connections: Some(c.self_connections),
            },
            encoding: EncodingSection {
                variant: Some(e.variant),
                layout: None,
                times: Some(e.spike_times.clone()),
                amp0: Some(e.amp_zero),
                amp1: Some(e.amp_one),
                signs: Some(e.slot_signs.clone()),
                refs: Some(e.reference_spikes.clone()),
            },
            sweep: SweepSection {
                runs: Some(c.runs),
                seed: Some(c.seed),
                variants: Some(c.variants.clone()),
                betas: Some(c.betas.clone()),
            },
        }
    }
}
