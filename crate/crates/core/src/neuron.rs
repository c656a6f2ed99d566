//! Discrete-time leaky integrate-and-fire neurons.
//!
//! Six variants come from crossing two thresholding modes with three reset
//! mechanisms:
//!
//! | name | thresholding          | reset                 |
//! |------|-----------------------|-----------------------|
//! | SRM  | positive and negative | reset-to-mod          |
//! | SRS  | positive and negative | reset-by-subtraction  |
//! | SRZ  | positive and negative | reset-to-zero         |
//! | PRM  | positive only         | reset-to-mod          |
//! | PRS  | positive only         | reset-by-subtraction  |
//! | PRZ  | positive only         | reset-to-zero         |
//!
//! One tick is leak, integrate, threshold, reset, in that order. With
//! `beta = 1` the neuron is a pure integrate-and-fire unit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spike::{SpikeTrain, TimeStep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThresholdMode {
    /// Fires only when `u >= theta`.
    Positive,
    /// Fires when `|u| >= theta`, with the sign of `u`.
    Symmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResetMechanism {
    ToZero,
    BySubtraction,
    /// Cascaded subtraction within one tick: `u = n*theta + r`, emit `n*theta`, keep `r`.
    ToMod,
}

/// The six named neuron variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    SRM,
    SRS,
    SRZ,
    PRM,
    PRS,
    PRZ,
}

impl Variant {
    pub const ALL: [Variant; 6] = [Variant::SRM, Variant::SRS, Variant::SRZ, Variant::PRM, Variant::PRS, Variant::PRZ];

    pub fn mode(self) -> ThresholdMode {
        match self {
            Variant::SRM | Variant::SRS | Variant::SRZ => ThresholdMode::Symmetric,
            Variant::PRM | Variant::PRS | Variant::PRZ => ThresholdMode::Positive,
        }
    }

    pub fn reset(self) -> ResetMechanism {
        match self {
            Variant::SRM | Variant::PRM => ResetMechanism::ToMod,
            Variant::SRS | Variant::PRS => ResetMechanism::BySubtraction,
            Variant::SRZ | Variant::PRZ => ResetMechanism::ToZero,
        }
    }

    pub fn from_parts(mode: ThresholdMode, reset: ResetMechanism) -> Variant {
        use ResetMechanism::*;
        use ThresholdMode::*;
        match (mode, reset) {
            (Symmetric, ToMod) => Variant::SRM,
            (Symmetric, BySubtraction) => Variant::SRS,
            (Symmetric, ToZero) => Variant::SRZ,
            (Positive, ToMod) => Variant::PRM,
            (Positive, BySubtraction) => Variant::PRS,
            (Positive, ToZero) => Variant::PRZ,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::SRM => "SRM",
            Variant::SRS => "SRS",
            Variant::SRZ => "SRZ",
            Variant::PRM => "PRM",
            Variant::PRS => "PRS",
            Variant::PRZ => "PRZ",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("unknown neuron variant `{0}` (expected one of SRM, SRS, SRZ, PRM, PRS, PRZ)")]
pub struct UnknownVariant(pub String);

impl FromStr for Variant {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownVariant(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NeuronError {
    #[error("threshold must be finite and > 0, got {0}")]
    InvalidThreshold(f64),
    #[error("leak factor must lie in (0, 1], got {0}")]
    InvalidLeak(f64),
    #[error("reset-to-mod requires zero refractory time, got {0}")]
    ModWithRefractory(u32),
    #[error("non-finite input {value} at tick {tick}")]
    NonFiniteInput { tick: u32, value: f64 },
    #[error("horizon {horizon} precedes last input tick {last}")]
    HorizonTooShort { horizon: u32, last: u32 },
}

/// Validated neuron parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeuronConfig {
    mode: ThresholdMode,
    reset: ResetMechanism,
    theta: f64,
    beta: f64,
    t_r: u32,
}

impl NeuronConfig {
    pub fn new(
        mode: ThresholdMode,
        reset: ResetMechanism,
        theta: f64,
        beta: f64,
        t_r: u32,
    ) -> Result<Self, NeuronError> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(NeuronError::InvalidThreshold(theta));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(NeuronError::InvalidLeak(beta));
        }
        if reset == ResetMechanism::ToMod && t_r != 0 {
            return Err(NeuronError::ModWithRefractory(t_r));
        }
        Ok(NeuronConfig { mode, reset, theta, beta, t_r })
    }

    pub fn for_variant(variant: Variant, theta: f64, beta: f64, t_r: u32) -> Result<Self, NeuronError> {
        Self::new(variant.mode(), variant.reset(), theta, beta, t_r)
    }

    pub fn mode(&self) -> ThresholdMode {
        self.mode
    }

    pub fn reset(&self) -> ResetMechanism {
        self.reset
    }

    pub fn variant(&self) -> Variant {
        Variant::from_parts(self.mode, self.reset)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn t_r(&self) -> u32 {
        self.t_r
    }
}

/// Membrane potential and refractory countdown. Starts at rest (`u = 0`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NeuronState {
    pub u: f64,
    pub refractory_remaining: u32,
}

/// Advances one tick. Returns the new state and the emitted amplitude
/// (zero when no spike fires).
pub fn step(config: &NeuronConfig, state: NeuronState, input: f64) -> Result<(NeuronState, f64), NeuronError> {
    if !input.is_finite() {
        return Err(NeuronError::NonFiniteInput { tick: 0, value: input });
    }
    let mut u = config.beta * state.u + input;

    if state.refractory_remaining > 0 {
        let next = NeuronState { u, refractory_remaining: state.refractory_remaining - 1 };
        return Ok((next, 0.0));
    }

    let theta = config.theta;
    let fires = match config.mode {
        ThresholdMode::Positive => u >= theta,
        ThresholdMode::Symmetric => u.abs() >= theta,
    };
    if !fires {
        return Ok((NeuronState { u, refractory_remaining: 0 }, 0.0));
    }

    let sign = if u < 0.0 { -1.0 } else { 1.0 };
    let (emitted, refractory) = match config.reset {
        ResetMechanism::ToZero => {
            u = 0.0;
            (sign * theta, 0)
        }
        ResetMechanism::BySubtraction => {
            u -= sign * theta;
            (sign * theta, config.t_r)
        }
        ResetMechanism::ToMod => {
            let mut n = (u.abs() / theta).floor();
            // the quotient can round across an integer; keep |r| < theta
            if u.abs() - n * theta >= theta {
                n += 1.0;
            } else if u.abs() - n * theta <= -theta {
                n -= 1.0;
            }
            let emitted = sign * n * theta;
            u -= emitted;
            (emitted, 0)
        }
    };
    Ok((NeuronState { u, refractory_remaining: refractory }, emitted))
}

/// Per-tick record produced by [`run_traced`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TickTrace {
    pub time: TimeStep,
    pub input: f64,
    pub u: f64,
    pub emitted: f64,
}

/// Drives one neuron from rest over ticks `0..=horizon` and returns the
/// emitted spike train.
pub fn run(config: &NeuronConfig, input: &SpikeTrain, horizon: TimeStep) -> Result<SpikeTrain, NeuronError> {
    let trace = run_traced(config, input, horizon)?;
    Ok(SpikeTrain::from_pairs(trace.iter().filter(|r| r.emitted != 0.0).map(|r| (r.time.0, r.emitted))))
}

/// Like [`run`], but keeps the membrane potential after every tick.
pub fn run_traced(config: &NeuronConfig, input: &SpikeTrain, horizon: TimeStep) -> Result<Vec<TickTrace>, NeuronError> {
    if let Some(last) = input.last_time() {
        if last > horizon {
            return Err(NeuronError::HorizonTooShort { horizon: horizon.0, last: last.0 });
        }
    }
    let mut state = NeuronState::default();
    let mut trace = Vec::with_capacity(horizon.0 as usize + 1);
    for t in 0..=horizon.0 {
        let x = input.amplitude_at(TimeStep(t));
        let (next, emitted) = step(config, state, x).map_err(|e| with_tick(e, t))?;
        state = next;
        trace.push(TickTrace { time: TimeStep(t), input: x, u: state.u, emitted });
    }
    Ok(trace)
}

pub(crate) fn with_tick(err: NeuronError, tick: u32) -> NeuronError {
    match err {
        NeuronError::NonFiniteInput { value, .. } => NeuronError::NonFiniteInput { tick, value },
        other => other,
    }
}
