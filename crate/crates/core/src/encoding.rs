//! Binary-gate partitions and temporal spike encodings of input bit pairs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spike::SpikeTrain;

/// One of the four input bit pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InputPattern {
    pub b1: bool,
    pub b2: bool,
}

impl InputPattern {
    pub const fn new(b1: bool, b2: bool) -> Self {
        InputPattern { b1, b2 }
    }

    /// All four patterns in the order (0,0), (0,1), (1,0), (1,1).
    pub const ALL: [InputPattern; 4] = [
        InputPattern::new(false, false),
        InputPattern::new(false, true),
        InputPattern::new(true, false),
        InputPattern::new(true, true),
    ];

    /// Position in [`InputPattern::ALL`].
    pub fn index(self) -> usize {
        (self.b1 as usize) << 1 | self.b2 as usize
    }

    pub fn bits(self) -> [bool; 2] {
        [self.b1, self.b2]
    }

    pub fn flipped(self) -> Self {
        InputPattern::new(!self.b1, !self.b2)
    }
}

impl fmt::Display for InputPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.b1 as u8, self.b2 as u8)
    }
}

/// A split of the four patterns into two non-empty classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GatePartition {
    pub id: usize,
    pub class_a: Vec<InputPattern>,
    pub class_b: Vec<InputPattern>,
}

impl GatePartition {
    fn from_class_a(id: usize, class_a: &[InputPattern]) -> Self {
        let class_b = InputPattern::ALL.iter().copied().filter(|p| !class_a.contains(p)).collect();
        GatePartition { id, class_a: class_a.to_vec(), class_b }
    }

    pub fn in_class_a(&self, p: InputPattern) -> bool {
        self.class_a.contains(&p)
    }

    /// Compact label of class A, e.g. `{(0,0),(1,1)}`.
    pub fn class_a_label(&self) -> String {
        let inner: Vec<String> = self.class_a.iter().map(|p| p.to_string()).collect();
        format!("{{{}}}", inner.join(","))
    }
}

/// Gate id of the XOR partition.
pub const XOR_GATE: usize = 6;

/// The seven partitions, each listed by its class A against the complement.
///
/// Ids 0..=3 are the singletons in pattern order, 4 and 5 the pairs
/// containing (0,0) other than XOR, and 6 is XOR.
pub fn all_gates() -> Vec<GatePartition> {
    let [p00, p01, p10, p11] = InputPattern::ALL;
    let sides: [&[InputPattern]; 7] = [&[p00], &[p01], &[p10], &[p11], &[p00, p01], &[p00, p10], &[p00, p11]];
    sides.iter().enumerate().map(|(id, a)| GatePartition::from_class_a(id, a)).collect()
}

/// Named encoding families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EncodingVariant {
    A,
    #[serde(rename = "A'")]
    APrime,
    B,
    C,
}

impl EncodingVariant {
    pub fn name(self) -> &'static str {
        match self {
            EncodingVariant::A => "A",
            EncodingVariant::APrime => "A'",
            EncodingVariant::B => "B",
            EncodingVariant::C => "C",
        }
    }
}

impl fmt::Display for EncodingVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum EncodingError {
    #[error("unknown encoding `{0}` (expected A, A', B or C)")]
    UnknownVariant(String),
    #[error("an encoding needs exactly two slot times, got {0}")]
    SlotCount(usize),
    #[error("an encoding needs exactly two slot signs, got {0}")]
    SignCount(usize),
    #[error("slot times must be distinct")]
    DuplicateSlots,
    #[error("encoding amplitudes must be finite")]
    NonFinite,
}

impl FromStr for EncodingVariant {
    type Err = EncodingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(EncodingVariant::A),
            "A'" | "a'" | "Aprime" | "APrime" | "aprime" => Ok(EncodingVariant::APrime),
            "B" | "b" => Ok(EncodingVariant::B),
            "C" | "c" => Ok(EncodingVariant::C),
            other => Err(EncodingError::UnknownVariant(other.to_string())),
        }
    }
}

/// Maps a bit pair onto a single input channel.
///
/// Bit `i` puts `amp_zero` or `amp_one` at `spike_times[i]` (nothing if the
/// amplitude is zero). Reference spikes are added unconditionally.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodingScheme {
    pub variant: EncodingVariant,
    #[serde(rename = "times")]
    pub spike_times: Vec<u32>,
    #[serde(rename = "amp0")]
    pub amp_zero: f64,
    #[serde(rename = "amp1")]
    pub amp_one: f64,
    #[serde(rename = "refs", default)]
    pub reference_spikes: Vec<(u32, f64)>,
    /// Per-slot sign applied to the bit amplitude; `[1, 1]` when omitted.
    #[serde(rename = "signs", default = "unit_signs")]
    pub slot_signs: Vec<f64>,
}

fn unit_signs() -> Vec<f64> {
    vec![1.0, 1.0]
}

impl EncodingScheme {
    /// Reference layout of each family: slots at ticks 0 and 2.
    ///
    /// * `A`: bit b emits amplitude b.
    /// * `A'`: as `A` plus a unit reference spike at tick 4.
    /// * `B`: bit b emits `2b - 1`.
    /// * `C`: as `B` plus unit reference spikes at ticks 4 and 6.
    pub fn preset(variant: EncodingVariant) -> Self {
        let (amp_zero, reference_spikes) = match variant {
            EncodingVariant::A => (0.0, vec![]),
            EncodingVariant::APrime => (0.0, vec![(4, 1.0)]),
            EncodingVariant::B => (-1.0, vec![]),
            EncodingVariant::C => (-1.0, vec![(4, 1.0), (6, 1.0)]),
        };
        EncodingScheme {
            variant,
            spike_times: vec![0, 2],
            amp_zero,
            amp_one: 1.0,
            reference_spikes,
            slot_signs: unit_signs(),
        }
    }

    /// Graded single-sign layout used by default for sweeps: both bit values
    /// drive the input neuron with the same sign and only the grade differs
    /// (`0 -> 2.5`, `1 -> 3`; the `A` family keeps a silent zero bit).
    /// Reference spikes are placed as in [`EncodingScheme::preset`].
    pub fn graded(variant: EncodingVariant) -> Self {
        let reference_spikes = match variant {
            EncodingVariant::APrime => vec![(4, 1.0)],
            EncodingVariant::C => vec![(4, 1.0), (6, 1.0)],
            _ => vec![],
        };
        let amp_zero = match variant {
            EncodingVariant::A | EncodingVariant::APrime => 0.0,
            _ => 2.5,
        };
        EncodingScheme {
            variant,
            spike_times: vec![0, 2],
            amp_zero,
            amp_one: 3.0,
            reference_spikes,
            slot_signs: unit_signs(),
        }
    }

    pub fn validate(&self) -> Result<(), EncodingError> {
        if self.spike_times.len() != 2 {
            return Err(EncodingError::SlotCount(self.spike_times.len()));
        }
        if self.slot_signs.len() != 2 {
            return Err(EncodingError::SignCount(self.slot_signs.len()));
        }
        if self.spike_times[0] == self.spike_times[1] {
            return Err(EncodingError::DuplicateSlots);
        }
        let amps = [self.amp_zero, self.amp_one]
            .into_iter()
            .chain(self.slot_signs.iter().copied())
            .chain(self.reference_spikes.iter().map(|r| r.1));
        if amps.into_iter().any(|a| !a.is_finite()) {
            return Err(EncodingError::NonFinite);
        }
        Ok(())
    }

    /// Latest tick touched by any pattern.
    pub fn last_time(&self) -> u32 {
        self.spike_times.iter().copied().chain(self.reference_spikes.iter().map(|r| r.0)).max().unwrap_or(0)
    }

    pub fn encode(&self, pattern: InputPattern) -> SpikeTrain {
        let slots = self
            .spike_times
            .iter()
            .zip(&self.slot_signs)
            .zip(pattern.bits())
            .map(|((&t, &s), bit)| (t, s * if bit { self.amp_one } else { self.amp_zero }));
        SpikeTrain::from_pairs(slots.chain(self.reference_spikes.iter().copied()))
    }
}

impl Default for EncodingScheme {
    fn default() -> Self {
        EncodingScheme::graded(EncodingVariant::B)
    }
}

/// Encodes `pattern` under `scheme`.
pub fn encode(scheme: &EncodingScheme, pattern: InputPattern) -> SpikeTrain {
    scheme.encode(pattern)
}
