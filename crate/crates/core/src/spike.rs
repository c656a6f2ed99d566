//! Discrete-time spike trains.
//!
//! Time runs on an integer grid of unit ticks. A train stores at most one
//! event per tick; contributions landing on the same tick are summed when the
//! train is built and ticks whose sum is exactly zero are dropped.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Simulation tick index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimeStep(pub u32);

impl TimeStep {
    pub fn get(self) -> u32 {
        self.0
    }
}

impl From<u32> for TimeStep {
    fn from(t: u32) -> Self {
        TimeStep(t)
    }
}

impl fmt::Display for TimeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A single spike with signed, possibly graded amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpikeEvent {
    pub time: TimeStep,
    pub amplitude: f64,
}

/// Time-ordered spike events, strictly increasing in time, no zero amplitudes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpikeTrain {
    events: Vec<SpikeEvent>,
}

impl SpikeTrain {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a train from arbitrary `(tick, amplitude)` pairs. Same-tick
    /// amplitudes are summed in the order given.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        let mut acc: BTreeMap<u32, f64> = BTreeMap::new();
        for (t, a) in pairs {
            *acc.entry(t).or_insert(0.0) += a;
        }
        Self::from_sorted_sums(acc)
    }

    fn from_sorted_sums(acc: BTreeMap<u32, f64>) -> Self {
        let events = acc
            .into_iter()
            .filter(|&(_, a)| a != 0.0)
            .map(|(t, a)| SpikeEvent { time: TimeStep(t), amplitude: a })
            .collect();
        SpikeTrain { events }
    }

    pub fn events(&self) -> &[SpikeEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Amplitude at tick `t`, zero if no event.
    pub fn amplitude_at(&self, t: TimeStep) -> f64 {
        self.events.binary_search_by_key(&t, |e| e.time).map(|i| self.events[i].amplitude).unwrap_or(0.0)
    }

    pub fn first_time(&self) -> Option<TimeStep> {
        self.events.first().map(|e| e.time)
    }

    pub fn last_time(&self) -> Option<TimeStep> {
        self.events.last().map(|e| e.time)
    }

    /// Signed sum of amplitudes.
    pub fn total(&self) -> f64 {
        self.events.iter().map(|e| e.amplitude).sum()
    }

    /// Sum of absolute amplitudes; the sparsity measure used in reports.
    pub fn l1_norm(&self) -> f64 {
        self.events.iter().map(|e| e.amplitude.abs()).sum()
    }

    /// Element-wise scaling of amplitudes. Scaling by zero yields the empty train.
    pub fn scaled(&self, c: f64) -> SpikeTrain {
        merge(&[(c, self)])
    }
}

impl std::ops::Neg for &SpikeTrain {
    type Output = SpikeTrain;

    fn neg(self) -> SpikeTrain {
        SpikeTrain {
            events: self.events.iter().map(|e| SpikeEvent { time: e.time, amplitude: -e.amplitude }).collect(),
        }
    }
}

/// Weighted superposition of trains.
///
/// The result at tick `t` is `sum_i weight_i * amplitude_i(t)`, accumulated in
/// list order; ticks that sum to exactly zero are dropped.
pub fn merge(trains: &[(f64, &SpikeTrain)]) -> SpikeTrain {
    let mut acc: BTreeMap<u32, f64> = BTreeMap::new();
    for &(w, train) in trains {
        for e in &train.events {
            *acc.entry(e.time.0).or_insert(0.0) += w * e.amplitude;
        }
    }
    SpikeTrain::from_sorted_sums(acc)
}

/// Sum of absolute spike amplitudes.
pub fn l1_norm(train: &SpikeTrain) -> f64 {
    train.l1_norm()
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseTrainError {
    #[error("malformed spike token `{token}`: expected `tick:amplitude`")]
    Malformed { token: String },
    #[error("bad tick in spike token `{token}`")]
    BadTick { token: String },
    #[error("bad amplitude in spike token `{token}`")]
    BadAmplitude { token: String },
}

impl fmt::Display for SpikeTrain {
    /// Text form `t:a,t:a,...`; amplitudes use the shortest round-trip repr.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{:?}", e.time.0, e.amplitude)?;
        }
        Ok(())
    }
}

impl FromStr for SpikeTrain {
    type Err = ParseTrainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(SpikeTrain::new());
        }
        let mut pairs = Vec::new();
        for raw in s.split(',') {
            let token = raw.trim();
            let (t, a) =
                token.split_once(':').ok_or_else(|| ParseTrainError::Malformed { token: token.to_string() })?;
            let t: u32 = t.trim().parse().map_err(|_| ParseTrainError::BadTick { token: token.to_string() })?;
            let a: f64 = a.trim().parse().map_err(|_| ParseTrainError::BadAmplitude { token: token.to_string() })?;
            if !a.is_finite() {
                return Err(ParseTrainError::BadAmplitude { token: token.to_string() });
            }
            pairs.push((t, a));
        }
        Ok(SpikeTrain::from_pairs(pairs))
    }
}
