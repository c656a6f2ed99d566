//! Leaky integrate-and-fire reservoirs for binary logic gates.
//!
//! The crate simulates six LIF neuron variants on a discrete time grid,
//! encodes the four input bit pairs as spike trains, runs them through a
//! small fully connected reservoir and decides, with a hull LP, whether the
//! reservoir's summed outputs make a given gate linearly separable.
//! [`sweep`] repeats this over random weight draws to estimate how often a
//! gate is solvable.

pub mod encoding;
pub mod lp;
pub mod neuron;
pub mod reference;
pub mod report;
pub mod reservoir;
pub mod separability;
pub mod spike;
pub mod sweep;

pub use encoding::{all_gates, encode, EncodingScheme, EncodingVariant, GatePartition, InputPattern, XOR_GATE};
pub use neuron::{run, step, NeuronConfig, NeuronError, NeuronState, ResetMechanism, ThresholdMode, Variant};
pub use reservoir::{sample_weights, simulate, ReservoirConfig, WeightMatrix};
pub use separability::{
    features, homogenize, is_separable, lp_contains_origin, oracle_separable, FeatureVector, SeparabilityInstance,
    SeparabilityVerdict,
};
pub use spike::{l1_norm, merge, SpikeEvent, SpikeTrain, TimeStep};
pub use sweep::{l1_statistics, run_sweep, SweepCell, SweepConfig, SweepReport};
