//! Published reference values for two-neuron reservoirs (`theta = 1`).
//!
//! Rows are gates 0..=6, columns follow [`Variant::ALL`]
//! (SRM, SRS, SRZ, PRM, PRS, PRZ). `None` marks cells reported as not
//! computable. Only gate 6 (XOR) is known to share our gate numbering; the
//! other rows are compared under the canonical order of
//! [`crate::encoding::all_gates`].

use crate::encoding::EncodingVariant;
use crate::neuron::Variant;

pub type Table = [[Option<f64>; 6]; 7];

const fn row(v: [f64; 6]) -> [Option<f64>; 6] {
    [Some(v[0]), Some(v[1]), Some(v[2]), Some(v[3]), Some(v[4]), Some(v[5])]
}

/// Solvability probability (%) for encoding B, beta = 1.
pub const PROB_B_BETA_1: Table = [
    row([30.0, 27.5, 0.0, 49.5, 49.5, 0.0]),
    row([2.5, 2.5, 0.0, 1.0, 1.0, 0.0]),
    row([3.0, 2.5, 0.0, 1.0, 1.5, 0.0]),
    row([29.5, 28.5, 0.0, 50.0, 49.5, 0.0]),
    row([1.5, 3.0, 0.0, 1.0, 5.0, 0.0]),
    row([4.0, 4.5, 0.0, 0.5, 1.5, 0.0]),
    row([2.0, 1.0, 0.0, 1.0, 0.5, 0.0]),
];

/// Solvability probability (%) for encoding B, beta = 0.5.
pub const PROB_B_BETA_HALF: Table = [
    row([63.5, 22.5, 0.0, 93.0, 25.0, 0.0]),
    row([20.0, 0.0, 0.0, 11.5, 0.0, 0.0]),
    row([14.5, 0.0, 0.0, 11.5, 0.0, 0.0]),
    row([70.0, 22.5, 0.0, 95.5, 25.0, 0.0]),
    row([10.5, 2.0, 0.0, 2.5, 1.0, 0.0]),
    row([5.0, 2.0, 0.0, 2.5, 1.0, 0.0]),
    row([7.5, 0.0, 0.0, 3.0, 0.0, 0.0]),
];

/// Solvability probability (%) for encoding C, beta = 1.
pub const PROB_C_BETA_1: Table = [
    row([61.0, 72.0, 66.0, 41.0, 41.0, 40.0]),
    row([19.0, 30.0, 27.0, 3.0, 3.0, 6.0]),
    row([24.0, 29.0, 22.0, 7.0, 7.0, 7.0]),
    row([57.0, 66.0, 70.0, 59.0, 59.0, 40.0]),
    row([34.0, 41.0, 27.0, 62.0, 61.0, 38.0]),
    row([14.0, 17.0, 8.0, 5.0, 5.0, 3.0]),
    row([13.0, 17.0, 8.0, 6.0, 6.0, 3.0]),
];

/// Solvability probability (%) for encoding C, beta = 0.5.
pub const PROB_C_BETA_HALF: Table = [
    row([87.0, 90.0, 88.0, 39.0, 39.0, 39.0]),
    row([15.0, 15.0, 14.0, 5.0, 5.0, 5.0]),
    row([6.0, 6.0, 6.0, 0.0, 0.0, 0.0]),
    row([95.0, 98.0, 95.0, 44.0, 44.0, 44.0]),
    row([39.0, 39.0, 37.0, 44.0, 44.0, 44.0]),
    row([2.0, 2.0, 0.0, 0.0, 0.0, 0.0]),
    row([11.0, 11.0, 8.0, 5.0, 5.0, 5.0]),
];

const NA: Option<f64> = None;

/// Mean l1-norm of the outputs of solvable draws, encoding B, beta = 1.
pub const L1_MEAN_B_BETA_1: Table = [
    [Some(12.7), Some(12.8), NA, Some(4.4), Some(6.6), NA],
    [Some(32.2), Some(37.0), NA, Some(5.0), Some(18.0), NA],
    [Some(41.0), Some(15.6), NA, Some(5.0), Some(15.0), NA],
    [Some(5.6), Some(10.2), NA, Some(3.4), Some(4.5), NA],
    [Some(31.7), Some(50.3), NA, Some(6.0), Some(16.2), NA],
    [Some(17.0), Some(27.3), NA, Some(6.0), Some(16.0), NA],
    [Some(18.8), Some(36.5), NA, Some(6.0), Some(8.0), NA],
];

/// Mean l1-norm of the outputs of solvable draws, encoding B, beta = 0.5.
pub const L1_MEAN_B_BETA_HALF: Table = [
    [Some(5.9), Some(5.2), NA, Some(3.2), Some(4.9), NA],
    [Some(24.0), NA, NA, Some(3.2), NA, NA],
    [Some(11.4), NA, NA, Some(3.6), NA, NA],
    [Some(3.1), Some(3.5), NA, Some(2.2), Some(3.4), NA],
    [Some(42.0), Some(6.5), NA, Some(6.0), Some(7.0), NA],
    [Some(7.3), Some(6.5), NA, Some(8.8), Some(7.0), NA],
    [Some(3.8), NA, NA, Some(3.8), NA, NA],
];

fn column(variant: Variant) -> usize {
    Variant::ALL.iter().position(|&v| v == variant).expect("variant listed in ALL")
}

/// 0 for beta = 1, 1 for beta = 0.5, the only leak factors with published values.
fn published_beta(beta: f64) -> Option<usize> {
    [1.0, 0.5].iter().position(|&b| b == beta)
}

/// Reference solvability probability for a cell, if one was published.
pub fn probability(encoding: EncodingVariant, beta: f64, gate: usize, variant: Variant) -> Option<f64> {
    let table = match (encoding, published_beta(beta)?) {
        (EncodingVariant::B, 0) => &PROB_B_BETA_1,
        (EncodingVariant::B, _) => &PROB_B_BETA_HALF,
        (EncodingVariant::C, 0) => &PROB_C_BETA_1,
        (EncodingVariant::C, _) => &PROB_C_BETA_HALF,
        _ => return None,
    };
    table.get(gate).and_then(|r| r[column(variant)])
}

/// Reference mean l1-norm for a cell (encoding B only).
pub fn l1_mean(encoding: EncodingVariant, beta: f64, gate: usize, variant: Variant) -> Option<f64> {
    let table = match (encoding, published_beta(beta)?) {
        (EncodingVariant::B, 0) => &L1_MEAN_B_BETA_1,
        (EncodingVariant::B, _) => &L1_MEAN_B_BETA_HALF,
        _ => return None,
    };
    table.get(gate).and_then(|r| r[column(variant)])
}
