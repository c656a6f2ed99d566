//! Linear separability of two finite point classes.
//!
//! Classes `A` and `B` are separable by some `(D, threshold)` with
//! `<v, D> >= threshold` on `A` and `< threshold` on `B` exactly when the
//! origin lies outside the convex hull of the lifted points `(v_a, -1)` and
//! `(-v_b, +1)`. Hull membership is decided by the phase-one LP
//! `P x = 0, sum(x) = 1, x >= 0` over the lifted points as columns.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{self, LpError};
use crate::spike::SpikeTrain;

/// Phase-one infeasibility at or below which the origin counts as inside the hull.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Tolerance used when re-verifying certificates.
pub const CERTIFICATE_TOL: f64 = 1e-7;
/// Distance to the hull boundary below which a verdict is flagged as borderline.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeparabilityError {
    #[error("feature vectors differ in dimension ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("both classes must be non-empty")]
    EmptyClass,
    #[error("non-finite feature value")]
    NonFinite,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("certificate failed re-verification: {0}")]
    Certificate(String),
}

/// Per-channel signed spike sums for one input pattern.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, d: &[f64]) -> f64 {
        self.0.iter().zip(d).map(|(a, b)| a * b).sum()
    }
}

impl From<Vec<f64>> for FeatureVector {
    fn from(v: Vec<f64>) -> Self {
        FeatureVector(v)
    }
}

/// Signed amplitude sum of each output train.
pub fn features(outputs: &[SpikeTrain]) -> FeatureVector {
    FeatureVector(outputs.iter().map(SpikeTrain::total).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityInstance {
    class_a: Vec<FeatureVector>,
    class_b: Vec<FeatureVector>,
}

impl SeparabilityInstance {
    pub fn new(class_a: Vec<FeatureVector>, class_b: Vec<FeatureVector>) -> Result<Self, SeparabilityError> {
        if class_a.is_empty() || class_b.is_empty() {
            return Err(SeparabilityError::EmptyClass);
        }
        let dim = class_a[0].dim();
        for v in class_a.iter().chain(&class_b) {
            if v.dim() != dim {
                return Err(SeparabilityError::DimensionMismatch(dim, v.dim()));
            }
            if v.0.iter().any(|x| !x.is_finite()) {
                return Err(SeparabilityError::NonFinite);
            }
        }
        Ok(SeparabilityInstance { class_a, class_b })
    }

    /// Convenience constructor from plain coordinate slices.
    pub fn from_points(a: &[&[f64]], b: &[&[f64]]) -> Result<Self, SeparabilityError> {
        let lift = |s: &[&[f64]]| s.iter().map(|p| FeatureVector(p.to_vec())).collect();
        Self::new(lift(a), lift(b))
    }

    pub fn class_a(&self) -> &[FeatureVector] {
        &self.class_a
    }

    pub fn class_b(&self) -> &[FeatureVector] {
        &self.class_b
    }

    pub fn dim(&self) -> usize {
        self.class_a[0].dim()
    }

    pub fn swapped(&self) -> Self {
        SeparabilityInstance { class_a: self.class_b.clone(), class_b: self.class_a.clone() }
    }
}

/// Dense matrix stored as a list of columns.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnMatrix {
    rows: usize,
    columns: Vec<Vec<f64>>,
}

impl ColumnMatrix {
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
        ColumnMatrix { rows, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, k: usize) -> &[f64] {
        &self.columns[k]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    fn max_abs(&self) -> f64 {
        self.columns.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Lifts class A to `(v, -1)` and class B to `(-v, +1)`, one column each.
pub fn homogenize(instance: &SeparabilityInstance) -> ColumnMatrix {
    let a = instance.class_a.iter().map(|v| v.0.iter().copied().chain([-1.0]).collect());
    let b = instance.class_b.iter().map(|v| v.0.iter().map(|x| -x).chain([1.0]).collect());
    ColumnMatrix::from_columns(a.chain(b).collect())
}

/// Proof for one side of the hull alternative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum HullCertificate {
    /// Convex weights `x` with `P x = 0`.
    Combination(Vec<f64>),
    /// Functional `z` with `<p_k, z> > 0` for every column.
    Separator(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct HullTest {
    pub contains_origin: bool,
    pub certificate: HullCertificate,
    /// Phase-one optimum on the rescaled columns.
    pub infeasibility: f64,
    /// For a separator: `min_k <p_k, z> / |z|` on max-norm-rescaled columns.
    pub margin: f64,
    pub boundary: bool,
}

/// Decides whether the origin lies in the convex hull of the columns of `p`.
pub fn lp_contains_origin(p: &ColumnMatrix) -> Result<HullTest, SeparabilityError> {
    if p.columns.iter().flatten().any(|v| !v.is_finite()) {
        return Err(SeparabilityError::NonFinite);
    }
    let n = p.cols();
    let dim = p.rows();

    // scale each column to unit max-norm; a zero column is the origin itself
    let scales: Vec<f64> = p.columns.iter().map(|c| c.iter().fold(0.0, |m: f64, v| m.max(v.abs()))).collect();
    if let Some(k) = scales.iter().position(|&s| s == 0.0) {
        let mut x = vec![0.0; n];
        x[k] = 1.0;
        return Ok(HullTest {
            contains_origin: true,
            certificate: HullCertificate::Combination(x),
            infeasibility: 0.0,
            margin: 0.0,
            boundary: false,
        });
    }
    let scaled: Vec<Vec<f64>> = p.columns.iter().zip(&scales).map(|(c, s)| c.iter().map(|v| v / s).collect()).collect();

    let mut rows: Vec<Vec<f64>> = (0..dim).map(|i| scaled.iter().map(|c| c[i]).collect()).collect();
    rows.push(vec![1.0; n]);
    let mut b = vec![0.0; dim];
    b.push(1.0);

    let sol = lp::phase_one(&rows, &b)?;
    if sol.infeasibility <= FEASIBILITY_TOL {
        // undo the column scaling: x_k = x'_k / s_k, renormalised
        let raw: Vec<f64> = sol.x.iter().zip(&scales).map(|(x, s)| x.max(0.0) / s).collect();
        let total: f64 = raw.iter().sum();
        let x = raw.iter().map(|v| v / total).collect();
        Ok(HullTest {
            contains_origin: true,
            certificate: HullCertificate::Combination(x),
            infeasibility: sol.infeasibility,
            margin: 0.0,
            boundary: weakly_separated(&scaled, dim)?,
        })
    } else {
        let z: Vec<f64> = sol.y[..dim].iter().map(|v| -v).collect();
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        let margin = scaled.iter().map(|c| dot(c, &z)).fold(f64::INFINITY, f64::min) / norm;
        Ok(HullTest {
            contains_origin: false,
            certificate: HullCertificate::Separator(z),
            infeasibility: sol.infeasibility,
            margin,
            boundary: margin <= BOUNDARY_TOL,
        })
    }
}

/// Whether some `z` has `<p_k, z> >= 0` for every column with a positive
/// sum, i.e. the origin sits on a supporting hyperplane of the hull that
/// does not contain every column. In the homogenised picture this is a
/// hyperplane with the classes on opposite closed sides: the case a strict
/// readout cannot use but a non-strict one could.
fn weakly_separated(columns: &[Vec<f64>], rows: usize) -> Result<bool, SeparabilityError> {
    // variables: z+ (rows), z- (rows), slack s (one per column)
    // constraints: <p_k, z+ - z-> - s_k = 0,  sum_k <p_k, z+ - z-> = 1
    let n = columns.len();
    let width = 2 * rows + n;
    let mut a = Vec::with_capacity(n + 1);
    let mut total = vec![0.0; width];
    for (k, c) in columns.iter().enumerate() {
        let mut r = vec![0.0; width];
        for i in 0..rows {
            r[i] = c[i];
            r[rows + i] = -c[i];
            total[i] += c[i];
            total[rows + i] -= c[i];
        }
        r[2 * rows + k] = -1.0;
        a.push(r);
    }
    a.push(total);
    let mut b = vec![0.0; n];
    b.push(1.0);
    Ok(lp::phase_one(&a, &b)?.infeasibility <= FEASIBILITY_TOL)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Re-checks a hull certificate against `p` with tolerance `tol`.
///
/// A combination must be non-negative, sum to one and map to the origin
/// (scaled by the largest entry of `p`). A separator must be strictly
/// positive on every column.
pub fn verify_certificate(p: &ColumnMatrix, cert: &HullCertificate, tol: f64) -> Result<(), String> {
    match cert {
        HullCertificate::Combination(x) => {
            if x.len() != p.cols() {
                return Err(format!("combination has {} weights for {} columns", x.len(), p.cols()));
            }
            if let Some(v) = x.iter().find(|&&v| v < -tol) {
                return Err(format!("negative weight {v}"));
            }
            let sum: f64 = x.iter().sum();
            if (sum - 1.0).abs() > tol {
                return Err(format!("weights sum to {sum}"));
            }
            let scale = p.max_abs().max(1.0);
            for i in 0..p.rows() {
                let r: f64 = p.columns.iter().zip(x).map(|(c, w)| c[i] * w).sum();
                if r.abs() > tol * scale {
                    return Err(format!("row {i} residual {r}"));
                }
            }
            Ok(())
        }
        HullCertificate::Separator(z) => {
            if z.len() != p.rows() {
                return Err(format!("separator has length {} for {} rows", z.len(), p.rows()));
            }
            for (k, c) in p.columns.iter().enumerate() {
                let v = dot(c, z);
                #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail too
                if !(v > 0.0) {
                    return Err(format!("column {k} not strictly separated ({v})"));
                }
            }
            Ok(())
        }
    }
}

/// Decoder weights and readout threshold that split the two classes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub decoder: Vec<f64>,
    pub threshold: f64,
}

impl Witness {
    /// `<v, D> >= threshold` on A and `< threshold` on B.
    pub fn separates(&self, instance: &SeparabilityInstance) -> bool {
        instance.class_a.iter().all(|v| v.dot(&self.decoder) >= self.threshold)
            && instance.class_b.iter().all(|v| v.dot(&self.decoder) < self.threshold)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityVerdict {
    pub separable: bool,
    pub witness: Option<Witness>,
    /// Convex weights over `class_a ++ class_b` when not separable.
    pub hull_weights: Option<Vec<f64>>,
    pub boundary: bool,
}

/// Decides separability via the hull LP and validates the returned proof.
pub fn is_separable(instance: &SeparabilityInstance) -> Result<SeparabilityVerdict, SeparabilityError> {
    let p = homogenize(instance);
    let test = lp_contains_origin(&p)?;
    verify_certificate(&p, &test.certificate, CERTIFICATE_TOL).map_err(SeparabilityError::Certificate)?;
    match test.certificate {
        HullCertificate::Combination(x) => {
            Ok(SeparabilityVerdict { separable: false, witness: None, hull_weights: Some(x), boundary: test.boundary })
        }
        HullCertificate::Separator(z) => {
            let dim = instance.dim();
            let decoder = z[..dim].to_vec();
            let lo_a = instance.class_a.iter().map(|v| v.dot(&decoder)).fold(f64::INFINITY, f64::min);
            let hi_b = instance.class_b.iter().map(|v| v.dot(&decoder)).fold(f64::NEG_INFINITY, f64::max);
            let witness = Witness { decoder, threshold: 0.5 * (lo_a + hi_b) };
            if !witness.separates(instance) {
                return Err(SeparabilityError::Certificate(format!(
                    "witness gap collapsed (min A {lo_a}, max B {hi_b})"
                )));
            }
            Ok(SeparabilityVerdict {
                separable: true,
                witness: Some(witness),
                hull_weights: None,
                boundary: test.boundary,
            })
        }
    }
}

/// Exhaustive grid search over decoder weights in `[-bound, bound]^dim`.
///
/// For every grid point the candidate thresholds are the midpoints between
/// consecutive sorted projections. Returns the best normalised gap
/// `(min A - max B) / |D|` among strictly separating grid points, if any.
pub fn oracle_margin(instance: &SeparabilityInstance, grid: f64, bound: f64) -> Option<f64> {
    assert!(grid > 0.0 && bound >= 0.0);
    let dim = instance.dim();
    let steps = (bound / grid).round() as i64;
    let levels: Vec<f64> = (-steps..=steps).map(|i| i as f64 * grid).collect();
    let mut idx = vec![0usize; dim];
    let mut best: Option<f64> = None;
    let mut d = vec![0.0; dim];
    let mut projections: Vec<(f64, bool)> = Vec::with_capacity(instance.class_a.len() + instance.class_b.len());
    loop {
        for (slot, &i) in d.iter_mut().zip(&idx) {
            *slot = levels[i];
        }
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            projections.clear();
            projections.extend(instance.class_a.iter().map(|v| (v.dot(&d), true)));
            projections.extend(instance.class_b.iter().map(|v| (v.dot(&d), false)));
            projections.sort_by(|x, y| x.0.total_cmp(&y.0));
            for w in projections.windows(2) {
                if w[0].0 == w[1].0 {
                    continue;
                }
                let thr = 0.5 * (w[0].0 + w[1].0);
                let ok = projections.iter().all(|&(p, in_a)| if in_a { p >= thr } else { p < thr });
                if ok {
                    let lo_a = projections.iter().filter(|q| q.1).map(|q| q.0).fold(f64::INFINITY, f64::min);
                    let hi_b = projections.iter().filter(|q| !q.1).map(|q| q.0).fold(f64::NEG_INFINITY, f64::max);
                    let gap = (lo_a - hi_b) / norm;
                    best = Some(best.map_or(gap, |b: f64| b.max(gap)));
                    break;
                }
            }
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == dim {
                return best;
            }
            idx[pos] += 1;
            if idx[pos] < levels.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// True iff some grid decoder strictly separates the classes.
pub fn oracle_separable(instance: &SeparabilityInstance, grid: f64, bound: f64) -> bool {
    oracle_margin(instance, grid, bound).is_some()
}
