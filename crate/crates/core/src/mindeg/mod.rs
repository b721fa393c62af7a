//! Real-valued functions on the boolean cube: Fourier coefficients, degree
//! profiles, restrictions and minimum-degree-profile interpolation.
//!
//! A point is a bit mask: bit `i` holds coordinate `i + 1`. Bits map to spins by
//! `x = 2b - 1`, so bit 1 is `+1`. A Fourier coefficient is indexed by the bit
//! mask of its subset, and `f(x) = sum_T c_T prod_{i in T} x_i`.

mod gotu;
mod interp;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use gotu::{gotu_distributions, gotu_report, GotuReport, GotuSample, UnseenPrediction};
pub use interp::{min_degree_interpolator, SupportSet};

/// Largest dimension a table may have.
pub const MAX_N: usize = 12;
/// Largest dimension the interpolator accepts.
pub const MAX_INTERP_N: usize = 10;

#[derive(Clone, Debug, PartialEq, Error, Serialize, Deserialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum MindegError {
    #[error("table length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("dimension {n} exceeds the limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("coordinate {coordinate} is outside 1..={n}")]
    Coordinate { coordinate: usize, n: usize },
    #[error("restriction value must be +1 or -1, got {0}")]
    Spin(i8),
    #[error("function does not depend on coordinate {coordinate}")]
    NotDependent { coordinate: usize },
    #[error("support point {point:#b} appears twice")]
    DuplicatePoint { point: u32 },
    #[error("support point {point:#b} has bits beyond dimension {n}")]
    PointOutOfRange { point: u32, n: usize },
    #[error("support set is empty")]
    EmptySupport,
    #[error("{points} points but {labels} labels")]
    LabelCount { points: usize, labels: usize },
    #[error("stage for degree {stage} is numerically singular (residual {residual:e})")]
    SingularStage { stage: usize, residual: f64 },
    #[error("bad parameters: {0}")]
    Parameters(String),
}

/// In-place Walsh-Hadamard butterfly: `h[T] = sum_p v[p] (-1)^{|T & p|}`.
fn fwht(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

fn sign(mask: usize) -> f64 {
    if mask.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn dimension(len: usize) -> Result<usize, MindegError> {
    if !len.is_power_of_two() {
        return Err(MindegError::NotPowerOfTwo(len));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_N {
        return Err(MindegError::TooLarge { n, max: MAX_N });
    }
    Ok(n)
}

/// Fourier coefficients of a table of `2^n` values.
pub fn fourier_transform(values: &[f64]) -> Result<Vec<f64>, MindegError> {
    dimension(values.len())?;
    let mut c = values.to_vec();
    fwht(&mut c);
    // prod (2b_i - 1) = (-1)^{|T|} (-1)^{|T & p|}
    let scale = values.len() as f64;
    for (t, v) in c.iter_mut().enumerate() {
        *v *= sign(t) / scale;
    }
    Ok(c)
}

/// Table values from Fourier coefficients.
pub fn inverse_fourier(coeffs: &[f64]) -> Result<Vec<f64>, MindegError> {
    dimension(coeffs.len())?;
    let mut v: Vec<f64> = coeffs.iter().enumerate().map(|(t, &c)| c * sign(t)).collect();
    fwht(&mut v);
    Ok(v)
}

/// A real function on `{0,1}^n` together with its Fourier coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BooleanTable {
    n: usize,
    values: Vec<f64>,
    fourier: Vec<f64>,
}

impl BooleanTable {
    pub fn from_values(values: Vec<f64>) -> Result<Self, MindegError> {
        let n = dimension(values.len())?;
        let fourier = fourier_transform(&values)?;
        Ok(Self { n, values, fourier })
    }

    pub fn from_fourier(coeffs: Vec<f64>) -> Result<Self, MindegError> {
        let n = dimension(coeffs.len())?;
        let values = inverse_fourier(&coeffs)?;
        Ok(Self { n, values, fourier: coeffs })
    }

    /// Tabulates `f` over every point mask.
    pub fn from_fn(n: usize, f: impl Fn(u32) -> f64) -> Result<Self, MindegError> {
        if n > MAX_N {
            return Err(MindegError::TooLarge { n, max: MAX_N });
        }
        Self::from_values((0..1u32 << n).map(f).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn fourier(&self) -> &[f64] {
        &self.fourier
    }

    pub fn value(&self, point: u32) -> f64 {
        self.values[point as usize]
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile::of_coefficients(&self.fourier)
    }

    /// Fourier mass on subsets containing each coordinate, coordinate 1 first.
    pub fn influences(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                self.fourier
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| t >> i & 1 == 1)
                    .map(|(_, c)| c * c)
                    .sum()
            })
            .collect()
    }

    /// Fixes coordinate `coordinate` (1-based) to the spin `value` and drops it.
    pub fn restrict(&self, coordinate: usize, value: i8) -> Result<BooleanTable, MindegError> {
        if coordinate == 0 || coordinate > self.n {
            return Err(MindegError::Coordinate { coordinate, n: self.n });
        }
        let bit = match value {
            1 => 1usize,
            -1 => 0,
            v => return Err(MindegError::Spin(v)),
        };
        let i = coordinate - 1;
        let low = (1usize << i) - 1;
        let values = (0..1usize << (self.n - 1))
            .map(|p| {
                let full = (p & low) | (bit << i) | ((p & !low) << 1);
                self.values[full]
            })
            .collect();
        Self::from_values(values)
    }

    /// Largest absolute difference of the two restrictions of a coordinate.
    pub fn dependence_on(&self, coordinate: usize) -> Result<f64, MindegError> {
        let (up, down) = (self.restrict(coordinate, 1)?, self.restrict(coordinate, -1)?);
        Ok(up
            .values
            .iter()
            .zip(&down.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Fourier mass per degree; `weights[d]` is the mass on subsets of size `d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub weights: Vec<f64>,
}

impl DegreeProfile {
    pub fn of_coefficients(coeffs: &[f64]) -> Self {
        let n = coeffs.len().trailing_zeros() as usize;
        let mut weights = vec![0.0; n + 1];
        for (t, c) in coeffs.iter().enumerate() {
            weights[t.count_ones() as usize] += c * c;
        }
        Self { weights }
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Highest degree with mass above `tol`.
    pub fn degree(&self, tol: f64) -> Option<usize> {
        self.weights.iter().rposition(|&w| w > tol)
    }

    fn at(&self, d: usize) -> f64 {
        self.weights.get(d).copied().unwrap_or(0.0)
    }

    /// Lexicographic order from the highest degree down. Profiles of different
    /// dimensions compare as if padded with zero mass.
    ///
    /// Masses within `tol` of each other count as equal, so with `tol > 0` this
    /// is not transitive; [`DegreeProfile::total_cmp`] is the exact total order.
    pub fn compare(&self, other: &Self, tol: f64) -> Ordering {
        let top = self.weights.len().max(other.weights.len());
        for d in (0..top).rev() {
            let (a, b) = (self.at(d), other.at(d));
            if (a - b).abs() > tol {
                return a.total_cmp(&b);
            }
        }
        Ordering::Equal
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        let top = self.weights.len().max(other.weights.len());
        (0..top)
            .rev()
            .map(|d| self.at(d).total_cmp(&other.at(d)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

/// Tolerance for the dependence precondition and for profile comparisons in the lemma check.
pub const LEMMA_TOL: f64 = 1e-12;

/// Whether fixing `coordinate` to `+1` strictly lowers the degree profile.
///
/// Requires that the function depends on the coordinate.
pub fn check_restriction_lemma(table: &BooleanTable, coordinate: usize) -> Result<bool, MindegError> {
    if table.dependence_on(coordinate)? <= LEMMA_TOL {
        return Err(MindegError::NotDependent { coordinate });
    }
    let restricted = table.restrict(coordinate, 1)?;
    Ok(restricted.degree_profile().compare(&table.degree_profile(), LEMMA_TOL) == Ordering::Less)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn and_on_two_bits() {
        let t = BooleanTable::from_fn(2, |p| f64::from(p == 0b11)).unwrap();
        assert!(close(t.fourier(), &[0.25; 4]));
        assert!(close(&inverse_fourier(t.fourier()).unwrap(), t.values()));
    }

    #[test]
    fn constant_and_dictator() {
        let one = BooleanTable::from_fn(3, |_| 1.0).unwrap();
        assert!(close(one.fourier(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        let x1 = BooleanTable::from_fn(3, |p| if p & 1 == 1 { 1.0 } else { -1.0 }).unwrap();
        assert!(close(x1.fourier(), &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn rejects_ragged_lengths() {
        assert_eq!(fourier_transform(&[1.0; 3]), Err(MindegError::NotPowerOfTwo(3)));
        assert!(BooleanTable::from_values(vec![0.0; 1 << 13]).is_err());
    }

    fn spin(p: u32, i: usize) -> f64 {
        if p >> i & 1 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    #[test]
    fn profiles() {
        let xx = BooleanTable::from_fn(2, |p| spin(p, 0) * spin(p, 1)).unwrap();
        assert!(close(&xx.degree_profile().weights, &[0.0, 0.0, 1.0]));
        let c = BooleanTable::from_fn(2, |_| 3.0).unwrap();
        assert!(close(&c.degree_profile().weights, &[9.0, 0.0, 0.0]));
        let x1 = BooleanTable::from_fn(2, |p| spin(p, 0)).unwrap();
        assert_eq!(x1.degree_profile().total_cmp(&xx.degree_profile()), Ordering::Less);
    }

    #[test]
    fn restrictions() {
        let x1 = BooleanTable::from_fn(2, |p| spin(p, 0)).unwrap();
        assert!(close(x1.restrict(1, 1).unwrap().values(), &[1.0, 1.0]));
        let xx = BooleanTable::from_fn(2, |p| spin(p, 0) * spin(p, 1)).unwrap();
        assert!(close(xx.restrict(1, 1).unwrap().values(), &[-1.0, 1.0]));
        assert!(close(xx.restrict(2, -1).unwrap().values(), &[1.0, -1.0]));
        assert_eq!(xx.restrict(3, 1), Err(MindegError::Coordinate { coordinate: 3, n: 2 }));
        assert_eq!(xx.restrict(1, 0), Err(MindegError::Spin(0)));
    }

    #[test]
    fn lemma_on_small_functions() {
        let x1 = BooleanTable::from_fn(2, |p| spin(p, 0)).unwrap();
        assert!(check_restriction_lemma(&x1, 1).unwrap());
        assert_eq!(check_restriction_lemma(&x1, 2), Err(MindegError::NotDependent { coordinate: 2 }));
        let xx = BooleanTable::from_fn(2, |p| spin(p, 0) * spin(p, 1)).unwrap();
        assert!(check_restriction_lemma(&xx, 1).unwrap());
    }

    #[test]
    fn influences_of_and() {
        let t = BooleanTable::from_fn(2, |p| f64::from(p == 0b11)).unwrap();
        assert!(close(&t.influences(), &[0.125, 0.125]));
    }
}
