//! Generalization on an unseen part of the cube, for the AND of all bits.
//!
//! Training data keeps the last `k` coordinates at 1, so the minimum-degree
//! interpolator ignores them, while a program that searches for any zero does not.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{min_degree_interpolator, MindegError, SupportSet};
use crate::programs::{Answer, Task};
use crate::runtime::Runner;
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GotuSample {
    pub bits: Vec<u8>,
    /// AND of the bits.
    pub label: u8,
}

fn sample(n: usize, zero: Option<usize>) -> GotuSample {
    let mut bits = vec![1; n];
    if let Some(i) = zero {
        bits[i] = 0;
    }
    let label = u8::from(zero.is_none());
    GotuSample { bits, label }
}

fn check(n: usize, k: usize) -> Result<(), MindegError> {
    if k == 0 || k >= n {
        return Err(MindegError::Parameters(format!("need 1 <= k < n, got n={n}, k={k}")));
    }
    Ok(())
}

/// Train and unseen samples. Each is all-ones with probability 1/2; otherwise one
/// zero, uniform among the first `n - k` coordinates (train) or the last `k` (unseen).
pub fn gotu_distributions(n: usize, k: usize, seed: u64, count: usize) -> Result<(Vec<GotuSample>, Vec<GotuSample>), MindegError> {
    check(n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |lo: usize, hi: usize| -> Vec<GotuSample> {
        (0..count)
            .map(|_| {
                let zero = rng.random_bool(0.5).then(|| rng.random_range(lo..hi));
                sample(n, zero)
            })
            .collect()
    };
    let train = draw(0, n - k);
    let unseen = draw(n - k, n);
    Ok((train, unseen))
}

fn mask(bits: &[u8]) -> u32 {
    bits.iter().enumerate().map(|(i, &b)| u32::from(b) << i).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnseenPrediction {
    /// 1-based coordinate holding the zero.
    pub zero_at: usize,
    pub interpolator: f64,
    pub program: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GotuReport {
    pub schema_version: u32,
    pub n: usize,
    pub k: usize,
    pub support_size: usize,
    /// Mass per degree, degree 0 first.
    pub degree_profile: Vec<f64>,
    /// Fourier mass on subsets containing each coordinate, coordinate 1 first.
    pub dependence: Vec<f64>,
    /// Nonzero Fourier coefficients as (1-based subset, coefficient).
    pub coefficients: Vec<(Vec<usize>, f64)>,
    pub max_train_residual: f64,
    pub unseen: Vec<UnseenPrediction>,
    /// Largest `|interpolator - 1|` over the unseen points.
    pub max_unseen_deviation: f64,
}

/// Fits the minimum-degree interpolator on the whole train support and compares it
/// with the boolean-AND program on every unseen single-zero input.
pub fn gotu_report(n: usize, k: usize) -> Result<GotuReport, MindegError> {
    check(n, k)?;
    let train: Vec<GotuSample> = [None].into_iter().chain((0..n - k).map(Some)).map(|z| sample(n, z)).collect();
    let support = SupportSet::new(
        n,
        train.iter().map(|s| mask(&s.bits)).collect(),
        train.iter().map(|s| f64::from(s.label)).collect(),
    )?;
    let g = min_degree_interpolator(&support)?;
    let max_train_residual = train
        .iter()
        .map(|s| (g.value(mask(&s.bits)) - f64::from(s.label)).abs())
        .fold(0.0, f64::max);

    let spec = Task::BoolAnd.spec();
    let runner = Runner::new(&spec).map_err(|e| MindegError::Parameters(e.to_string()))?;
    let unseen: Vec<UnseenPrediction> = (n - k..n)
        .map(|i| {
            let s = sample(n, Some(i));
            let prompt: Vec<Value> = s.bits.iter().map(|&b| Value::from(b)).collect();
            let run = runner.run(&prompt, false).map_err(|e| MindegError::Parameters(e.to_string()))?;
            let program = match spec.decode_answer(&run.full_sequence, run.prompt_len) {
                Ok(Answer::Bit(b)) => b,
                other => return Err(MindegError::Parameters(format!("bool-and answered {other:?}"))),
            };
            Ok(UnseenPrediction {
                zero_at: i + 1,
                interpolator: g.value(mask(&s.bits)),
                program,
            })
        })
        .collect::<Result<_, MindegError>>()?;
    let max_unseen_deviation = unseen.iter().map(|u| (u.interpolator - 1.0).abs()).fold(0.0, f64::max);
    let coefficients = g
        .fourier()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.abs() > 1e-9)
        .map(|(t, &c)| ((0..n).filter(|i| t >> i & 1 == 1).map(|i| i + 1).collect(), c))
        .collect();
    Ok(GotuReport {
        schema_version: crate::taskdata::DATA_SCHEMA_VERSION,
        n,
        k,
        support_size: support.points().len(),
        degree_profile: g.degree_profile().weights,
        dependence: g.influences(),
        coefficients,
        max_train_residual,
        unseen,
        max_unseen_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn train_keeps_the_tail_at_one() {
        let (train, unseen) = gotu_distributions(20, 5, 3, 2000).unwrap();
        assert!(train.iter().all(|s| s.bits[15..].iter().all(|&b| b == 1)));
        assert!(unseen.iter().all(|s| s.bits[..15].iter().all(|&b| b == 1)));
        let ones = train.iter().filter(|s| s.label == 1).count();
        assert!((800..1200).contains(&ones));
    }

    #[test]
    fn bad_parameters() {
        assert!(gotu_distributions(4, 4, 0, 1).is_err());
        assert!(gotu_report(4, 0).is_err());
    }

    #[test]
    fn small_report() {
        let r = gotu_report(4, 1).unwrap();
        assert!(r.max_train_residual < 1e-9);
        assert!(r.max_unseen_deviation < 1e-6);
        assert!(r.unseen.iter().all(|u| u.program == 0));
        assert!(r.dependence[3] < 1e-12);
    }
}
