//! Runs a task program on generated instances and scores it against the oracle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::TaskError;
use crate::programs::{Instance, Task, TaskSpec};
use crate::runtime::{exact_match, Runner};
use crate::taskdata::{length_rng, oracle, sample_instance, CarryMode, DATA_SCHEMA_VERSION};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub min_len: usize,
    pub max_len: usize,
    /// Random instances per length; ignored when `exhaustive` is set.
    pub per_length: usize,
    pub carry: CarryMode,
    pub seed: u64,
    /// Enumerate every instance of each length (count only).
    pub exhaustive: bool,
    /// Failures kept in the report; the rest are only counted.
    pub max_failures: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            min_len: 1,
            max_len: 100,
            per_length: 1000,
            carry: CarryMode::Independent,
            seed: 0,
            exhaustive: false,
            max_failures: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthEm {
    pub length: usize,
    pub instances: usize,
    pub exact: usize,
    pub em: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub length: usize,
    pub instance: Instance,
    pub predicted: Vec<Value>,
    pub expected: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub task: Task,
    /// `exhaustive`, or the sampling distribution.
    pub distribution: String,
    pub seed: u64,
    pub instances: usize,
    pub em: f64,
    pub per_length: Vec<LengthEm>,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// Every instance of length `len` for tasks that support enumeration.
pub fn enumerate(task: Task, len: usize) -> Result<Vec<Instance>, TaskError> {
    match task {
        Task::Count => {
            let len = u16::try_from(len).ok().filter(|&l| (1..=crate::programs::count::ALPHABET).contains(&l));
            let len = len.ok_or_else(|| TaskError::Infeasible("count length out of range".into()))?;
            Ok((0..=crate::programs::count::ALPHABET - len)
                .map(|a| Instance::Count { a, b: a + len - 1 })
                .collect())
        }
        _ => Err(TaskError::Infeasible(format!("{task} has no exhaustive mode"))),
    }
}

fn distribution(task: Task, cfg: &VerifyConfig) -> String {
    match task {
        _ if cfg.exhaustive => "exhaustive".into(),
        Task::AddRev | Task::AddFwd => format!("random-{}", cfg.carry),
        _ => "random".into(),
    }
}

/// Runs `spec`'s program on every instance and compares the completion with the oracle.
///
/// Instances of each length come from their own seeded stream, so a length's
/// instances do not depend on the range being verified. Work is spread over the
/// rayon pool; results are merged in instance order.
pub fn verify(spec: &TaskSpec, cfg: &VerifyConfig) -> Result<VerificationReport, TaskError> {
    let task = spec.task;
    if cfg.min_len == 0 || cfg.min_len > cfg.max_len {
        return Err(TaskError::Infeasible(format!("empty length range {}..={}", cfg.min_len, cfg.max_len)));
    }
    let runner = Runner::new(spec)?;
    let mut work: Vec<(usize, Instance)> = Vec::new();
    for len in cfg.min_len..=cfg.max_len {
        if cfg.exhaustive {
            work.extend(enumerate(task, len)?.into_iter().map(|i| (len, i)));
        } else {
            let mut rng = length_rng(cfg.seed, len);
            for _ in 0..cfg.per_length {
                work.push((len, sample_instance(&mut rng, task, len, cfg.carry)?.0));
            }
        }
    }

    let outcomes: Vec<(usize, Option<Failure>)> = work
        .into_par_iter()
        .map(|(length, instance)| Ok((length, check_one(spec, &runner, length, instance)?)))
        .collect::<Result<_, TaskError>>()?;

    let mut per_length: Vec<LengthEm> = (cfg.min_len..=cfg.max_len)
        .map(|length| LengthEm { length, instances: 0, exact: 0, em: 0.0 })
        .collect();
    let mut failures = Vec::new();
    let mut failure_count = 0;
    let total = outcomes.len();
    for (length, outcome) in outcomes {
        let slot = &mut per_length[length - cfg.min_len];
        slot.instances += 1;
        match outcome {
            None => slot.exact += 1,
            Some(f) => {
                failure_count += 1;
                if failures.len() < cfg.max_failures {
                    failures.push(f);
                }
            }
        }
    }
    for l in &mut per_length {
        l.em = if l.instances == 0 { 1.0 } else { l.exact as f64 / l.instances as f64 };
    }
    Ok(VerificationReport {
        schema_version: DATA_SCHEMA_VERSION,
        task,
        distribution: distribution(task, cfg),
        seed: cfg.seed,
        instances: total,
        em: if total == 0 { 1.0 } else { (total - failure_count) as f64 / total as f64 },
        per_length,
        failure_count,
        failures,
    })
}

fn check_one(spec: &TaskSpec, runner: &Runner, length: usize, instance: Instance) -> Result<Option<Failure>, TaskError> {
    let prompt = spec.encode_prompt(&instance)?;
    let expected = oracle(spec.task, &instance)?;
    let (predicted, error) = match runner.run(&prompt, false) {
        Ok(r) => (r.completion().to_vec(), None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    Ok((exact_match(&predicted, &expected) == 0 || error.is_some()).then(|| Failure {
        length,
        instance,
        predicted,
        expected,
        error,
    }))
}
