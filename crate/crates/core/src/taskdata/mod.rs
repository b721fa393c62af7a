//! Instance generators, ground-truth oracles and the verification harness.

pub mod oracle;
pub mod sample;
pub mod verify;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::TaskError;
use crate::programs::{addition, copy, parity, scratchpad, Instance, Task};
use crate::value::Value;

pub use oracle::oracle;
pub use sample::CarryMode;
pub use verify::{verify, Failure, LengthEm, VerificationReport, VerifyConfig};

/// Version of the dataset record layout.
pub const DATA_SCHEMA_VERSION: u32 = 1;

/// A dataset format: every shipped task plus formats that have no short program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataTask {
    Shipped(Task),
    /// Copy with repeated tokens allowed.
    CopyRepeat,
    /// Parity of a bare bit string, no hints and no scratchpad.
    ParityPlain,
    /// Addition without index hints, answer most significant first.
    AddPlain,
    /// Mode with a scratchpad of counts in ascending order.
    ModeScratchAsc,
    /// Mode with a scratchpad of counts in order of appearance.
    ModeScratchApp,
}

impl DataTask {
    pub const EXTRA: [DataTask; 5] = [
        DataTask::CopyRepeat,
        DataTask::ParityPlain,
        DataTask::AddPlain,
        DataTask::ModeScratchAsc,
        DataTask::ModeScratchApp,
    ];

    pub fn all() -> impl Iterator<Item = DataTask> {
        Task::ALL.into_iter().map(DataTask::Shipped).chain(Self::EXTRA)
    }

    pub fn name(self) -> &'static str {
        match self {
            DataTask::Shipped(t) => t.name(),
            DataTask::CopyRepeat => "copy-repeat",
            DataTask::ParityPlain => "parity-plain",
            DataTask::AddPlain => "add-plain",
            DataTask::ModeScratchAsc => "mode-scratch-asc",
            DataTask::ModeScratchApp => "mode-scratch-app",
        }
    }

    /// Short description of the sequence layout, stored in every record.
    pub fn format(self) -> &'static str {
        match self {
            DataTask::Shipped(Task::AddRev) => "index-hints-reverse",
            DataTask::Shipped(Task::AddFwd) => "index-hints-forward",
            DataTask::Shipped(Task::ParityScratchpad) => "index-hints-scratchpad",
            DataTask::Shipped(_) => "plain",
            DataTask::CopyRepeat | DataTask::ParityPlain | DataTask::AddPlain => "plain",
            DataTask::ModeScratchAsc => "scratchpad-ascending",
            DataTask::ModeScratchApp => "scratchpad-appearance",
        }
    }

    /// Largest length the task's vocabulary admits.
    pub fn max_len(self) -> usize {
        match self {
            DataTask::Shipped(Task::Count) => crate::programs::count::ALPHABET as usize,
            DataTask::Shipped(Task::CopyUnique) => copy::ALPHABET as usize,
            DataTask::Shipped(Task::Sort) => crate::programs::sort::ALPHABET as usize,
            DataTask::Shipped(Task::ParityScratchpad) => (parity::LAST_HINT - parity::FIRST_HINT + 1) as usize,
            DataTask::Shipped(Task::AddRev | Task::AddFwd) | DataTask::AddPlain => addition::MAX_DIGITS - 1,
            // counts must stay below the letter range once offset
            DataTask::ModeScratchAsc | DataTask::ModeScratchApp => (i8::MAX - scratchpad::COUNT_BASE as i8) as usize,
            _ => 4096,
        }
    }
}

impl fmt::Display for DataTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DataTask {
    type Err = TaskError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DataTask::all()
            .find(|t| t.name() == s)
            .ok_or_else(|| TaskError::UnknownTask(s.to_string()))
    }
}

/// Generator settings. Lengths are drawn uniformly from `min_len..=max_len`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub task: DataTask,
    pub min_len: usize,
    pub max_len: usize,
    /// Only used by the addition tasks.
    pub carry: CarryMode,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(task: DataTask, max_len: usize, seed: u64) -> Self {
        Self {
            task,
            min_len: 1,
            max_len,
            carry: CarryMode::Independent,
            seed,
        }
    }

    fn check(&self) -> Result<(), TaskError> {
        if self.min_len == 0 || self.min_len > self.max_len {
            return Err(TaskError::Infeasible(format!(
                "length range {}..={} is empty or starts at 0",
                self.min_len, self.max_len
            )));
        }
        check_length(self.task, self.max_len)
    }
}

fn check_length(task: DataTask, len: usize) -> Result<(), TaskError> {
    if len == 0 || len > task.max_len() {
        return Err(TaskError::Infeasible(format!(
            "{task} supports lengths 1..={}, got {len}",
            task.max_len()
        )));
    }
    Ok(())
}

/// Generator bookkeeping kept alongside each record.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carry_mode: Option<CarryMode>,
    /// Longest carry chain of the summands.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carry_chain: Option<usize>,
    /// Number of tie repairs applied to a mode instance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tie_repairs: Option<usize>,
}

/// One dataset line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub schema_version: u32,
    pub task: String,
    pub format: String,
    pub length: usize,
    pub prompt: Vec<Value>,
    pub target: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Instance>,
    pub meta: Meta,
}

/// Draws one instance of a shipped task with exactly `len` as its length.
///
/// Length means output numbers for count, digits of the longer summand for
/// addition, and input tokens or bits otherwise.
pub fn sample_instance<R: Rng>(rng: &mut R, task: Task, len: usize, carry: CarryMode) -> Result<(Instance, Meta), TaskError> {
    check_length(DataTask::Shipped(task), len)?;
    let mut meta = Meta::default();
    let inst = match task {
        Task::Count => {
            let (a, b) = sample::count_range(rng, len);
            Instance::Count { a, b }
        }
        Task::Mode => {
            let (tokens, repairs) = sample::mode_tokens(rng, len);
            meta.tie_repairs = Some(repairs);
            Instance::Mode { tokens }
        }
        Task::CopyUnique => Instance::CopyUnique { tokens: sample::copy_tokens(rng, len) },
        Task::Sort => Instance::Sort { tokens: sample::sort_tokens(rng, len) },
        Task::AddRev | Task::AddFwd => {
            let (a, b) = sample::summands(rng, len, carry);
            meta.carry_mode = Some(carry);
            meta.carry_chain = Some(sample::longest_carry_chain(&a, &b));
            Instance::Addition { a, b }
        }
        Task::ParityScratchpad => {
            let bits = sample::bits(rng, len);
            let first_hint = sample::parity_first_hint(rng, len);
            Instance::Parity { bits, first_hint }
        }
        Task::BoolAnd => Instance::BoolAnd { bits: sample::and_bits(rng, len) },
    };
    Ok((inst, meta))
}

/// Draws one record of any dataset task.
pub fn sample_record<R: Rng>(rng: &mut R, task: DataTask, len: usize, carry: CarryMode) -> Result<Record, TaskError> {
    check_length(task, len)?;
    let record = |prompt, target, instance, meta| Record {
        schema_version: DATA_SCHEMA_VERSION,
        task: task.name().to_string(),
        format: task.format().to_string(),
        length: len,
        prompt,
        target,
        instance,
        meta,
    };
    Ok(match task {
        DataTask::Shipped(t) => {
            let (inst, meta) = sample_instance(rng, t, len, carry)?;
            let prompt = crate::programs::encode_prompt(t, &inst)?;
            let target = oracle(t, &inst)?;
            record(prompt, target, Some(inst), meta)
        }
        DataTask::CopyRepeat => {
            let tokens = sample::with_repeats(rng, len, copy::ALPHABET);
            let body = tokens.iter().map(|&t| t as Value);
            let prompt = [copy::SOS].into_iter().chain(body.clone()).chain([copy::SEP]).collect();
            let target = body.chain([copy::EOS]).collect();
            record(prompt, target, None, Meta::default())
        }
        DataTask::ParityPlain => {
            let bits = sample::bits(rng, len);
            let prompt = bits.iter().map(|&b| b as Value).chain([parity::SEP]).collect();
            let symbol = if oracle::parity_of(&bits) == 1 { parity::ODD } else { parity::EVEN };
            record(prompt, vec![symbol, parity::EOS], None, Meta::default())
        }
        DataTask::AddPlain => {
            let (a, b) = sample::summands(rng, len, carry);
            let w = addition::padded_width(&a, &b);
            let digits = |s: &str| -> Vec<Value> { format!("{s:0>w$}").bytes().map(|c| (c - b'0') as Value).collect() };
            let mut prompt = vec![addition::START_PROMPT];
            prompt.extend(digits(&a));
            prompt.push(addition::PLUS);
            prompt.extend(digits(&b));
            prompt.push(addition::EQUALS_SIGN);
            let mut target = digits(&oracle::sum(&a, &b)?);
            target.push(addition::END_RESPONSE);
            let meta = Meta {
                carry_mode: Some(carry),
                carry_chain: Some(sample::longest_carry_chain(&a, &b)),
                tie_repairs: None,
            };
            record(prompt, target, None, meta)
        }
        DataTask::ModeScratchAsc | DataTask::ModeScratchApp => {
            let (tokens, repairs) = sample::mode_tokens(rng, len);
            let prompt = crate::programs::mode::encode(&tokens)?;
            let mut target = if task == DataTask::ModeScratchAsc {
                scratchpad::ascending_frequency(&tokens)
            } else {
                scratchpad::appearance_order(&tokens)
            };
            target.push(crate::programs::mode::EOS);
            let meta = Meta {
                tie_repairs: Some(repairs),
                ..Meta::default()
            };
            record(prompt, target, None, meta)
        }
    })
}

/// `count` records with uniformly drawn lengths. The seed fully determines the output.
pub fn gen_instances(cfg: &GenConfig, count: usize) -> Result<Vec<Record>, TaskError> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..count)
        .map(|_| {
            let len = rng.random_range(cfg.min_len..=cfg.max_len);
            sample_record(&mut rng, cfg.task, len, cfg.carry)
        })
        .collect()
}

/// Generator stream for one length, independent of every other length.
pub fn length_rng(seed: u64, len: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(len as u64);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for t in DataTask::all() {
            assert_eq!(t.name().parse::<DataTask>().unwrap(), t);
        }
        assert!("copy".parse::<DataTask>().is_err());
    }

    #[test]
    fn seeded_generation_is_repeatable() {
        for t in DataTask::all() {
            let cfg = GenConfig::new(t, 20, 7);
            assert_eq!(gen_instances(&cfg, 30).unwrap(), gen_instances(&cfg, 30).unwrap(), "{t}");
        }
    }

    #[test]
    fn count_records_stay_in_alphabet() {
        let cfg = GenConfig::new(DataTask::Shipped(Task::Count), 50, 1);
        for r in gen_instances(&cfg, 500).unwrap() {
            let Some(Instance::Count { a, b }) = r.instance else { panic!() };
            assert!(b < 155 && a <= b);
            assert!(r.length <= 50 && r.length == (b - a + 1) as usize);
        }
    }

    #[test]
    fn infeasible_lengths_are_rejected() {
        let cfg = GenConfig::new(DataTask::Shipped(Task::CopyUnique), 101, 0);
        assert!(matches!(gen_instances(&cfg, 1), Err(TaskError::Infeasible(_))));
        let cfg = GenConfig { min_len: 0, ..GenConfig::new(DataTask::ParityPlain, 5, 0) };
        assert!(gen_instances(&cfg, 1).is_err());
    }

    #[test]
    fn records_re_encode() {
        for t in Task::ALL {
            let cfg = GenConfig::new(DataTask::Shipped(t), 30, 3);
            let spec = t.spec();
            for r in gen_instances(&cfg, 50).unwrap() {
                let inst = spec.decode_prompt(&r.prompt).unwrap();
                assert_eq!(Some(&inst), r.instance.as_ref());
                assert_eq!(spec.encode_prompt(&inst).unwrap(), r.prompt);
            }
        }
    }

    #[test]
    fn mode_scratchpad_targets_end_with_the_mode() {
        let cfg = GenConfig::new(DataTask::ModeScratchAsc, 30, 3);
        for r in gen_instances(&cfg, 50).unwrap() {
            let n = r.target.len();
            let tokens: Vec<u8> = r.prompt[..r.prompt.len() - 1].iter().map(|&t| t as u8).collect();
            assert_eq!(r.target[n - 2], oracle::unique_mode(&tokens).unwrap() as Value);
        }
    }
}
