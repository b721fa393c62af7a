//! Next-token programs for the shipped tasks, with their vocabularies and codecs.
//!
//! Each task module exposes `program()`, a prompt encoder, a prompt decoder and an
//! answer decoder. [`TaskSpec`] bundles them behind one interface.

pub mod addition;
pub mod boolean;
pub mod copy;
pub mod count;
pub mod mode;
pub mod parity;
pub mod scratchpad;
pub mod sort;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::TaskError;
use crate::ir::Program;
use crate::value::Value;

/// A task with a shipped next-token program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Count,
    Mode,
    CopyUnique,
    Sort,
    AddRev,
    AddFwd,
    ParityScratchpad,
    BoolAnd,
}

impl Task {
    pub const ALL: [Task; 8] = [
        Task::Count,
        Task::Mode,
        Task::CopyUnique,
        Task::Sort,
        Task::AddRev,
        Task::AddFwd,
        Task::ParityScratchpad,
        Task::BoolAnd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Count => "count",
            Task::Mode => "mode",
            Task::CopyUnique => "copy-unique",
            Task::Sort => "sort",
            Task::AddRev => "add-rev",
            Task::AddFwd => "add-fwd",
            Task::ParityScratchpad => "parity-scratchpad",
            Task::BoolAnd => "bool-and",
        }
    }

    pub fn spec(self) -> TaskSpec {
        TaskSpec::new(self)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = TaskError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| TaskError::UnknownTask(s.to_string()))
    }
}

/// One task instance, before encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case")]
pub enum Instance {
    /// Count from `a` to `b` inclusive.
    Count { a: u16, b: u16 },
    Mode { tokens: Vec<u8> },
    CopyUnique { tokens: Vec<u8> },
    Sort { tokens: Vec<u8> },
    /// Decimal summands, most significant digit first, without padding.
    Addition { a: String, b: String },
    /// Bits with the value of the first index hint.
    Parity { bits: Vec<u8>, first_hint: Value },
    BoolAnd { bits: Vec<u8> },
}

/// Task-level answer decoded from a full sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Tokens(Vec<Value>),
    Token(Value),
    /// A decimal number without leading zeros.
    Number(String),
    Bit(u8),
}

/// How many tokens a run may append before giving up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxSteps {
    /// `prompt_len * 4 + 16`.
    ScaledByPrompt,
    Fixed(usize),
}

impl MaxSteps {
    pub fn for_prompt(self, prompt_len: usize) -> usize {
        match self {
            MaxSteps::ScaledByPrompt => prompt_len * 4 + 16,
            MaxSteps::Fixed(n) => n,
        }
    }
}

/// A named special token of a task vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Special {
    pub name: &'static str,
    pub value: Value,
}

/// Everything needed to run and score one task.
#[derive(Clone, Debug)]
pub struct TaskSpec {
    pub task: Task,
    pub specials: Vec<Special>,
    pub program: Program,
    pub stop_token: Value,
    pub max_steps: MaxSteps,
}

impl TaskSpec {
    pub fn new(task: Task) -> Self {
        let sp = |name, value| Special { name, value };
        let (specials, program, stop_token, max_steps) = match task {
            Task::Count => (
                vec![sp("SoS", count::SOS), sp("EoS", count::EOS), sp("SEP", count::SEP)],
                count::program(),
                count::EOS,
                MaxSteps::Fixed(count::ALPHABET as usize + 1),
            ),
            Task::Mode => (
                vec![sp("EoS", mode::EOS), sp("SEP", mode::SEP)],
                mode::program(),
                mode::EOS,
                MaxSteps::ScaledByPrompt,
            ),
            Task::CopyUnique => (
                vec![sp("SoS", copy::SOS), sp("EoS", copy::EOS), sp("SEP", copy::SEP)],
                copy::program(),
                copy::EOS,
                MaxSteps::ScaledByPrompt,
            ),
            Task::Sort => (
                vec![sp("EoS", sort::EOS), sp("SEP", sort::SEP)],
                sort::program(),
                sort::EOS,
                MaxSteps::ScaledByPrompt,
            ),
            Task::AddRev | Task::AddFwd => (
                vec![
                    sp("START_PROMPT", addition::START_PROMPT),
                    sp("PLUS", addition::PLUS),
                    sp("EQUALS_SIGN", addition::EQUALS_SIGN),
                    sp("END_RESPONSE", addition::END_RESPONSE),
                    sp("NONE", crate::NONE),
                ],
                if task == Task::AddRev {
                    addition::reverse_program()
                } else {
                    addition::forward_program()
                },
                addition::END_RESPONSE,
                MaxSteps::ScaledByPrompt,
            ),
            Task::ParityScratchpad => (
                vec![
                    sp("EoS", parity::EOS),
                    sp("SEP", parity::SEP),
                    sp("+", parity::EVEN),
                    sp("-", parity::ODD),
                ],
                parity::program(),
                parity::EOS,
                MaxSteps::ScaledByPrompt,
            ),
            Task::BoolAnd => (vec![], boolean::program(), boolean::STOP, MaxSteps::Fixed(1)),
        };
        Self {
            task,
            specials,
            program,
            stop_token,
            max_steps,
        }
    }

    pub fn encode_prompt(&self, inst: &Instance) -> Result<Vec<Value>, TaskError> {
        encode_prompt(self.task, inst)
    }

    /// Inverse of [`TaskSpec::encode_prompt`] on valid prompts.
    pub fn decode_prompt(&self, prompt: &[Value]) -> Result<Instance, TaskError> {
        match self.task {
            Task::Count => count::decode_prompt(prompt),
            Task::Mode => mode::decode_prompt(prompt),
            Task::CopyUnique => copy::decode_prompt(prompt),
            Task::Sort => sort::decode_prompt(prompt),
            Task::AddRev | Task::AddFwd => addition::decode_prompt(prompt),
            Task::ParityScratchpad => parity::decode_prompt(prompt),
            Task::BoolAnd => boolean::decode_prompt(prompt),
        }
    }

    /// Reads the task answer from a full sequence whose prompt has `prompt_len` tokens.
    pub fn decode_answer(&self, full: &[Value], prompt_len: usize) -> Result<Answer, TaskError> {
        let completion = full
            .get(prompt_len..)
            .ok_or_else(|| TaskError::Malformed("sequence shorter than its prompt".into()))?;
        match self.task {
            Task::Count | Task::CopyUnique | Task::Sort => {
                strip_stop(completion, self.stop_token).map(|t| Answer::Tokens(t.to_vec()))
            }
            Task::Mode => match strip_stop(completion, self.stop_token)? {
                [t] => Ok(Answer::Token(*t)),
                other => Err(TaskError::Malformed(format!("expected one answer token, got {other:?}"))),
            },
            Task::AddRev => addition::decode_answer(completion, false),
            Task::AddFwd => addition::decode_answer(completion, true),
            Task::ParityScratchpad => parity::decode_answer(completion),
            Task::BoolAnd => boolean::decode_answer(completion),
        }
    }

    pub fn max_steps_for(&self, prompt_len: usize) -> usize {
        self.max_steps.for_prompt(prompt_len)
    }

    /// Renders one token for human reading.
    pub fn render_token(&self, t: Value) -> String {
        if let Some(s) = self.specials.iter().find(|s| s.value == t) {
            return s.name.to_string();
        }
        match self.task {
            Task::Mode | Task::CopyUnique => scratchpad::letter(t).map(String::from).unwrap_or_else(|| t.to_string()),
            _ => t.to_string(),
        }
    }
}

/// Encodes an instance as a prompt, validating it.
pub fn encode_prompt(task: Task, inst: &Instance) -> Result<Vec<Value>, TaskError> {
    match (task, inst) {
        (Task::Count, Instance::Count { a, b }) => count::encode(*a, *b),
        (Task::Mode, Instance::Mode { tokens }) => mode::encode(tokens),
        (Task::CopyUnique, Instance::CopyUnique { tokens }) => copy::encode(tokens),
        (Task::Sort, Instance::Sort { tokens }) => sort::encode(tokens),
        (Task::AddRev | Task::AddFwd, Instance::Addition { a, b }) => addition::encode(a, b),
        (Task::ParityScratchpad, Instance::Parity { bits, first_hint }) => parity::encode(bits, *first_hint),
        (Task::BoolAnd, Instance::BoolAnd { bits }) => boolean::encode(bits),
        _ => Err(TaskError::InvalidInstance(format!("{inst:?} is not a {} instance", task))),
    }
}

fn strip_stop(completion: &[Value], stop: Value) -> Result<&[Value], TaskError> {
    match completion.split_last() {
        Some((&last, rest)) if last == stop => Ok(rest),
        _ => Err(TaskError::Malformed("completion does not end with the stop token".into())),
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> TaskError {
    TaskError::InvalidInstance(msg.into())
}

pub(crate) fn malformed(msg: impl Into<String>) -> TaskError {
    TaskError::Malformed(msg.into())
}

/// Checks that every token is below `alphabet` and, if `unique`, that none repeats.
pub(crate) fn check_tokens(tokens: &[u8], alphabet: u8, unique: bool) -> Result<(), TaskError> {
    if tokens.is_empty() {
        return Err(invalid("empty token list"));
    }
    if let Some(t) = tokens.iter().find(|&&t| t >= alphabet) {
        return Err(invalid(format!("token {t} outside alphabet of {alphabet}")));
    }
    if unique {
        let mut seen = vec![false; alphabet as usize];
        for &t in tokens {
            if std::mem::replace(&mut seen[t as usize], true) {
                return Err(invalid(format!("token {t} repeats")));
            }
        }
    }
    Ok(())
}

/// Splits `[body..., sep]` and converts the body to alphabet tokens.
pub(crate) fn tokens_before(prompt: &[Value], sep: Value, alphabet: u8) -> Result<Vec<u8>, TaskError> {
    let body = match prompt.split_last() {
        Some((&last, body)) if last == sep && !body.is_empty() => body,
        _ => return Err(malformed("prompt must be tokens followed by the separator")),
    };
    body.iter()
        .map(|&t| {
            u8::try_from(t)
                .ok()
                .filter(|&t| t < alphabet)
                .ok_or_else(|| malformed(format!("token {t} outside the alphabet")))
        })
        .collect()
}
