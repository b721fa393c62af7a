//! Prefix AND of bits. The answer is the program output at the last prompt position.

use crate::error::TaskError;
use crate::ir::{Program, ProgramBuilder};
use crate::programs::{invalid, malformed, Answer, Instance};
use crate::value::{AggKind, Predicate, Value};

/// Never produced; runs stop after their single step.
pub const STOP: Value = -2;

/// Searches the context for a 0; answers 1 when there is none.
pub fn program() -> Program {
    let mut b = ProgramBuilder::new("bool-and");
    let x = b.input("bits");
    let zero = b.full(x, 0);
    let out = b.kqv(x, zero, zero, Predicate::Eq, AggKind::Mean, 1);
    let out = b.name(out, "and");
    b.finish(out)
}

pub fn encode(bits: &[u8]) -> Result<Vec<Value>, TaskError> {
    if bits.is_empty() || bits.iter().any(|&b| b > 1) {
        return Err(invalid("bool-and needs a non-empty bit string"));
    }
    Ok(bits.iter().map(|&b| b as Value).collect())
}

pub fn decode_prompt(prompt: &[Value]) -> Result<Instance, TaskError> {
    if prompt.is_empty() || prompt.iter().any(|&b| !(0..=1).contains(&b)) {
        return Err(malformed("bool-and prompt must be bits"));
    }
    Ok(Instance::BoolAnd {
        bits: prompt.iter().map(|&b| b as u8).collect(),
    })
}

pub fn decode_answer(completion: &[Value]) -> Result<Answer, TaskError> {
    match completion {
        [b @ (0 | 1)] => Ok(Answer::Bit(*b as u8)),
        _ => Err(malformed(format!("expected a single bit, got {completion:?}"))),
    }
}
