//! Sort distinct tokens ascending: `x_1 ... x_n SEP sorted... EoS`.

use crate::error::TaskError;
use crate::ir::{Program, ProgramBuilder};
use crate::programs::{check_tokens, malformed, tokens_before, Instance};
use crate::value::{AggKind, Predicate, Value};

pub const EOS: Value = -2;
/// Below every alphabet token, so the first output is the global minimum.
pub const SEP: Value = -3;
pub const ALPHABET: u8 = 100;

/// Smallest token in context that is greater than the current one.
pub fn program() -> Program {
    let mut b = ProgramBuilder::new("sort");
    let x = b.input("seq");
    let next = b.kqv(x, x, x, Predicate::Gt, AggKind::Min, EOS);
    let next = b.name(next, "next");
    b.finish(next)
}

pub fn encode(tokens: &[u8]) -> Result<Vec<Value>, TaskError> {
    check_tokens(tokens, ALPHABET, true)?;
    Ok(tokens.iter().map(|&t| t as Value).chain([SEP]).collect())
}

pub fn decode_prompt(prompt: &[Value]) -> Result<Instance, TaskError> {
    let tokens = tokens_before(prompt, SEP, ALPHABET)?;
    check_tokens(&tokens, ALPHABET, true).map_err(|e| malformed(e.to_string()))?;
    Ok(Instance::Sort { tokens })
}
