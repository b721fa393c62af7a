//! Copy a prompt of distinct tokens: `SoS x_1 ... x_n SEP x_1 ... x_n EoS`.

use crate::error::TaskError;
use crate::ir::{Program, ProgramBuilder};
use crate::programs::{check_tokens, malformed, tokens_before, Instance};
use crate::value::Value;

pub const SOS: Value = -1;
pub const EOS: Value = -2;
pub const SEP: Value = -3;
pub const ALPHABET: u8 = 100;

/// The separator stands in for the start token, so the first copied token is the one
/// following `SoS`. Once the induction head lands on `SEP` the copy is complete.
pub fn program() -> Program {
    let mut b = ProgramBuilder::new("copy-unique");
    let x = b.input("seq");
    let is_sep = b.eq_const(x, SEP);
    let sos = b.full(x, SOS);
    let query = b.where_(is_sep, sos, x);
    let query = b.name(query, "query");
    let copied = b.induct(x, query, 1, EOS);
    let copied = b.name(copied, "induct");
    let done = b.eq_const(copied, SEP);
    let eos = b.full(x, EOS);
    let next = b.where_(done, eos, copied);
    let next = b.name(next, "next");
    b.finish(next)
}

pub fn encode(tokens: &[u8]) -> Result<Vec<Value>, TaskError> {
    check_tokens(tokens, ALPHABET, true)?;
    Ok([SOS].into_iter().chain(tokens.iter().map(|&t| t as Value)).chain([SEP]).collect())
}

pub fn decode_prompt(prompt: &[Value]) -> Result<Instance, TaskError> {
    let body = prompt
        .strip_prefix(&[SOS])
        .ok_or_else(|| malformed("copy prompt must start with SoS"))?;
    let tokens = tokens_before(body, SEP, ALPHABET)?;
    check_tokens(&tokens, ALPHABET, true).map_err(|e| malformed(e.to_string()))?;
    Ok(Instance::CopyUnique { tokens })
}
