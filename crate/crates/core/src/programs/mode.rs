//! Most frequent token: `x_1 ... x_n SEP mode EoS`.

use crate::error::TaskError;
use crate::ir::{Program, ProgramBuilder};
use crate::programs::{check_tokens, tokens_before, Instance};
use crate::value::{AggKind, Predicate, Value};

pub const EOS: Value = -2;
pub const SEP: Value = -3;
pub const ALPHABET: u8 = 52;

pub fn program() -> Program {
    let mut b = ProgramBuilder::new("mode");
    let x = b.input("seq");
    let same = b.select(x, x, Predicate::Eq);
    let count = b.sel_width(same);
    let count = b.name(count, "count");
    let is_tok = b.cmp_const(x, Predicate::Ge, 0);
    let count = b.mask(count, is_tok, 0);
    let count = b.name(count, "count_tokens_only");
    let best = b.prefix_max(count);
    let best = b.name(best, "max_count");
    let winner = b.kqv(count, best, x, Predicate::Eq, AggKind::Mean, EOS);
    let winner = b.name(winner, "most_frequent");
    let is_sep = b.eq_const(x, SEP);
    let eos = b.full(x, EOS);
    let next = b.where_(is_sep, winner, eos);
    let next = b.name(next, "next");
    b.finish(next)
}

pub fn encode(tokens: &[u8]) -> Result<Vec<Value>, TaskError> {
    check_tokens(tokens, ALPHABET, false)?;
    Ok(tokens.iter().map(|&t| t as Value).chain([SEP]).collect())
}

pub fn decode_prompt(prompt: &[Value]) -> Result<Instance, TaskError> {
    tokens_before(prompt, SEP, ALPHABET).map(|tokens| Instance::Mode { tokens })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prompt_round_trip() {
        let p = encode(&[0, 1, 1, 2]).unwrap();
        assert_eq!(p, vec![0, 1, 1, 2, -3]);
        assert_eq!(decode_prompt(&p).unwrap(), Instance::Mode { tokens: vec![0, 1, 1, 2] });
        assert!(encode(&[52]).is_err());
        assert!(encode(&[]).is_err());
    }
}
