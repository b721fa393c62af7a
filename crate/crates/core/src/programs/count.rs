//! Count from `a` to `b` inclusive: `SoS a b SEP a a+1 ... b EoS`.

use crate::error::TaskError;
use crate::ir::{Program, ProgramBuilder};
use crate::programs::{invalid, malformed, Instance};
use crate::value::{AggKind, Predicate, Value, NONE};

pub const SOS: Value = -1;
pub const EOS: Value = -2;
pub const SEP: Value = -3;
/// Numbers are single tokens `0..ALPHABET`.
pub const ALPHABET: u16 = 155;

pub fn program() -> Program {
    let mut b = ProgramBuilder::new("count");
    let x = b.input("seq");
    let idx = b.indices(x);
    let sos = b.full(x, SOS);
    let sos_idx = b.kqv(x, sos, idx, Predicate::Eq, AggKind::Max, NONE);
    let sos_idx = b.name(sos_idx, "sos_idx");
    let a_idx = b.add_const(sos_idx, 1);
    let b_idx = b.add_const(a_idx, 1);
    let start = b.index_select(x, a_idx, 0);
    let start = b.name(start, "a");
    let end = b.index_select(x, b_idx, 0);
    let end = b.name(end, "b");
    let is_sep = b.eq_const(x, SEP);
    let is_end = b.cmp(x, Predicate::Eq, end);
    let is_end = b.name(is_end, "is_b");
    let succ = b.add_const(x, 1);
    let eos = b.full(x, EOS);
    let step = b.where_(is_end, eos, succ);
    let next = b.where_(is_sep, start, step);
    let next = b.name(next, "next");
    b.finish(next)
}

pub fn encode(a: u16, b: u16) -> Result<Vec<Value>, TaskError> {
    if a > b || b >= ALPHABET {
        return Err(invalid(format!("count needs a <= b < {ALPHABET}, got {a}..{b}")));
    }
    Ok(vec![SOS, a as Value, b as Value, SEP])
}

pub fn decode_prompt(prompt: &[Value]) -> Result<Instance, TaskError> {
    match *prompt {
        [SOS, a, b, SEP] if 0 <= a && a <= b && b < ALPHABET as Value => Ok(Instance::Count { a: a as u16, b: b as u16 }),
        _ => Err(malformed("count prompt must be SoS a b SEP with a <= b")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prompt_round_trip() {
        let p = encode(2, 5).unwrap();
        assert_eq!(p, vec![-1, 2, 5, -3]);
        assert_eq!(decode_prompt(&p).unwrap(), Instance::Count { a: 2, b: 5 });
        assert!(encode(5, 2).is_err());
        assert!(encode(0, 155).is_err());
        assert!(decode_prompt(&[-1, 2, 5]).is_err());
    }
}
