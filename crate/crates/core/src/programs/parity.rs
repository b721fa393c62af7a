//! Parity with index hints and a scratchpad.
//!
//! The prompt alternates hints and bits, `h_1 b_1 h_2 b_2 ... SEP`. The output starts
//! with the even symbol; for every 1-bit, in hint order, it writes that bit's hint
//! followed by the flipped running parity. The final symbol is the answer.

use crate::error::TaskError;
use crate::ir::{Program, ProgramBuilder};
use crate::programs::{invalid, malformed, Answer, Instance};
use crate::value::{AggKind, MapFn, Predicate, Value, NONE};

pub const EOS: Value = -2;
pub const SEP: Value = -3;
/// Running parity is even (`+`).
pub const EVEN: Value = -10;
/// Running parity is odd (`-`).
pub const ODD: Value = -11;
/// Hints form a contiguous ascending slice of `FIRST_HINT..=LAST_HINT`.
pub const FIRST_HINT: Value = 10;
pub const LAST_HINT: Value = 127;

pub fn program() -> Program {
    let mut b = ProgramBuilder::new("parity-scratchpad");
    let x = b.input("seq");
    let prev = b.shift_right(x, 1, 0);
    let prev = b.name(prev, "prev");
    let is_one = b.eq_const(x, 1);
    let one_hint = b.mask(prev, is_one, NONE);
    let one_hint = b.name(one_hint, "hint_of_one");
    let prev_is_hint = b.cmp_const(prev, Predicate::Ge, FIRST_HINT);
    let last_hint = b.mask(prev, prev_is_hint, 0);
    let last_hint = b.name(last_hint, "last_hint");
    let next_hint = b.kqv(one_hint, last_hint, one_hint, Predicate::Gt, AggKind::Min, EOS);
    let next_hint = b.name(next_hint, "next_one_hint");
    let neg = b.tok_map(prev, MapFn::Neg);
    let flipped = b.add_const(neg, EVEN + ODD);
    let flipped = b.name(flipped, "flipped");
    let is_hint = b.cmp_const(x, Predicate::Ge, FIRST_HINT);
    let after_hint = b.where_(is_hint, flipped, next_hint);
    let is_sep = b.eq_const(x, SEP);
    let even = b.full(x, EVEN);
    let next = b.where_(is_sep, even, after_hint);
    let next = b.name(next, "next");
    b.finish(next)
}

pub fn encode(bits: &[u8], first_hint: Value) -> Result<Vec<Value>, TaskError> {
    if bits.is_empty() || bits.iter().any(|&b| b > 1) {
        return Err(invalid("parity needs a non-empty bit string"));
    }
    let last = first_hint as i32 + bits.len() as i32 - 1;
    if first_hint < FIRST_HINT || last > LAST_HINT as i32 {
        return Err(invalid(format!("hints {first_hint}..={last} leave {FIRST_HINT}..={LAST_HINT}")));
    }
    let mut out = Vec::with_capacity(bits.len() * 2 + 1);
    for (i, &bit) in bits.iter().enumerate() {
        out.push(first_hint + i as Value);
        out.push(bit as Value);
    }
    out.push(SEP);
    Ok(out)
}

pub fn decode_prompt(prompt: &[Value]) -> Result<Instance, TaskError> {
    let body = match prompt.split_last() {
        Some((&SEP, body)) if !body.is_empty() && body.len() % 2 == 0 => body,
        _ => return Err(malformed("parity prompt must be hint/bit pairs followed by SEP")),
    };
    let first_hint = body[0];
    let mut bits = Vec::with_capacity(body.len() / 2);
    for (i, pair) in body.chunks(2).enumerate() {
        if pair[0] != first_hint + i as Value || !(0..=1).contains(&pair[1]) {
            return Err(malformed(format!("bad hint/bit pair {pair:?} at {i}")));
        }
        bits.push(pair[1] as u8);
    }
    let inst = Instance::Parity { bits, first_hint };
    if let Instance::Parity { bits, first_hint } = &inst {
        encode(bits, *first_hint).map_err(|e| malformed(e.to_string()))?;
    }
    Ok(inst)
}

/// The last parity symbol before `EoS`, as 0 (even) or 1 (odd).
pub fn decode_answer(completion: &[Value]) -> Result<Answer, TaskError> {
    match completion {
        [.., sym, EOS] if *sym == EVEN => Ok(Answer::Bit(0)),
        [.., sym, EOS] if *sym == ODD => Ok(Answer::Bit(1)),
        _ => Err(malformed("parity completion must end with a parity symbol and EoS")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prompt_round_trip() {
        let p = encode(&[0, 0, 1, 1, 0], 10).unwrap();
        assert_eq!(p, vec![10, 0, 11, 0, 12, 1, 13, 1, 14, 0, -3]);
        assert_eq!(decode_prompt(&p).unwrap(), Instance::Parity { bits: vec![0, 0, 1, 1, 0], first_hint: 10 });
        assert!(encode(&[1; 3], 126).is_err());
        assert!(encode(&[1], 9).is_err());
    }

    #[test]
    fn answer_is_last_symbol() {
        assert_eq!(decode_answer(&[EVEN, 12, ODD, 13, EVEN, EOS]).unwrap(), Answer::Bit(0));
        assert_eq!(decode_answer(&[EVEN, 12, ODD, EOS]).unwrap(), Answer::Bit(1));
        assert!(decode_answer(&[EVEN]).is_err());
    }
}
