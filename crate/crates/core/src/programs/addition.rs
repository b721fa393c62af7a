//! Addition with index hints, answer in reverse or forward digit order.
//!
//! Prompt: `START h_0 a_0 h_1 a_1 ... PLUS h_0 b_0 ... EQUALS`, where `h_d = -100 - d`
//! and both summands are zero-padded to one digit more than the longer of them.
//! The answer is written as hint/digit pairs, least significant first in reverse
//! order, then `END_RESPONSE`.

use crate::error::TaskError;
use crate::ir::{Program, ProgramBuilder, Seq};
use crate::programs::{invalid, malformed, Answer, Instance};
use crate::value::{AggKind, MapFn, Predicate, Value, ZipFn, NONE};

pub const START_PROMPT: Value = -1;
pub const PLUS: Value = -2;
pub const EQUALS_SIGN: Value = -3;
pub const END_RESPONSE: Value = -5;
/// Hint of the most significant (padding) digit; hints decrease from here.
pub const FIRST_HINT: Value = -100;
/// Longest summand the encoder accepts, keeping hints inside 16 bits.
pub const MAX_DIGITS: usize = 1000;

/// Instructions shared by both digit orders.
struct Common {
    seq: Seq,
    pairsums: Seq,
    pairsums_nh: Seq,
    curr_output_digit: Seq,
    curr_pairsum: Seq,
    next_pairsum: Seq,
}

fn common(b: &mut ProgramBuilder) -> Common {
    let seq = b.input("seq");
    let eq = b.full(seq, EQUALS_SIGN);
    let seen_eq = b.has_seen(seq, eq);
    let prompt_mask = b.not(seen_eq);
    let prompt_mask = b.name(prompt_mask, "prompt_mask");
    let second_summand_mask = b.mask_between_tokens(seq, PLUS, EQUALS_SIGN);
    let second_summand_mask = b.name(second_summand_mask, "second_summand_mask");
    let prompt = b.mask(seq, prompt_mask, 0);
    let prompt = b.name(prompt, "prompt");

    let prev = b.shift_right(prompt, 1, 0);
    let other_summand_digit = b.induct(prompt, prev, 1, 0);
    let other_summand_digit = b.name(other_summand_digit, "other_summand_digit");
    let pairsums = b.seq_map(seq, other_summand_digit, ZipFn::AddSafe);
    let pairsums = b.mask(pairsums, second_summand_mask, NONE);
    let pairsums = b.name(pairsums, "pairsums");
    let is_digit = b.cmp_const(seq, Predicate::Ge, 0);
    let pairsums_nh = b.mask(pairsums, is_digit, NONE);
    let pairsums_nh = b.name(pairsums_nh, "pairsums_nh");

    let curr_output_digit = b.shift_right(seq, 1, 0);
    let curr_output_digit = b.name(curr_output_digit, "curr_output_digit");
    let back2 = b.shift_right(seq, 2, 0);
    let curr_pairsum = b.induct(pairsums, back2, 1, 0);
    let curr_pairsum = b.name(curr_pairsum, "curr_pairsum");
    let next_pairsum = b.induct(pairsums, seq, 1, 0);
    let next_pairsum = b.name(next_pairsum, "next_pairsum");
    Common {
        seq,
        pairsums,
        pairsums_nh,
        curr_output_digit,
        curr_pairsum,
        next_pairsum,
    }
}

/// Outputs of the order-specific block.
struct Block {
    next_tok_gets_carry: Seq,
    first_hint: Seq,
    next_hint: Seq,
    eos: Seq,
}

fn finish(mut b: ProgramBuilder, c: &Common, blk: Block) -> Program {
    let seq = c.seq;
    let next_tok = b.add(c.next_pairsum, blk.next_tok_gets_carry);
    let next_tok = b.tok_map(next_tok, MapFn::ModConst(10));
    let next_tok = b.name(next_tok, "next_digit");

    let next_tok_is_index_hint = b.cmp_const(seq, Predicate::Gt, FIRST_HINT);
    let next_tok_is_index_hint = b.name(next_tok_is_index_hint, "next_tok_is_index_hint");
    let eos = b.and(blk.eos, next_tok_is_index_hint);
    let eos = b.name(eos, "eos");

    let next_tok = b.where_(next_tok_is_index_hint, blk.next_hint, next_tok);
    let end = b.full(seq, END_RESPONSE);
    let next_tok = b.where_(eos, end, next_tok);
    let at_eq = b.eq_const(seq, EQUALS_SIGN);
    let next_tok = b.where_(at_eq, blk.first_hint, next_tok);
    let next_tok = b.name(next_tok, "next");
    b.finish(next_tok)
}

/// Answer digits least significant first.
pub fn reverse_program() -> Program {
    let mut b = ProgramBuilder::new("add-rev");
    let c = common(&mut b);

    let direct_carry = b.cmp_const(c.curr_pairsum, Predicate::Gt, 9);
    let nine = b.eq_const(c.curr_pairsum, 9);
    let zero = b.eq_const(c.curr_output_digit, 0);
    let indirect_carry = b.and(nine, zero);
    let next_tok_gets_carry = b.or(direct_carry, indirect_carry);
    let next_tok_gets_carry = b.name(next_tok_gets_carry, "next_tok_gets_carry");

    let final_hint = b.full(c.seq, FIRST_HINT);
    let eq = b.full(c.seq, EQUALS_SIGN);
    let first_hint = b.induct_prev(c.seq, eq, -2, 0);
    let first_hint = b.name(first_hint, "first_hint");
    let prev = b.shift_right(c.seq, 1, 0);
    let next_hint = b.add_const(prev, 1);
    let next_hint = b.name(next_hint, "next_hint");
    let eos = b.cmp(next_hint, Predicate::Gt, final_hint);

    let blk = Block {
        next_tok_gets_carry,
        first_hint,
        next_hint,
        eos,
    };
    finish(b, &c, blk)
}

/// Answer digits most significant first; carries are found by locating carry chains.
pub fn forward_program() -> Program {
    let mut b = ProgramBuilder::new("add-fwd");
    let c = common(&mut b);

    let gives_carry = b.cmp_const(c.pairsums_nh, Predicate::Gt, 9);
    let not_nine = b.cmp_const(c.pairsums_nh, Predicate::Ne, 9);
    let not_none = b.cmp_const(c.pairsums_nh, Predicate::Ne, NONE);
    let breaks_chain = b.and(not_nine, not_none);
    let z = b.cumsum(breaks_chain);
    let z = b.name(z, "z");
    let u = b.mask(z, gives_carry, NONE);
    let v = b.add_const(u, -1);
    let chain_end_idxs = b.firsts(z, v, NONE);
    let chain_end_idxs = b.name(chain_end_idxs, "chain_end_idxs");

    let curr_mod = b.tok_map(c.curr_pairsum, MapFn::ModConst(10));
    let curr_tok_got_carry = b.cmp(curr_mod, Predicate::Ne, c.curr_output_digit);
    let next_nine = b.eq_const(c.next_pairsum, 9);
    let inside_chain = b.and(next_nine, curr_tok_got_carry);
    let inside_chain = b.name(inside_chain, "next_tok_inside_carry_chain");

    let idx = b.indices(c.seq);
    let pos = b.kqv(c.pairsums, c.seq, idx, Predicate::Eq, AggKind::Max, NONE);
    let next_tok_idx = b.add_const(pos, 1);
    let next_tok_idx = b.name(next_tok_idx, "next_tok_idx");
    let one = b.full(c.seq, 1);
    let chain_end = b.kqv(chain_end_idxs, next_tok_idx, one, Predicate::Eq, AggKind::Mean, 0);
    let chain_end = b.name(chain_end, "next_tok_chain_end");
    let next_tok_gets_carry = b.or(inside_chain, chain_end);
    let next_tok_gets_carry = b.name(next_tok_gets_carry, "next_tok_gets_carry");

    let eq = b.full(c.seq, EQUALS_SIGN);
    let final_hint = b.induct_prev(c.seq, eq, -2, 0);
    let final_hint = b.name(final_hint, "final_hint");
    let first_hint = b.full(c.seq, FIRST_HINT);
    let prev = b.shift_right(c.seq, 1, 0);
    let next_hint = b.add_const(prev, -1);
    let next_hint = b.name(next_hint, "next_hint");
    let eos = b.cmp(next_hint, Predicate::Lt, final_hint);

    let blk = Block {
        next_tok_gets_carry,
        first_hint,
        next_hint,
        eos,
    };
    finish(b, &c, blk)
}

fn digits(s: &str) -> Result<Vec<u8>, TaskError> {
    if s.is_empty() || s.len() > MAX_DIGITS || !s.bytes().all(|c| c.is_ascii_digit()) {
        return Err(invalid(format!("`{s}` is not a decimal number of at most {MAX_DIGITS} digits")));
    }
    Ok(s.bytes().map(|c| c - b'0').collect())
}

/// Number of digit positions in the prompt: one more than the longer summand.
pub fn padded_width(a: &str, b: &str) -> usize {
    a.len().max(b.len()) + 1
}

pub fn hint(d: usize) -> Value {
    FIRST_HINT - d as Value
}

fn pad(d: &[u8], width: usize) -> Vec<u8> {
    let mut out = vec![0; width - d.len()];
    out.extend_from_slice(d);
    out
}

pub fn encode(a: &str, b: &str) -> Result<Vec<Value>, TaskError> {
    let (da, db) = (digits(a)?, digits(b)?);
    let w = padded_width(a, b);
    let mut out = vec![START_PROMPT];
    for (sep, d) in [(PLUS, pad(&da, w)), (EQUALS_SIGN, pad(&db, w))] {
        for (i, &digit) in d.iter().enumerate() {
            out.push(hint(i));
            out.push(digit as Value);
        }
        out.push(sep);
    }
    Ok(out)
}

fn strip_zeros(d: &[Value]) -> String {
    let s: String = d.iter().map(|&x| char::from(b'0' + x as u8)).collect();
    let t = s.trim_start_matches('0');
    if t.is_empty() {
        "0".into()
    } else {
        t.into()
    }
}

pub fn decode_prompt(prompt: &[Value]) -> Result<Instance, TaskError> {
    let bad = || malformed("addition prompt must be START hinted-digits PLUS hinted-digits EQUALS");
    let body = prompt.strip_prefix(&[START_PROMPT]).ok_or_else(bad)?;
    let body = body.strip_suffix(&[EQUALS_SIGN]).ok_or_else(bad)?;
    let plus = body.iter().position(|&t| t == PLUS).ok_or_else(bad)?;
    let (a, b) = (&body[..plus], &body[plus + 1..]);
    let read = |part: &[Value]| -> Result<Vec<Value>, TaskError> {
        if part.is_empty() || part.len() % 2 != 0 {
            return Err(bad());
        }
        part.chunks(2)
            .enumerate()
            .map(|(i, p)| if p[0] == hint(i) && (0..=9).contains(&p[1]) { Ok(p[1]) } else { Err(bad()) })
            .collect()
    };
    let (da, db) = (read(a)?, read(b)?);
    if da.len() != db.len() || da[0] != 0 || db[0] != 0 {
        return Err(malformed("summands must have equal padded width and a leading zero"));
    }
    Ok(Instance::Addition { a: strip_zeros(&da), b: strip_zeros(&db) })
}

/// Reassembles the sum from hint/digit pairs, checking the hints.
pub fn decode_answer(completion: &[Value], forward: bool) -> Result<Answer, TaskError> {
    let body = completion
        .strip_suffix(&[END_RESPONSE])
        .ok_or_else(|| malformed("addition answer must end with END_RESPONSE"))?;
    if body.is_empty() || body.len() % 2 != 0 {
        return Err(malformed("addition answer must be hint/digit pairs"));
    }
    let w = body.len() / 2;
    let mut digits = vec![0; w];
    for (k, p) in body.chunks(2).enumerate() {
        let d = if forward { k } else { w - 1 - k };
        if p[0] != hint(d) || !(0..=9).contains(&p[1]) {
            return Err(malformed(format!("unexpected pair {p:?} at answer position {k}")));
        }
        digits[d] = p[1];
    }
    Ok(Answer::Number(strip_zeros(&digits)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prompt_for_88_plus_842() {
        let p = encode("88", "842").unwrap();
        assert_eq!(p, vec![-1, -100, 0, -101, 0, -102, 8, -103, 8, -2, -100, 0, -101, 8, -102, 4, -103, 2, -3]);
        assert_eq!(decode_prompt(&p).unwrap(), Instance::Addition { a: "88".into(), b: "842".into() });
    }

    #[test]
    fn answers_decode_in_both_orders() {
        let rev = [-103, 0, -102, 3, -101, 9, -100, 0, -5];
        let fwd = [-100, 0, -101, 9, -102, 3, -103, 0, -5];
        assert_eq!(decode_answer(&rev, false).unwrap(), Answer::Number("930".into()));
        assert_eq!(decode_answer(&fwd, true).unwrap(), Answer::Number("930".into()));
        assert!(decode_answer(&rev, true).is_err());
    }

    #[test]
    fn rejects_non_digits() {
        assert!(encode("1a", "2").is_err());
        assert!(encode("", "2").is_err());
    }
}
