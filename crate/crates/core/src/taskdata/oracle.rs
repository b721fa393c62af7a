//! Ground-truth completions computed directly from instances.

use num_bigint::BigUint;

use crate::error::TaskError;
use crate::programs::{addition, copy, count, mode, parity, sort, Instance, Task};
use crate::value::Value;

/// Expected completion (everything after the prompt) for `inst` under `task`.
pub fn oracle(task: Task, inst: &Instance) -> Result<Vec<Value>, TaskError> {
    let bad = || TaskError::InvalidInstance(format!("{inst:?} is not a {task} instance"));
    // validates the instance the same way the encoder does
    crate::programs::encode_prompt(task, inst)?;
    Ok(match (task, inst) {
        (Task::Count, Instance::Count { a, b }) => (*a..=*b).map(|v| v as Value).chain([count::EOS]).collect(),
        (Task::Mode, Instance::Mode { tokens }) => vec![unique_mode(tokens)? as Value, mode::EOS],
        (Task::CopyUnique, Instance::CopyUnique { tokens }) => {
            tokens.iter().map(|&t| t as Value).chain([copy::EOS]).collect()
        }
        (Task::Sort, Instance::Sort { tokens }) => {
            let mut s: Vec<Value> = tokens.iter().map(|&t| t as Value).collect();
            s.sort_unstable();
            s.push(sort::EOS);
            s
        }
        (Task::AddRev | Task::AddFwd, Instance::Addition { a, b }) => addition_target(a, b, task == Task::AddFwd),
        (Task::ParityScratchpad, Instance::Parity { bits, first_hint }) => parity_target(bits, *first_hint),
        (Task::BoolAnd, Instance::BoolAnd { bits }) => vec![Value::from(bits.iter().all(|&b| b == 1))],
        _ => return Err(bad()),
    })
}

/// Most frequent token; errors on a tie.
pub fn unique_mode(tokens: &[u8]) -> Result<u8, TaskError> {
    let mut counts = [0usize; 256];
    for &t in tokens {
        counts[t as usize] += 1;
    }
    let best = *counts.iter().max().unwrap_or(&0);
    let winners: Vec<usize> = (0..256).filter(|&t| counts[t] == best && best > 0).collect();
    match winners.as_slice() {
        [t] => Ok(*t as u8),
        _ => Err(TaskError::InvalidInstance(format!("mode is not unique among {winners:?}"))),
    }
}

/// Decimal sum by big-integer arithmetic.
pub fn sum(a: &str, b: &str) -> Result<String, TaskError> {
    let parse = |s: &str| {
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| TaskError::InvalidInstance(format!("bad number `{s}`")))
    };
    Ok((parse(a)? + parse(b)?).to_str_radix(10))
}

fn addition_target(a: &str, b: &str, forward: bool) -> Vec<Value> {
    let total = sum(a, b).expect("encoder validated the summands");
    let w = addition::padded_width(a, b);
    let digits: Vec<u8> = format!("{total:0>w$}").bytes().map(|c| c - b'0').collect();
    debug_assert_eq!(digits.len(), w);
    let order: Box<dyn Iterator<Item = usize>> = if forward { Box::new(0..w) } else { Box::new((0..w).rev()) };
    order
        .flat_map(|d| [addition::hint(d), digits[d] as Value])
        .chain([addition::END_RESPONSE])
        .collect()
}

fn parity_target(bits: &[u8], first_hint: Value) -> Vec<Value> {
    let mut out = vec![parity::EVEN];
    let mut odd = false;
    for (i, &bit) in bits.iter().enumerate() {
        if bit == 1 {
            odd = !odd;
            out.push(first_hint + i as Value);
            out.push(if odd { parity::ODD } else { parity::EVEN });
        }
    }
    out.push(parity::EOS);
    out
}

/// XOR of all bits.
pub fn parity_of(bits: &[u8]) -> u8 {
    bits.iter().fold(0, |acc, &b| acc ^ b)
}
