//! Random instance samplers.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::programs::{copy, count, mode, parity, sort};
use crate::value::Value;

/// How addition summands are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CarryMode {
    /// Both summand lengths drawn independently; the longer one has the target length.
    Independent,
    /// Carry-chain length uniform in `[0, length]`.
    Balanced,
    /// Carry chain through every digit.
    Hard,
}

impl std::str::FromStr for CarryMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "independent" => Ok(CarryMode::Independent),
            "balanced" => Ok(CarryMode::Balanced),
            "hard" => Ok(CarryMode::Hard),
            _ => Err(format!("unknown carry mode `{s}` (independent, balanced, hard)")),
        }
    }
}

impl std::fmt::Display for CarryMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CarryMode::Independent => "independent",
            CarryMode::Balanced => "balanced",
            CarryMode::Hard => "hard",
        })
    }
}

/// Count instance whose output has `len` numbers.
pub fn count_range<R: Rng>(rng: &mut R, len: usize) -> (u16, u16) {
    let a = rng.random_range(0..=count::ALPHABET - len as u16);
    (a, a + len as u16 - 1)
}

/// `len` distinct tokens from `0..alphabet`, in random order.
pub fn distinct<R: Rng>(rng: &mut R, len: usize, alphabet: u8) -> Vec<u8> {
    let mut all: Vec<u8> = (0..alphabet).collect();
    let (picked, _) = all.partial_shuffle(rng, len);
    picked.to_vec()
}

pub fn copy_tokens<R: Rng>(rng: &mut R, len: usize) -> Vec<u8> {
    distinct(rng, len, copy::ALPHABET)
}

pub fn sort_tokens<R: Rng>(rng: &mut R, len: usize) -> Vec<u8> {
    distinct(rng, len, sort::ALPHABET)
}

/// Tokens `0..alphabet` with repeats allowed.
pub fn with_repeats<R: Rng>(rng: &mut R, len: usize, alphabet: u8) -> Vec<u8> {
    (0..len).map(|_| rng.random_range(0..alphabet)).collect()
}

/// Mode instance: `len` draws from 5 random distinct tokens, then tie repair.
///
/// While several tokens share the top count, one occurrence of a tied token is
/// changed into another tied token. Returns the tokens and the number of repairs.
pub fn mode_tokens<R: Rng>(rng: &mut R, len: usize) -> (Vec<u8>, usize) {
    let pool = distinct(rng, 5, mode::ALPHABET);
    let mut tokens: Vec<u8> = (0..len).map(|_| *pool.choose(rng).expect("pool is non-empty")).collect();
    let mut repairs = 0;
    loop {
        let mut counts = [0usize; mode::ALPHABET as usize];
        for &t in &tokens {
            counts[t as usize] += 1;
        }
        let best = *counts.iter().max().expect("non-empty");
        let tied: Vec<u8> = pool.iter().copied().filter(|&t| counts[t as usize] == best).collect();
        if tied.len() < 2 {
            return (tokens, repairs);
        }
        let from = *tied.choose(rng).expect("tied");
        let to = *tied.iter().filter(|&&t| t != from).collect::<Vec<_>>().choose(rng).expect("two tied");
        let spots: Vec<usize> = (0..len).filter(|&i| tokens[i] == from).collect();
        tokens[*spots.choose(rng).expect("tied token occurs")] = *to;
        repairs += 1;
    }
}

pub fn bits<R: Rng>(rng: &mut R, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random_range(0..=1)).collect()
}

/// First hint of a random contiguous slice of the hint block.
pub fn parity_first_hint<R: Rng>(rng: &mut R, len: usize) -> Value {
    let last_start = parity::LAST_HINT - len as Value + 1;
    rng.random_range(parity::FIRST_HINT..=last_start)
}

/// Boolean-AND bits: all ones half the time, otherwise a single zero or random bits.
pub fn and_bits<R: Rng>(rng: &mut R, len: usize) -> Vec<u8> {
    match rng.random_range(0..4) {
        0 | 1 => vec![1; len],
        2 => {
            let mut b = vec![1; len];
            b[rng.random_range(0..len)] = 0;
            b
        }
        _ => bits(rng, len),
    }
}

/// Random number with exactly `len` digits, as digits most significant first.
fn number<R: Rng>(rng: &mut R, len: usize) -> Vec<u8> {
    (0..len)
        .map(|i| if i == 0 && len > 1 { rng.random_range(1..=9) } else { rng.random_range(0..=9) })
        .collect()
}

fn to_string(d: &[u8]) -> String {
    let s: String = d.iter().map(|&x| char::from(b'0' + x)).collect();
    let t = s.trim_start_matches('0');
    if t.is_empty() { "0".into() } else { t.into() }
}

/// Summands of which the longer has exactly `len` digits.
pub fn independent_summands<R: Rng>(rng: &mut R, len: usize) -> (String, String) {
    let other = rng.random_range(1..=len);
    let (la, lb) = if rng.random_bool(0.5) { (len, other) } else { (other, len) };
    (to_string(&number(rng, la)), to_string(&number(rng, lb)))
}

/// Summands realizing a carry chain of exactly `chain` digits starting at digit `start`
/// (counted from the least significant digit). The first summand has `len` digits.
pub fn summands_with_chain<R: Rng>(rng: &mut R, len: usize, chain: usize, start: usize) -> (String, String) {
    assert!(chain <= len && (chain == 0 || start + chain <= len));
    // digits least significant first
    let mut a: Vec<u8> = number(rng, len).into_iter().rev().collect();
    let mut b = vec![0u8; len];
    let top = len - 1;
    for i in 0..len {
        let lo = if i == top && len > 1 { 1 } else { 0 };
        if chain > 0 && i == start {
            a[i] = a[i].max(1);
            b[i] = rng.random_range(10 - a[i]..=9);
        } else if chain > 0 && i > start && i < start + chain {
            b[i] = rng.random_range(9 - a[i]..=9);
        } else if chain > 0 && i == start + chain {
            a[i] = a[i].clamp(lo, 8);
            b[i] = rng.random_range(0..=8 - a[i]);
        } else {
            b[i] = rng.random_range(0..=9 - a[i]);
        }
    }
    a.reverse();
    b.reverse();
    (to_string(&a), to_string(&b))
}

/// Carry-chain length uniform in `[0, len]`, placed uniformly among valid segments.
pub fn balanced_carry_sampler<R: Rng>(rng: &mut R, len: usize) -> (String, String) {
    let chain = rng.random_range(0..=len);
    let start = if chain == 0 { 0 } else { rng.random_range(0..=len - chain) };
    summands_with_chain(rng, len, chain, start)
}

/// A carry generated at the last digit that runs through every digit.
pub fn hard_carry_summands<R: Rng>(rng: &mut R, len: usize) -> (String, String) {
    summands_with_chain(rng, len, len, 0)
}

pub fn summands<R: Rng>(rng: &mut R, len: usize, mode: CarryMode) -> (String, String) {
    match mode {
        CarryMode::Independent => independent_summands(rng, len),
        CarryMode::Balanced => balanced_carry_sampler(rng, len),
        CarryMode::Hard => hard_carry_summands(rng, len),
    }
}

/// Longest run of consecutive digit positions that emit a carry, by schoolbook addition.
pub fn longest_carry_chain(a: &str, b: &str) -> usize {
    let w = a.len().max(b.len());
    let digit = |s: &str, i: usize| -> u32 { s.as_bytes().iter().rev().nth(i).map_or(0, |c| u32::from(c - b'0')) };
    let (mut carry, mut run, mut best) = (0, 0, 0);
    for i in 0..w {
        let s = digit(a, i) + digit(b, i) + carry;
        carry = u32::from(s >= 10);
        run = if carry == 1 { run + 1 } else { 0 };
        best = best.max(run);
    }
    best
}
