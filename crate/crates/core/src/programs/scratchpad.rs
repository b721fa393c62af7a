//! Target encoders for the two mode scratchpad formats.
//!
//! These formats have no short next-token program; only their targets are produced,
//! for dataset generation. Letters `a..z`, `A..Z` are token ids `0..52`; counts use
//! their own token range starting at [`COUNT_BASE`] so they never collide with letters.

use std::collections::HashMap;

use crate::value::Value;

/// Token of count `c` is `COUNT_BASE + c`.
pub const COUNT_BASE: Value = 60;

const LETTERS: &str = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Letter for token ids `0..52`.
pub fn letter(t: Value) -> Option<&'static str> {
    usize::try_from(t).ok().filter(|&i| i < LETTERS.len()).map(|i| &LETTERS[i..=i])
}

/// Token id of a letter.
pub fn token_of(letter: char) -> Option<u8> {
    LETTERS.find(letter).map(|i| i as u8)
}

/// Distinct tokens in order of first appearance, with their counts.
fn counts_by_appearance(tokens: &[u8]) -> Vec<(u8, usize)> {
    let mut order: Vec<(u8, usize)> = Vec::new();
    let mut at: HashMap<u8, usize> = HashMap::new();
    for &t in tokens {
        let i = *at.entry(t).or_insert_with(|| {
            order.push((t, 0));
            order.len() - 1
        });
        order[i].1 += 1;
    }
    order
}

fn count_token(c: usize) -> Value {
    COUNT_BASE + c as Value
}

/// Counts in ascending order (ties by first appearance), each followed by its token,
/// then the mode: `2 a 2 c 4 b b`.
pub fn ascending_frequency(tokens: &[u8]) -> Vec<Value> {
    let mut order = counts_by_appearance(tokens);
    order.sort_by_key(|&(_, c)| c);
    let mut out: Vec<Value> = order.iter().flat_map(|&(t, c)| [count_token(c), t as Value]).collect();
    if let Some(&(t, _)) = order.last() {
        out.push(t as Value);
    }
    out
}

/// Tokens in order of appearance, each followed by its count, then the mode:
/// `a 2 b 4 c 2 b`. Ties for the mode go to the first to appear.
pub fn appearance_order(tokens: &[u8]) -> Vec<Value> {
    let order = counts_by_appearance(tokens);
    let mut out: Vec<Value> = order.iter().flat_map(|&(t, c)| [t as Value, count_token(c)]).collect();
    let best = order.iter().map(|&(_, c)| c).max();
    if let Some(&(t, _)) = order.iter().find(|&&(_, c)| Some(c) == best) {
        out.push(t as Value);
    }
    out
}

/// Human-readable rendering: letters for tokens, decimal counts.
pub fn render(seq: &[Value]) -> String {
    seq.iter()
        .map(|&t| {
            if t >= COUNT_BASE {
                (t - COUNT_BASE).to_string()
            } else {
                letter(t).map(String::from).unwrap_or_else(|| t.to_string())
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
