//! Whole-sequence semantics of the core operations.
//!
//! These functions materialize selectors and are the reference semantics. The
//! program evaluator shares the row kernels below but never builds an n×n matrix.

use serde::{Deserialize, Serialize};

use crate::error::OpError;
use crate::typesys::rules;
use crate::value::{narrow, AggKind, FamilyId, Kind, MapFn, Predicate, Value, ValueSeq, ZipFn};

/// Causal boolean attention pattern: `rows[i]` lists the selected keys `j <= i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selector {
    rows: Vec<Vec<usize>>,
}

impl Selector {
    /// Builds a selector, dropping nothing: every `j` must satisfy `j <= i`.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self, OpError> {
        if rows.is_empty() {
            return Err(OpError::EmptySequence);
        }
        for (i, row) in rows.iter().enumerate() {
            if let Some(&j) = row.iter().find(|&&j| j > i) {
                return Err(OpError::Malformed(format!("row {i} selects future key {j}")));
            }
        }
        Ok(Self { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn is_causal(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r.iter().all(|&j| j <= i))
    }
}

fn same_len(a: usize, b: usize) -> Result<(), OpError> {
    if a == b {
        Ok(())
    } else {
        Err(OpError::LengthMismatch { left: a, right: b })
    }
}

/// `rows[i] = { j <= i : pred(keys[j], queries[i]) }`.
pub fn select(keys: &ValueSeq, queries: &ValueSeq, pred: Predicate) -> Result<Selector, OpError> {
    same_len(keys.len(), queries.len())?;
    rules::select(keys.kind(), queries.kind(), pred)?;
    let k = keys.values();
    let rows = queries
        .values()
        .iter()
        .enumerate()
        .map(|(i, &q)| (0..=i).filter(|&j| pred.holds(k[j], q)).collect())
        .collect();
    Ok(Selector { rows })
}

/// Reduces the selected values of every row; empty rows take `default`.
pub fn aggregate(sel: &Selector, v: &ValueSeq, agg: AggKind, default: Value) -> Result<ValueSeq, OpError> {
    same_len(sel.len(), v.len())?;
    let kind = rules::aggregate(agg, v.kind())?;
    let vals = v.values();
    let out = sel
        .rows()
        .iter()
        .map(|row| {
            if row.is_empty() {
                return Ok(default);
            }
            let picked = row.iter().map(|&j| vals[j] as i32);
            let r = match agg {
                AggKind::Min => picked.min().unwrap_or_default(),
                AggKind::Max => picked.max().unwrap_or_default(),
                AggKind::Mean => mean_round(picked.sum(), row.len() as i32),
            };
            narrow(r)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ValueSeq::from_parts(out, kind))
}

/// `aggregate(select(keys, queries, pred), values, agg, default)`.
pub fn kqv(
    keys: &ValueSeq,
    queries: &ValueSeq,
    values: &ValueSeq,
    pred: Predicate,
    agg: AggKind,
    default: Value,
) -> Result<ValueSeq, OpError> {
    let sel = select(keys, queries, pred)?;
    aggregate(&sel, values, agg, default)
}

/// Number of selected keys per row, as a sequence of a fresh width family.
pub fn sel_width(sel: &Selector, family: FamilyId) -> ValueSeq {
    let out = sel.rows().iter().map(|r| r.len() as Value).collect();
    ValueSeq::from_parts(out, Kind::Width(family))
}

pub fn tok_map(x: &ValueSeq, f: MapFn) -> Result<ValueSeq, OpError> {
    let kind = rules::map(f, x.kind())?;
    let out = x.values().iter().map(|&v| f.apply(v)).collect::<Result<Vec<_>, _>>()?;
    Ok(ValueSeq::from_parts(out, kind))
}

pub fn seq_map(x: &ValueSeq, y: &ValueSeq, f: ZipFn) -> Result<ValueSeq, OpError> {
    same_len(x.len(), y.len())?;
    let kind = rules::zip(f, x.kind(), y.kind())?;
    let out = x
        .values()
        .iter()
        .zip(y.values())
        .map(|(&a, &b)| f.apply(a, b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ValueSeq::from_parts(out, kind))
}

pub fn indices(x: &ValueSeq) -> ValueSeq {
    ValueSeq::from_parts((0..x.len()).map(|i| i as Value).collect(), Kind::Index)
}

pub fn full(x: &ValueSeq, c: Value) -> ValueSeq {
    ValueSeq::from_parts(vec![c; x.len()], Kind::Token)
}

/// Arithmetic mean rounded half away from zero.
pub fn mean_round(sum: i32, count: i32) -> i32 {
    debug_assert!(count > 0);
    let mag = (2 * sum.abs() + count) / (2 * count);
    if sum < 0 {
        -mag
    } else {
        mag
    }
}

/// Result of reducing one attention row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct RowReduce {
    pub count: u32,
    /// Sum for `Mean`, extremum for `Min`/`Max`. Meaningless when `count == 0`.
    pub acc: i32,
}

#[inline(always)]
fn reduce_with<F: Fn(Value) -> bool>(keys: &[Value], vals: &[Value], hit: F, agg: AggKind) -> RowReduce {
    let mut count = 0u32;
    match agg {
        AggKind::Mean => {
            let mut sum = 0i32;
            for (&k, &v) in keys.iter().zip(vals) {
                let h = hit(k);
                count += h as u32;
                sum += if h { v as i32 } else { 0 };
            }
            RowReduce { count, acc: sum }
        }
        AggKind::Min => {
            let mut m = Value::MAX;
            for (&k, &v) in keys.iter().zip(vals) {
                let h = hit(k);
                count += h as u32;
                m = m.min(if h { v } else { Value::MAX });
            }
            RowReduce { count, acc: m as i32 }
        }
        AggKind::Max => {
            let mut m = Value::MIN;
            for (&k, &v) in keys.iter().zip(vals) {
                let h = hit(k);
                count += h as u32;
                m = m.max(if h { v } else { Value::MIN });
            }
            RowReduce { count, acc: m as i32 }
        }
    }
}

/// Reduces `vals[j]` over the keys `j` with `pred(keys[j], q)`.
#[inline]
pub(crate) fn reduce_row(keys: &[Value], vals: &[Value], q: Value, pred: Predicate, agg: AggKind) -> RowReduce {
    match pred {
        Predicate::Eq => reduce_with(keys, vals, |k| k == q, agg),
        Predicate::Ne => reduce_with(keys, vals, |k| k != q, agg),
        Predicate::Lt => reduce_with(keys, vals, |k| k < q, agg),
        Predicate::Le => reduce_with(keys, vals, |k| k <= q, agg),
        Predicate::Gt => reduce_with(keys, vals, |k| k > q, agg),
        Predicate::Ge => reduce_with(keys, vals, |k| k >= q, agg),
        Predicate::True => reduce_with(keys, vals, |_| true, agg),
        Predicate::False => RowReduce { count: 0, acc: 0 },
    }
}

#[inline(always)]
fn count_with<F: Fn(Value) -> bool>(keys: &[Value], hit: F) -> u32 {
    keys.iter().map(|&k| hit(k) as u32).sum()
}

#[inline]
pub(crate) fn count_row(keys: &[Value], q: Value, pred: Predicate) -> u32 {
    match pred {
        Predicate::Eq => count_with(keys, |k| k == q),
        Predicate::Ne => count_with(keys, |k| k != q),
        Predicate::Lt => count_with(keys, |k| k < q),
        Predicate::Le => count_with(keys, |k| k <= q),
        Predicate::Gt => count_with(keys, |k| k > q),
        Predicate::Ge => count_with(keys, |k| k >= q),
        Predicate::True => keys.len() as u32,
        Predicate::False => 0,
    }
}

/// Outcome of comparing the hard-attention max construction with `kqv`-Max.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttentionCheck {
    /// True iff every nonempty row agrees.
    pub agrees: bool,
    /// Rows where the predicate selects nothing; excluded from the comparison.
    pub empty_rows: Vec<usize>,
    /// Rows where the two sides differ.
    pub mismatched_rows: Vec<usize>,
}

/// Rebuilds max aggregation as one hard-attention layer and compares it with `kqv`-Max.
///
/// Values are identified with ranks `1..=|V|` in sorted order. The pre-softmax score
/// is `rank(v[j]) + 2|V| * pred(k[j], q[i])`; the zero-temperature softmax attends to
/// the highest causal score, ties going to the largest `j`.
pub fn max_aggregation_attention_check(
    keys: &ValueSeq,
    queries: &ValueSeq,
    values: &ValueSeq,
    pred: Predicate,
) -> Result<AttentionCheck, OpError> {
    let n = values.len();
    same_len(keys.len(), n)?;
    same_len(queries.len(), n)?;
    let mut alphabet: Vec<Value> = values.values().to_vec();
    alphabet.sort_unstable();
    alphabet.dedup();
    let size = alphabet.len() as f64;
    let rank = |v: Value| (alphabet.binary_search(&v).expect("value in alphabet") + 1) as f64;

    let reference = kqv(keys, queries, values, pred, AggKind::Max, 0)?;
    let (k, q, v) = (keys.values(), queries.values(), values.values());
    let mut empty_rows = Vec::new();
    let mut mismatched_rows = Vec::new();
    for i in 0..n {
        let mut best = (f64::NEG_INFINITY, 0usize);
        let mut any = false;
        for j in 0..=i {
            let m = pred.holds(k[j], q[i]);
            any |= m;
            let score = rank(v[j]) + 2.0 * size * f64::from(u8::from(m));
            if score >= best.0 {
                best = (score, j);
            }
        }
        if !any {
            empty_rows.push(i);
        } else if v[best.1] != reference.values()[i] {
            mismatched_rows.push(i);
        }
    }
    Ok(AttentionCheck {
        agrees: mismatched_rows.is_empty(),
        empty_rows,
        mismatched_rows,
    })
}
