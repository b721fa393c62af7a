//! Library helpers, written as builder methods so every call emits checkable IR.

use crate::ir::{ProgramBuilder, Seq};
use crate::value::{AggKind, MapFn, Predicate, Value, ZipFn, NONE};

impl ProgramBuilder {
    /// Aggregation used to fetch a single selected value without changing its kind.
    fn fetch_agg(&self, v: Seq) -> AggKind {
        if self.kind_of(v).is_index_like() {
            AggKind::Max
        } else {
            AggKind::Mean
        }
    }

    pub fn add_const(&mut self, x: Seq, c: i16) -> Seq {
        self.tok_map(x, MapFn::AddConst(c))
    }

    /// `x OP c` as 0/1 tokens.
    pub fn cmp_const(&mut self, x: Seq, pred: Predicate, c: i16) -> Seq {
        self.tok_map(x, MapFn::Cmp { pred, rhs: c })
    }

    pub fn eq_const(&mut self, x: Seq, c: i16) -> Seq {
        self.cmp_const(x, Predicate::Eq, c)
    }

    /// `x OP y` as 0/1 tokens.
    pub fn cmp(&mut self, x: Seq, pred: Predicate, y: Seq) -> Seq {
        self.seq_map(x, y, ZipFn::Cmp(pred))
    }

    pub fn not(&mut self, x: Seq) -> Seq {
        self.tok_map(x, MapFn::Not)
    }

    pub fn and(&mut self, x: Seq, y: Seq) -> Seq {
        self.seq_map(x, y, ZipFn::And)
    }

    pub fn or(&mut self, x: Seq, y: Seq) -> Seq {
        self.seq_map(x, y, ZipFn::Or)
    }

    pub fn add(&mut self, x: Seq, y: Seq) -> Seq {
        self.seq_map(x, y, ZipFn::Add)
    }

    /// `out[i] = x[i - n]`, or `default` for `i < n`.
    pub fn shift_right(&mut self, x: Seq, n: u8, default: Value) -> Seq {
        let idx = self.indices(x);
        let mut shifted = idx;
        for _ in 0..n {
            shifted = self.add_const(shifted, 1);
        }
        let agg = self.fetch_agg(x);
        self.kqv(shifted, idx, x, Predicate::Eq, agg, default)
    }

    /// `a` where `cond` is nonzero, else `b`. Token operands only.
    pub fn where_(&mut self, cond: Seq, a: Seq, b: Seq) -> Seq {
        let keep = self.seq_map(a, cond, ZipFn::Gate { fill: 0 });
        let other = self.seq_map(b, cond, ZipFn::GateNot { fill: 0 });
        self.add(keep, other)
    }

    /// `x` where `bools` is nonzero, else `val`. Keeps the kind of `x`.
    pub fn mask(&mut self, x: Seq, bools: Seq, val: Value) -> Seq {
        self.seq_map(x, bools, ZipFn::Gate { fill: val })
    }

    /// 1 iff some `x[j]`, `j <= i`, equals `queries[i]`.
    pub fn has_seen(&mut self, x: Seq, queries: Seq) -> Seq {
        let one = self.full(x, 1);
        self.kqv(x, queries, one, Predicate::Eq, AggKind::Mean, 0)
    }

    /// Earliest position `j <= i` with `x[j] == queries[i]`, or `default`.
    pub fn firsts(&mut self, x: Seq, queries: Seq, default: Value) -> Seq {
        let idx = self.indices(x);
        self.kqv(x, queries, idx, Predicate::Eq, AggKind::Min, default)
    }

    /// `x[idx[i]]` when `0 <= idx[i] <= i`, else `default`.
    pub fn index_select(&mut self, x: Seq, idx: Seq, default: Value) -> Seq {
        let positions = self.indices(x);
        let agg = self.fetch_agg(x);
        self.kqv(positions, idx, x, Predicate::Eq, agg, default)
    }

    /// Induction head: `k[j + offset]` for the earliest `j` with `k[j] == q[i]`
    /// and `j + offset <= i`, else `default`.
    ///
    /// Tokens equal to [`NONE`] must not occur in `q`; it fills the shifted keys.
    pub fn induct(&mut self, k: Seq, q: Seq, offset: u8, default: Value) -> Seq {
        let shifted = self.shift_right(k, offset, NONE);
        let target = self.firsts(shifted, q, NONE);
        self.index_select(k, target, default)
    }

    /// `k[j + offset]` for the earliest `j` with `k[j] == q[i]`, with `offset < 0`.
    pub fn induct_prev(&mut self, k: Seq, q: Seq, offset: i8, default: Value) -> Seq {
        debug_assert!(offset <= 0, "induct_prev looks backwards");
        let mut target = self.firsts(k, q, NONE);
        for _ in 0..offset.unsigned_abs() {
            target = self.add_const(target, -1);
        }
        self.index_select(k, target, default)
    }

    /// Running count of ones in a 0/1 sequence, as a fresh width family.
    pub fn cumsum(&mut self, bools: Seq) -> Seq {
        let one = self.full(bools, 1);
        let sel = self.select(bools, one, Predicate::Eq);
        self.sel_width(sel)
    }

    /// 1 iff `tok0` has been seen at or before `i` and `tok1` has not.
    pub fn mask_between_tokens(&mut self, seq: Seq, tok0: Value, tok1: Value) -> Seq {
        let q0 = self.full(seq, tok0);
        let seen0 = self.has_seen(seq, q0);
        let q1 = self.full(seq, tok1);
        let seen1 = self.has_seen(seq, q1);
        self.seq_map(seen0, seen1, ZipFn::AndNot)
    }

    pub fn prefix_max(&mut self, x: Seq) -> Seq {
        self.kqv(x, x, x, Predicate::True, AggKind::Max, 0)
    }

    /// Number of positions so far, as a fresh width family.
    pub fn length(&mut self, x: Seq) -> Seq {
        let sel = self.select(x, x, Predicate::True);
        self.sel_width(sel)
    }
}
