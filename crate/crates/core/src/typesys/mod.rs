//! Static kind checking of programs.
//!
//! Index-like values (positions and `sel_width` counts) support only successor,
//! predecessor and comparison with the same kind. Mean aggregation is restricted
//! to tokens. There are no casts between tokens and indices.

pub mod rules;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{KindViolation, TypeErrorCode};
use crate::ir::{Op, Program, ProgramBuilder, VarId};
use crate::value::{FamilyId, Kind, MapFn, ZipFn};

/// A kind violation located at one instruction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeError {
    pub code: TypeErrorCode,
    pub site: VarId,
    pub message: String,
}

fn infer(p: &Program) -> (HashMap<VarId, Kind>, Vec<TypeError>) {
    let mut kinds: HashMap<VarId, Kind> = p.inputs.iter().map(|i| (i.id, i.kind)).collect();
    let mut sels: HashMap<VarId, ()> = HashMap::new();
    let mut errors = Vec::new();
    for ins in &p.body {
        let k = |v: &VarId| kinds.get(v).copied().unwrap_or(Kind::Token);
        let result: Result<Option<Kind>, KindViolation> = match &ins.op {
            Op::Indices { .. } => Ok(Some(Kind::Index)),
            Op::Full { .. } => Ok(Some(Kind::Token)),
            Op::TokMap { x, f } => rules::map(*f, k(x)).map(Some),
            Op::SeqMap { x, y, f } => rules::zip(*f, k(x), k(y)).map(Some),
            Op::Select { keys, queries, pred } => rules::select(k(keys), k(queries), *pred).map(|()| None),
            Op::Aggregate { values, agg, .. } => rules::aggregate(*agg, k(values)).map(Some),
            Op::Kqv { keys, queries, values, pred, agg, .. } => rules::select(k(keys), k(queries), *pred)
                .and_then(|()| rules::aggregate(*agg, k(values)))
                .map(Some),
            Op::SelWidth { .. } => Ok(Some(Kind::Width(FamilyId(ins.id.0)))),
        };
        match result {
            Ok(Some(kind)) => {
                kinds.insert(ins.id, kind);
            }
            Ok(None) => {
                sels.insert(ins.id, ());
            }
            Err(v) => {
                errors.push(TypeError { code: v.code, site: ins.id, message: v.message });
                if !ins.op.defines_selector() {
                    kinds.insert(ins.id, Kind::Token);
                }
            }
        }
    }
    (kinds, errors)
}

/// All kind violations of a program, in instruction order. Empty iff the program is legal.
///
/// Never evaluates anything, so the result does not depend on sequence length.
pub fn check_program(p: &Program) -> Vec<TypeError> {
    infer(p).1
}

/// Kind of every sequence variable; variables with errors are read as tokens.
pub fn infer_kinds(p: &Program) -> HashMap<VarId, Kind> {
    infer(p).0
}

/// An intentionally illegal program together with the error it must produce.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub program: Program,
    pub expected: TypeErrorCode,
}

/// The steps of a naive index-arithmetic addition program that are illegal here.
pub fn illegal_addition_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();

    // Locating the middle of the prompt by halving a position.
    let mut b = ProgramBuilder::new("i div 2");
    let x = b.input("seq");
    let i = b.indices(x);
    let half = b.tok_map(i, MapFn::DivConst(2));
    let half = b.name(half, "half");
    out.push(Fixture {
        name: "i div 2".into(),
        program: b.finish(half),
        expected: TypeErrorCode::IndexArithmetic,
    });

    // Reading a digit of the answer off a position.
    let mut b = ProgramBuilder::new("cast index to token");
    let x = b.input("seq");
    let i = b.indices(x);
    let t = b.tok_map(i, MapFn::ToToken);
    let digit = b.tok_map(t, MapFn::ModConst(10));
    out.push(Fixture {
        name: "cast index to token".into(),
        program: b.finish(digit),
        expected: TypeErrorCode::IllegalCast,
    });

    // Computing the position of the aligned summand digit.
    let mut b = ProgramBuilder::new("index + index");
    let x = b.input("seq");
    let i = b.indices(x);
    let offset = b.length(x);
    let other = b.seq_map(i, offset, ZipFn::Add);
    let summand = b.index_select(x, other, 0);
    out.push(Fixture {
        name: "index + index".into(),
        program: b.finish(summand),
        expected: TypeErrorCode::IndexArithmetic,
    });

    // Averaging positions to find a midpoint.
    let mut b = ProgramBuilder::new("mean of indices");
    let x = b.input("seq");
    let i = b.indices(x);
    let t = b.full(x, 1);
    let mid = b.kqv(t, t, i, crate::Predicate::True, crate::AggKind::Mean, 0);
    out.push(Fixture {
        name: "mean of indices".into(),
        program: b.finish(mid),
        expected: TypeErrorCode::MeanOnIndex,
    });

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{AggKind, Predicate};

    #[test]
    fn fixtures_produce_expected_codes() {
        let fixtures = illegal_addition_fixtures();
        assert!(fixtures.len() >= 3);
        for f in fixtures {
            let errs = check_program(&f.program);
            assert!(errs.iter().any(|e| e.code == f.expected), "{}: {errs:?}", f.name);
        }
    }

    #[test]
    fn boolean_and_is_clean() {
        let mut b = ProgramBuilder::new("and");
        let x = b.input("x");
        let z = b.full(x, 0);
        let out = b.kqv(x, z, z, Predicate::Eq, AggKind::Mean, 1);
        assert!(check_program(&b.finish(out)).is_empty());
    }

    #[test]
    fn distinct_widths_do_not_compare() {
        let mut b = ProgramBuilder::new("widths");
        let x = b.input("x");
        let s1 = b.select(x, x, Predicate::Eq);
        let w1 = b.sel_width(s1);
        let s2 = b.select(x, x, Predicate::Eq);
        let w2 = b.sel_width(s2);
        let c = b.seq_map(w1, w2, ZipFn::Cmp(Predicate::Eq));
        let p = b.finish(c);
        let errs = check_program(&p);
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].code, TypeErrorCode::CrossFamilyComparison);
        assert_eq!(errs[0].site, c.id());
    }

    #[test]
    fn index_plus_index_is_flagged() {
        let mut b = ProgramBuilder::new("ii");
        let x = b.input("x");
        let i = b.indices(x);
        let s = b.seq_map(i, i, ZipFn::Add);
        let errs = check_program(&b.finish(s));
        assert_eq!(errs.iter().map(|e| e.code).collect::<Vec<_>>(), vec![TypeErrorCode::IndexArithmetic]);
    }
}
