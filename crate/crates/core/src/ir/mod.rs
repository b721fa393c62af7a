//! Straight-line single-assignment program representation.
//!
//! A [`Program`] is a list of [`Instruction`]s, each defining one fresh variable
//! from earlier ones. There is no control flow. The JSON form is the one accepted
//! by the command line's `typecheck` and `analyze` subcommands.

mod analyze;
mod builder;
mod eval;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use analyze::{analyze, ComplexityReport};
pub use builder::{ProgramBuilder, Sel, Seq};
pub use eval::{evaluate, evaluate_reference, trace, Evaluator, Plan, Trace, TraceEntry};

use crate::error::EvalError;
use crate::value::{AggKind, Kind, MapFn, Predicate, Value, ZipFn};

/// Version of the serialized program format.
pub const IR_SCHEMA_VERSION: u32 = 1;

/// Name of a variable; unique within a program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(pub u32);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Op {
    Indices {
        x: VarId,
    },
    Full {
        x: VarId,
        value: Value,
    },
    TokMap {
        x: VarId,
        f: MapFn,
    },
    SeqMap {
        x: VarId,
        y: VarId,
        f: ZipFn,
    },
    Select {
        keys: VarId,
        queries: VarId,
        pred: Predicate,
    },
    Aggregate {
        sel: VarId,
        values: VarId,
        agg: AggKind,
        default: Value,
    },
    Kqv {
        keys: VarId,
        queries: VarId,
        values: VarId,
        pred: Predicate,
        agg: AggKind,
        default: Value,
    },
    SelWidth {
        sel: VarId,
    },
}

impl Op {
    /// Operands that must be sequences.
    pub fn seq_operands(&self) -> Vec<VarId> {
        match *self {
            Op::Indices { x } | Op::Full { x, .. } | Op::TokMap { x, .. } => vec![x],
            Op::SeqMap { x, y, .. } => vec![x, y],
            Op::Select { keys, queries, .. } => vec![keys, queries],
            Op::Aggregate { values, .. } => vec![values],
            Op::Kqv {
                keys, queries, values, ..
            } => vec![keys, queries, values],
            Op::SelWidth { .. } => vec![],
        }
    }

    /// Operands that must be selectors.
    pub fn sel_operands(&self) -> Option<VarId> {
        match *self {
            Op::Aggregate { sel, .. } | Op::SelWidth { sel } => Some(sel),
            _ => None,
        }
    }

    pub fn operands(&self) -> Vec<VarId> {
        let mut ops = self.seq_operands();
        ops.extend(self.sel_operands());
        ops
    }

    pub fn defines_selector(&self) -> bool {
        matches!(self, Op::Select { .. })
    }

    /// Operations that correspond to an attention layer.
    pub fn is_attention(&self) -> bool {
        matches!(
            self,
            Op::Select { .. } | Op::Aggregate { .. } | Op::Kqv { .. } | Op::SelWidth { .. }
        )
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Op::Indices { .. } => "indices",
            Op::Full { .. } => "full",
            Op::TokMap { .. } => "tok_map",
            Op::SeqMap { .. } => "seq_map",
            Op::Select { .. } => "select",
            Op::Aggregate { .. } => "aggregate",
            Op::Kqv { .. } => "kqv",
            Op::SelWidth { .. } => "sel_width",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instruction {
    pub id: VarId,
    #[serde(flatten)]
    pub op: Op,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Input {
    pub id: VarId,
    pub kind: Kind,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Program {
    pub schema_version: u32,
    pub name: String,
    pub inputs: Vec<Input>,
    pub body: Vec<Instruction>,
    pub output: VarId,
}

impl Program {
    /// Checks single assignment, define-before-use, operand categories and the output.
    pub fn validate(&self) -> Result<(), EvalError> {
        let bad = |m: String| Err(EvalError::Malformed(m));
        if self.schema_version != IR_SCHEMA_VERSION {
            return bad(format!("unsupported schema_version {}", self.schema_version));
        }
        if self.inputs.is_empty() {
            return bad("program has no inputs".into());
        }
        let mut seqs = HashSet::new();
        let mut sels = HashSet::new();
        for input in &self.inputs {
            if !seqs.insert(input.id) {
                return bad(format!("{} defined twice", input.id));
            }
        }
        for ins in &self.body {
            for v in ins.op.seq_operands() {
                if !seqs.contains(&v) {
                    return bad(format!("{} uses {v} before it is defined as a sequence", ins.id));
                }
            }
            if let Some(s) = ins.op.sel_operands() {
                if !sels.contains(&s) {
                    return bad(format!("{} uses {s} before it is defined as a selector", ins.id));
                }
            }
            if seqs.contains(&ins.id) || sels.contains(&ins.id) {
                return bad(format!("{} defined twice", ins.id));
            }
            if ins.op.defines_selector() {
                sels.insert(ins.id);
            } else {
                seqs.insert(ins.id);
            }
        }
        if !seqs.contains(&self.output) {
            return bad(format!("output {} is not a sequence variable", self.output));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("programs always serialize")
    }

    /// Parses and validates a serialized program.
    pub fn from_json(s: &str) -> Result<Self, EvalError> {
        let p: Program = serde_json::from_str(s).map_err(|e| EvalError::Malformed(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn instruction(&self, id: VarId) -> Option<&Instruction> {
        self.body.iter().find(|i| i.id == id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Program {
        let mut b = ProgramBuilder::new("tiny");
        let x = b.input("x");
        let i = b.indices(x);
        b.finish(i)
    }

    #[test]
    fn json_round_trip() {
        let p = tiny();
        let back = Program::from_json(&p.to_json()).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn json_shape_is_flat() {
        let v: serde_json::Value = serde_json::from_str(&tiny().to_json()).unwrap();
        let ins = &v["body"][0];
        assert_eq!(ins["op"], "indices");
        assert_eq!(ins["x"], 0);
        assert_eq!(v["schema_version"], 1);
    }

    #[test]
    fn use_before_definition_is_malformed() {
        let mut p = tiny();
        p.body[0].op = Op::Indices { x: VarId(7) };
        assert!(matches!(p.validate(), Err(EvalError::Malformed(_))));
    }

    #[test]
    fn selector_cannot_be_output() {
        let mut b = ProgramBuilder::new("sel");
        let x = b.input("x");
        let s = b.select(x, x, Predicate::Eq);
        let w = b.sel_width(s);
        let mut p = b.finish(w);
        p.output = p.body[0].id;
        assert!(p.validate().is_err());
    }
}
