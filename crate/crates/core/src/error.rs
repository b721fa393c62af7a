use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ir::VarId;

/// Category of a kind-rule violation, shared by the static checker and the runtime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeErrorCode {
    IndexArithmetic,
    CrossFamilyComparison,
    IllegalCast,
    MeanOnIndex,
    LengthMismatch,
}

impl std::fmt::Display for TypeErrorCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TypeErrorCode::IndexArithmetic => "IndexArithmetic",
            TypeErrorCode::CrossFamilyComparison => "CrossFamilyComparison",
            TypeErrorCode::IllegalCast => "IllegalCast",
            TypeErrorCode::MeanOnIndex => "MeanOnIndex",
            TypeErrorCode::LengthMismatch => "LengthMismatch",
        };
        f.write_str(s)
    }
}

/// A kind rule violation with a human-readable explanation.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{code}: {message}")]
pub struct KindViolation {
    pub code: TypeErrorCode,
    pub message: String,
}

impl KindViolation {
    pub fn new(code: TypeErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

/// Errors raised by the core sequence operations.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("sequences must be non-empty")]
    EmptySequence,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("value {value} does not fit in 16 bits")]
    Overflow { value: i32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed selector: {0}")]
    Malformed(String),
    #[error(transparent)]
    Kind(#[from] KindViolation),
}

/// Errors raised while validating or evaluating a program.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("instruction {site}: {source}")]
    Op {
        site: VarId,
        #[source]
        source: OpError,
    },
    #[error("program expects {expected} inputs, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("input {index} has kind {got}, program declares {expected}")]
    InputKind {
        index: usize,
        expected: crate::Kind,
        got: crate::Kind,
    },
    #[error("inputs have different lengths")]
    InputLength,
    #[error("malformed program: {0}")]
    Malformed(String),
}

/// Errors raised by task encoders and decoders.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TaskError {
    #[error("unknown task `{0}`")]
    UnknownTask(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("malformed sequence: {0}")]
    Malformed(String),
    #[error("generation infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
