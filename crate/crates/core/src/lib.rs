//! An executable toolkit for RASP-L, a restricted straight-line language whose
//! operations mirror the components of a causal transformer.
//!
//! The crate interprets, type-checks, traces and analyzes programs, ships
//! next-token programs for a set of algorithmic tasks, verifies them against
//! brute-force oracles at every length, and contains a small Boolean Fourier
//! lab for minimum-degree interpolation.
//!
//! Every capability has a runnable example under `examples/`.

pub mod cli;
pub mod error;
pub mod ir;
pub mod mindeg;
pub mod ops;
pub mod programs;
pub mod runtime;
mod stdlib;
pub mod taskdata;
pub mod typesys;
pub mod value;

pub use error::{EvalError, KindViolation, OpError, TaskError, TypeErrorCode};
pub use ir::{analyze, evaluate, trace, ComplexityReport, Program, ProgramBuilder, VarId};
pub use ops::{AttentionCheck, Selector};
pub use programs::{Task, TaskSpec};
pub use runtime::{exact_match, sample_autoregressive, RunResult, Termination};
pub use typesys::{check_program, TypeError};
pub use value::{AggKind, FamilyId, Kind, MapFn, Predicate, Value, ValueSeq, ZipFn, NONE};
