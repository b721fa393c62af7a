//! Runtime values: integer sequences tagged with a kind.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::OpError;

/// Scalar stored in every sequence position.
pub type Value = i16;

/// Sentinel for "no value", shared by the addition programs and several defaults.
pub const NONE: Value = -88;

/// Identifies one `sel_width` call site. Sequences from different families never compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyId(pub u32);

/// Static kind of a sequence.
///
/// `Index` values come from `indices`; `Width` values come from `sel_width` and
/// inherit the index restrictions. Negative values in an index-like sequence are
/// sentinels produced by defaults and never match a real position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Token,
    Index,
    Width(FamilyId),
}

impl Kind {
    pub fn is_index_like(self) -> bool {
        !matches!(self, Kind::Token)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Token => write!(f, "token"),
            Kind::Index => write!(f, "index"),
            Kind::Width(FamilyId(id)) => write!(f, "width#{id}"),
        }
    }
}

/// A length-n sequence of values of one kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueSeq {
    values: Vec<Value>,
    kind: Kind,
}

impl ValueSeq {
    pub fn new(values: Vec<Value>, kind: Kind) -> Result<Self, OpError> {
        if values.is_empty() {
            return Err(OpError::EmptySequence);
        }
        Ok(Self { values, kind })
    }

    pub fn tokens(values: Vec<Value>) -> Result<Self, OpError> {
        Self::new(values, Kind::Token)
    }

    /// Builds a sequence from wide integers, rejecting anything outside 16 bits.
    pub fn from_wide(values: &[i32], kind: Kind) -> Result<Self, OpError> {
        let narrow = values
            .iter()
            .map(|&v| narrow(v))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(narrow, kind)
    }

    pub(crate) fn from_parts(values: Vec<Value>, kind: Kind) -> Self {
        debug_assert!(!values.is_empty());
        Self { values, kind }
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Value> {
        self.values
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Lint: every value fits the signed 8-bit range the language nominally requires.
    pub fn is_int8_clean(&self) -> bool {
        self.values.iter().all(|&v| fits_int8(v as i32))
    }

    /// First `len` positions, same kind.
    pub fn prefix(&self, len: usize) -> ValueSeq {
        assert!(len >= 1 && len <= self.len(), "prefix length out of range");
        Self::from_parts(self.values[..len].to_vec(), self.kind)
    }
}

pub(crate) fn narrow(v: i32) -> Result<Value, OpError> {
    Value::try_from(v).map_err(|_| OpError::Overflow { value: v })
}

pub fn fits_int8(v: i32) -> bool {
    (i8::MIN as i32..=i8::MAX as i32).contains(&v)
}

/// Binary predicate used by selectors and comparisons.
///
/// In a selector the predicate reads `key OP query`: `Gt` selects keys strictly
/// greater than the query. As an elementwise comparison it reads `x OP y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    True,
    False,
}

impl Predicate {
    pub const ALL: [Predicate; 8] = [
        Predicate::Eq,
        Predicate::Ne,
        Predicate::Lt,
        Predicate::Le,
        Predicate::Gt,
        Predicate::Ge,
        Predicate::True,
        Predicate::False,
    ];

    #[inline(always)]
    pub fn holds(self, lhs: Value, rhs: Value) -> bool {
        match self {
            Predicate::Eq => lhs == rhs,
            Predicate::Ne => lhs != rhs,
            Predicate::Lt => lhs < rhs,
            Predicate::Le => lhs <= rhs,
            Predicate::Gt => lhs > rhs,
            Predicate::Ge => lhs >= rhs,
            Predicate::True => true,
            Predicate::False => false,
        }
    }

    /// Constant predicates never look at their operands.
    pub fn is_constant(self) -> bool {
        matches!(self, Predicate::True | Predicate::False)
    }
}

/// Reduction applied to the selected values of each row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AggKind {
    Mean,
    Min,
    Max,
}

/// Unary elementwise functions available to `tok_map`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapFn {
    Identity,
    /// `x + c`. On index-like kinds only `c = ±1` (successor / predecessor) is legal.
    AddConst(i16),
    MulConst(i16),
    /// Floor division.
    DivConst(i16),
    /// Modulo with a non-negative result for positive divisors.
    ModConst(i16),
    Neg,
    /// Logical negation: 1 if `x == 0`, else 0.
    Not,
    /// `x OP rhs` as 0/1.
    Cmp { pred: Predicate, rhs: i16 },
    /// Reinterpret as a token value.
    ToToken,
    /// Reinterpret as an index value.
    ToIndex,
}

impl MapFn {
    #[inline]
    pub fn apply(self, x: Value) -> Result<Value, OpError> {
        let x = x as i32;
        let out = match self {
            MapFn::Identity | MapFn::ToToken | MapFn::ToIndex => x,
            MapFn::AddConst(c) => x + c as i32,
            MapFn::MulConst(c) => x * c as i32,
            MapFn::DivConst(0) | MapFn::ModConst(0) => return Err(OpError::DivisionByZero),
            MapFn::DivConst(c) => x.div_euclid(c as i32),
            MapFn::ModConst(c) => x.rem_euclid(c as i32),
            MapFn::Neg => -x,
            MapFn::Not => (x == 0) as i32,
            MapFn::Cmp { pred, rhs } => pred.holds(x as Value, rhs) as i32,
        };
        narrow(out)
    }

    /// Immediate constants carried by the function, for the int8 lint.
    pub fn immediates(self) -> Option<i16> {
        match self {
            MapFn::AddConst(c) | MapFn::MulConst(c) | MapFn::DivConst(c) | MapFn::ModConst(c) => {
                Some(c)
            }
            MapFn::Cmp { rhs, .. } => Some(rhs),
            _ => None,
        }
    }
}

/// Binary elementwise functions available to `seq_map`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZipFn {
    Add,
    Sub,
    Mul,
    /// Logical and/or on nonzero-as-true, producing 0/1.
    And,
    Or,
    /// `x && !y`.
    AndNot,
    /// `x + y` when `x >= 0`, otherwise `x` (keeps negative hint tokens intact).
    AddSafe,
    /// `x OP y` as 0/1.
    Cmp(Predicate),
    /// `x` where `y != 0`, else `fill`. Keeps the kind of `x`.
    Gate { fill: i16 },
    /// `x` where `y == 0`, else `fill`. Keeps the kind of `x`.
    GateNot { fill: i16 },
}

impl ZipFn {
    #[inline]
    pub fn apply(self, x: Value, y: Value) -> Result<Value, OpError> {
        let (a, b) = (x as i32, y as i32);
        let out = match self {
            ZipFn::Add => a + b,
            ZipFn::Sub => a - b,
            ZipFn::Mul => a * b,
            ZipFn::And => (a != 0 && b != 0) as i32,
            ZipFn::Or => (a != 0 || b != 0) as i32,
            ZipFn::AndNot => (a != 0 && b == 0) as i32,
            ZipFn::AddSafe => {
                if a >= 0 {
                    a + b
                } else {
                    a
                }
            }
            ZipFn::Cmp(p) => p.holds(x, y) as i32,
            ZipFn::Gate { fill } => {
                if b != 0 {
                    a
                } else {
                    fill as i32
                }
            }
            ZipFn::GateNot { fill } => {
                if b == 0 {
                    a
                } else {
                    fill as i32
                }
            }
        };
        narrow(out)
    }

    pub fn immediates(self) -> Option<i16> {
        match self {
            ZipFn::Gate { fill } | ZipFn::GateNot { fill } => Some(fill),
            _ => None,
        }
    }

    /// Gates pass the first operand through unchanged, so they keep its kind.
    pub fn is_gate(self) -> bool {
        matches!(self, ZipFn::Gate { .. } | ZipFn::GateNot { .. })
    }
}
