use std::collections::HashMap;

use crate::ir::{Input, Instruction, Op, Program, VarId, IR_SCHEMA_VERSION};
use crate::typesys::rules;
use crate::value::{AggKind, FamilyId, Kind, MapFn, Predicate, Value, ZipFn};

/// Handle to a sequence variable under construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Seq(pub(crate) VarId);

/// Handle to a selector variable under construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Sel(pub(crate) VarId);

impl Seq {
    pub fn id(self) -> VarId {
        self.0
    }
}

impl Sel {
    pub fn id(self) -> VarId {
        self.0
    }
}

/// Appends instructions as library and task code calls it.
///
/// Kinds are tracked on a best-effort basis so helpers can pick kind-appropriate
/// aggregations; violations are not raised here but by the type checker.
#[derive(Debug)]
pub struct ProgramBuilder {
    name: String,
    inputs: Vec<Input>,
    body: Vec<Instruction>,
    kinds: HashMap<VarId, Kind>,
    next: u32,
}

impl ProgramBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            inputs: Vec::new(),
            body: Vec::new(),
            kinds: HashMap::new(),
            next: 0,
        }
    }

    fn fresh(&mut self) -> VarId {
        let id = VarId(self.next);
        self.next += 1;
        id
    }

    /// Declares a token input.
    pub fn input(&mut self, name: &str) -> Seq {
        self.input_of_kind(name, Kind::Token)
    }

    pub fn input_of_kind(&mut self, name: &str, kind: Kind) -> Seq {
        let id = self.fresh();
        self.inputs.push(Input {
            id,
            kind,
            name: name.to_string(),
        });
        self.kinds.insert(id, kind);
        Seq(id)
    }

    fn push(&mut self, op: Op, kind: Option<Kind>) -> VarId {
        let id = self.fresh();
        if let Some(k) = kind {
            self.kinds.insert(id, k);
        }
        self.body.push(Instruction { id, op, name: None });
        id
    }

    /// Best-effort kind of a sequence; unknown operands read as tokens.
    pub fn kind_of(&self, s: Seq) -> Kind {
        self.kinds.get(&s.0).copied().unwrap_or(Kind::Token)
    }

    /// Attaches a display name to the instruction defining `s`.
    pub fn name(&mut self, s: Seq, name: &str) -> Seq {
        if let Some(ins) = self.body.iter_mut().find(|i| i.id == s.0) {
            ins.name = Some(name.to_string());
        } else if let Some(inp) = self.inputs.iter_mut().find(|i| i.id == s.0) {
            inp.name = name.to_string();
        }
        s
    }

    pub fn indices(&mut self, x: Seq) -> Seq {
        Seq(self.push(Op::Indices { x: x.0 }, Some(Kind::Index)))
    }

    pub fn full(&mut self, x: Seq, value: Value) -> Seq {
        Seq(self.push(Op::Full { x: x.0, value }, Some(Kind::Token)))
    }

    pub fn tok_map(&mut self, x: Seq, f: MapFn) -> Seq {
        let kind = rules::map(f, self.kind_of(x)).unwrap_or(Kind::Token);
        Seq(self.push(Op::TokMap { x: x.0, f }, Some(kind)))
    }

    pub fn seq_map(&mut self, x: Seq, y: Seq, f: ZipFn) -> Seq {
        let kind = rules::zip(f, self.kind_of(x), self.kind_of(y)).unwrap_or(Kind::Token);
        Seq(self.push(Op::SeqMap { x: x.0, y: y.0, f }, Some(kind)))
    }

    pub fn select(&mut self, keys: Seq, queries: Seq, pred: Predicate) -> Sel {
        Sel(self.push(
            Op::Select {
                keys: keys.0,
                queries: queries.0,
                pred,
            },
            None,
        ))
    }

    pub fn aggregate(&mut self, sel: Sel, values: Seq, agg: AggKind, default: Value) -> Seq {
        let kind = rules::aggregate(agg, self.kind_of(values)).unwrap_or(Kind::Token);
        Seq(self.push(
            Op::Aggregate {
                sel: sel.0,
                values: values.0,
                agg,
                default,
            },
            Some(kind),
        ))
    }

    pub fn kqv(&mut self, keys: Seq, queries: Seq, values: Seq, pred: Predicate, agg: AggKind, default: Value) -> Seq {
        let kind = rules::aggregate(agg, self.kind_of(values)).unwrap_or(Kind::Token);
        Seq(self.push(
            Op::Kqv {
                keys: keys.0,
                queries: queries.0,
                values: values.0,
                pred,
                agg,
                default,
            },
            Some(kind),
        ))
    }

    /// Each call site gets its own width family, named after the instruction id.
    pub fn sel_width(&mut self, sel: Sel) -> Seq {
        let id = VarId(self.next);
        Seq(self.push(Op::SelWidth { sel: sel.0 }, Some(Kind::Width(FamilyId(id.0)))))
    }

    pub fn finish(self, output: Seq) -> Program {
        Program {
            schema_version: IR_SCHEMA_VERSION,
            name: self.name,
            inputs: self.inputs,
            body: self.body,
            output: output.0,
        }
    }
}
