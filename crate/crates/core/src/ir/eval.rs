use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{EvalError, OpError};
use crate::ir::{Op, Program, VarId};
use crate::ops::{self, count_row, mean_round, reduce_row};
use crate::typesys;
use crate::value::{narrow, AggKind, Kind, MapFn, Predicate, Value, ValueSeq, ZipFn};

#[derive(Clone, Debug)]
enum Step {
    Input { input: usize },
    Indices,
    Full { value: Value },
    Map { x: usize, f: MapFn },
    Zip { x: usize, y: usize, f: ZipFn },
    Reduce { keys: usize, queries: usize, values: usize, pred: Predicate, agg: AggKind, default: Value },
    Width { keys: usize, queries: usize, pred: Predicate },
}

#[derive(Clone, Debug)]
struct Slot {
    id: VarId,
    name: Option<String>,
    tag: &'static str,
    kind: Kind,
    step: Step,
}

/// A type-checked program lowered to slot-addressed steps, reusable across runs.
///
/// Selectors are not materialized: every consumer of a selector re-reads its keys
/// and queries, so evaluating position `i` costs `O(i)` per attention op.
#[derive(Clone, Debug)]
pub struct Plan {
    slots: Vec<Slot>,
    output: usize,
    input_kinds: Vec<Kind>,
}

impl Plan {
    pub fn compile(program: &Program) -> Result<Self, EvalError> {
        program.validate()?;
        if let Some(e) = typesys::check_program(program).into_iter().next() {
            return Err(EvalError::Op {
                site: e.site,
                source: OpError::Kind(crate::KindViolation::new(e.code, e.message)),
            });
        }
        let kinds = typesys::infer_kinds(program);
        let mut index: HashMap<VarId, usize> = HashMap::new();
        let mut selectors: HashMap<VarId, (VarId, VarId, Predicate)> = HashMap::new();
        let mut slots = Vec::new();
        for (n, input) in program.inputs.iter().enumerate() {
            index.insert(input.id, slots.len());
            slots.push(Slot {
                id: input.id,
                name: Some(input.name.clone()),
                tag: "input",
                kind: input.kind,
                step: Step::Input { input: n },
            });
        }
        for ins in &program.body {
            let at = |v: &VarId| index[v];
            let step = match ins.op {
                Op::Select { keys, queries, pred } => {
                    selectors.insert(ins.id, (keys, queries, pred));
                    continue;
                }
                Op::Indices { .. } => Step::Indices,
                Op::Full { value, .. } => Step::Full { value },
                Op::TokMap { x, f } => Step::Map { x: at(&x), f },
                Op::SeqMap { x, y, f } => Step::Zip { x: at(&x), y: at(&y), f },
                Op::Aggregate { sel, values, agg, default } => {
                    let (k, q, pred) = selectors[&sel];
                    Step::Reduce { keys: at(&k), queries: at(&q), values: at(&values), pred, agg, default }
                }
                Op::Kqv { keys, queries, values, pred, agg, default } => Step::Reduce {
                    keys: at(&keys),
                    queries: at(&queries),
                    values: at(&values),
                    pred,
                    agg,
                    default,
                },
                Op::SelWidth { sel } => {
                    let (k, q, pred) = selectors[&sel];
                    Step::Width { keys: at(&k), queries: at(&q), pred }
                }
            };
            index.insert(ins.id, slots.len());
            slots.push(Slot {
                id: ins.id,
                name: ins.name.clone(),
                tag: ins.op.tag(),
                kind: kinds[&ins.id],
                step,
            });
        }
        Ok(Self {
            output: index[&program.output],
            input_kinds: program.inputs.iter().map(|i| i.kind).collect(),
            slots,
        })
    }

    pub fn input_count(&self) -> usize {
        self.input_kinds.len()
    }

    pub fn start(&self) -> Evaluator<'_> {
        Evaluator {
            plan: self,
            data: vec![Vec::new(); self.slots.len()],
            len: 0,
            rounded_means: 0,
        }
    }

    /// Evaluates on whole input sequences.
    pub fn run(&self, inputs: &[ValueSeq]) -> Result<Evaluator<'_>, EvalError> {
        if inputs.len() != self.input_count() {
            return Err(EvalError::Arity { expected: self.input_count(), got: inputs.len() });
        }
        for (index, (seq, &expected)) in inputs.iter().zip(&self.input_kinds).enumerate() {
            if seq.kind() != expected {
                return Err(EvalError::InputKind { index, expected, got: seq.kind() });
            }
        }
        let n = inputs[0].len();
        if inputs.iter().any(|s| s.len() != n) {
            return Err(EvalError::InputLength);
        }
        let mut ev = self.start();
        let mut row = vec![0; inputs.len()];
        for i in 0..n {
            for (r, s) in row.iter_mut().zip(inputs) {
                *r = s.values()[i];
            }
            ev.push(&row)?;
        }
        Ok(ev)
    }
}

/// Incremental evaluation state: one new position per [`Evaluator::push`].
#[derive(Clone, Debug)]
pub struct Evaluator<'p> {
    plan: &'p Plan,
    data: Vec<Vec<Value>>,
    len: usize,
    rounded_means: u64,
}

impl Evaluator<'_> {
    /// Appends one position (one value per program input) and computes every variable there.
    pub fn push(&mut self, inputs: &[Value]) -> Result<(), EvalError> {
        if inputs.len() != self.plan.input_count() {
            return Err(EvalError::Arity { expected: self.plan.input_count(), got: inputs.len() });
        }
        let i = self.len;
        for (s, slot) in self.plan.slots.iter().enumerate() {
            let fail = |source: OpError| EvalError::Op { site: slot.id, source };
            let d = &self.data;
            let v = match slot.step {
                Step::Input { input } => inputs[input],
                Step::Indices => narrow(i as i32).map_err(fail)?,
                Step::Full { value } => value,
                Step::Map { x, f } => f.apply(d[x][i]).map_err(fail)?,
                Step::Zip { x, y, f } => f.apply(d[x][i], d[y][i]).map_err(fail)?,
                Step::Reduce { keys, queries, values, pred, agg, default } => {
                    let r = reduce_row(&d[keys][..=i], &d[values][..=i], d[queries][i], pred, agg);
                    if r.count == 0 {
                        default
                    } else if agg == AggKind::Mean {
                        let c = r.count as i32;
                        if c > 1 && r.acc % c != 0 {
                            self.rounded_means += 1;
                        }
                        narrow(mean_round(r.acc, c)).map_err(fail)?
                    } else {
                        r.acc as Value
                    }
                }
                Step::Width { keys, queries, pred } => {
                    narrow(count_row(&d[keys][..=i], d[queries][i], pred) as i32).map_err(fail)?
                }
            };
            self.data[s].push(v);
        }
        self.len += 1;
        Ok(())
    }

    /// Appends one token to a single-input program.
    pub fn push_token(&mut self, token: Value) -> Result<(), EvalError> {
        self.push(&[token])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Output values for every position pushed so far.
    pub fn output(&self) -> &[Value] {
        &self.data[self.plan.output]
    }

    pub fn last_output(&self) -> Option<Value> {
        self.output().last().copied()
    }

    /// Number of Mean aggregations so far whose exact mean was not an integer.
    pub fn rounded_means(&self) -> u64 {
        self.rounded_means
    }

    pub fn output_seq(&self) -> ValueSeq {
        ValueSeq::from_parts(self.output().to_vec(), self.plan.slots[self.plan.output].kind)
    }

    /// Every sequence variable, in execution order.
    pub fn trace(&self) -> Trace {
        let entries = self
            .plan
            .slots
            .iter()
            .zip(&self.data)
            .map(|(slot, values)| TraceEntry {
                id: slot.id,
                name: slot.name.clone(),
                op: slot.tag.to_string(),
                kind: slot.kind,
                values: values.clone(),
            })
            .collect();
        Trace { entries, output: self.plan.slots[self.plan.output].id, rounded_means: self.rounded_means }
    }
}

/// One named intermediate sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub id: VarId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub op: String,
    pub kind: Kind,
    pub values: Vec<Value>,
}

/// All intermediate sequences of one evaluation, in execution order. Selectors are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
    pub output: VarId,
    pub rounded_means: u64,
}

impl Trace {
    pub fn get(&self, id: VarId) -> Option<&TraceEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn by_name(&self, name: &str) -> Option<&TraceEntry> {
        self.entries.iter().find(|e| e.name.as_deref() == Some(name))
    }

    pub fn output_values(&self) -> &[Value] {
        &self.get(self.output).expect("output is traced").values
    }
}

pub fn evaluate(program: &Program, inputs: &[ValueSeq]) -> Result<ValueSeq, EvalError> {
    let plan = Plan::compile(program)?;
    Ok(plan.run(inputs)?.output_seq())
}

pub fn trace(program: &Program, inputs: &[ValueSeq]) -> Result<Trace, EvalError> {
    let plan = Plan::compile(program)?;
    Ok(plan.run(inputs)?.trace())
}

/// Evaluates with the whole-sequence operations of [`crate::ops`], materializing selectors.
///
/// Quadratic memory per selector; intended as an independent check of [`Plan`].
pub fn evaluate_reference(program: &Program, inputs: &[ValueSeq]) -> Result<ValueSeq, EvalError> {
    program.validate()?;
    if inputs.len() != program.inputs.len() {
        return Err(EvalError::Arity { expected: program.inputs.len(), got: inputs.len() });
    }
    let mut seqs: HashMap<VarId, ValueSeq> = HashMap::new();
    let mut sels: HashMap<VarId, ops::Selector> = HashMap::new();
    for (inp, seq) in program.inputs.iter().zip(inputs) {
        seqs.insert(inp.id, seq.clone());
    }
    for ins in &program.body {
        let fail = |source: OpError| EvalError::Op { site: ins.id, source };
        let s = |v: &VarId| &seqs[v];
        let out = match &ins.op {
            Op::Select { keys, queries, pred } => {
                let sel = ops::select(s(keys), s(queries), *pred).map_err(fail)?;
                sels.insert(ins.id, sel);
                continue;
            }
            Op::Indices { x } => ops::indices(s(x)),
            Op::Full { x, value } => ops::full(s(x), *value),
            Op::TokMap { x, f } => ops::tok_map(s(x), *f).map_err(fail)?,
            Op::SeqMap { x, y, f } => ops::seq_map(s(x), s(y), *f).map_err(fail)?,
            Op::Aggregate { sel, values, agg, default } => {
                ops::aggregate(&sels[sel], s(values), *agg, *default).map_err(fail)?
            }
            Op::Kqv { keys, queries, values, pred, agg, default } => {
                ops::kqv(s(keys), s(queries), s(values), *pred, *agg, *default).map_err(fail)?
            }
            Op::SelWidth { sel } => ops::sel_width(&sels[sel], crate::FamilyId(ins.id.0)),
        };
        seqs.insert(ins.id, out);
    }
    Ok(seqs.remove(&program.output).expect("validated output"))
}
