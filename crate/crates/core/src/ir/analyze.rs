use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::ir::{Op, Program, VarId};
use crate::value::{fits_int8, AggKind};

/// Structural cost of a program. Depends only on the IR, never on inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub instruction_count: usize,
    /// Number of `select`, `aggregate`, `kqv` and `sel_width` instructions.
    pub attention_op_count: usize,
    /// Longest dependency chain, counting each attention instruction as one and
    /// elementwise instructions as zero.
    pub parallel_depth: usize,
    pub uses_min_max_aggregation: bool,
    /// Programs without Min/Max aggregation only need mean attention, which a
    /// linear-attention model can compute in linear time.
    pub linear_attention_compatible: bool,
    /// Every immediate constant (fill values, defaults, map constants) fits in 8 bits.
    pub int8_clean: bool,
}

pub fn analyze(p: &Program) -> ComplexityReport {
    let mut depth: HashMap<VarId, usize> = p.inputs.iter().map(|i| (i.id, 0)).collect();
    let mut attention = 0;
    let mut min_max = false;
    let mut immediates: Vec<i16> = Vec::new();
    for ins in &p.body {
        let here = usize::from(ins.op.is_attention());
        attention += here;
        let before = ins.op.operands().iter().map(|v| depth.get(v).copied().unwrap_or(0)).max().unwrap_or(0);
        depth.insert(ins.id, before + here);
        match ins.op {
            Op::Aggregate { agg, default, .. } | Op::Kqv { agg, default, .. } => {
                min_max |= matches!(agg, AggKind::Min | AggKind::Max);
                immediates.push(default);
            }
            Op::Full { value, .. } => immediates.push(value),
            Op::TokMap { f, .. } => immediates.extend(f.immediates()),
            Op::SeqMap { f, .. } => immediates.extend(f.immediates()),
            _ => {}
        }
    }
    ComplexityReport {
        instruction_count: p.body.len(),
        attention_op_count: attention,
        parallel_depth: depth.values().copied().max().unwrap_or(0),
        uses_min_max_aggregation: min_max,
        linear_attention_compatible: !min_max,
        int8_clean: immediates.iter().all(|&c| fits_int8(c as i32)),
    }
}
