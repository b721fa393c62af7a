//! Checks the hard-attention construction of max aggregation on one input.

use raspl::ops::{kqv, max_aggregation_attention_check};
use raspl::{AggKind, Predicate, ValueSeq};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let keys = ValueSeq::tokens(vec![0, 1, 0, 2, 1, 0])?;
    let queries = ValueSeq::tokens(vec![1, 1, 0, 2, 0, 1])?;
    let values = ValueSeq::tokens(vec![5, -2, 7, 3, 9, 1])?;
    let max = kqv(&keys, &queries, &values, Predicate::Le, AggKind::Max, -1)?;
    println!("kqv max {:?}", max.values());
    let check = max_aggregation_attention_check(&keys, &queries, &values, Predicate::Le)?;
    println!("attention agrees: {} (empty rows {:?})", check.agrees, check.empty_rows);
    Ok(())
}
