//! Complexity reports of every shipped program.

use raspl::analyze;
use raspl::programs::Task;

fn main() {
    println!("{:<18} {:>6} {:>6} {:>6} {:>8} {:>7}", "task", "instrs", "attn", "depth", "min/max", "linear");
    for t in Task::ALL {
        let r = analyze(&t.spec().program);
        println!(
            "{:<18} {:>6} {:>6} {:>6} {:>8} {:>7}",
            t.name(),
            r.instruction_count,
            r.attention_op_count,
            r.parallel_depth,
            r.uses_min_max_aggregation,
            r.linear_attention_compatible
        );
    }
}
