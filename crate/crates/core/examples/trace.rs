//! Prints every intermediate variable of the count program on one full sequence.

use raspl::programs::Task;
use raspl::{trace, ValueSeq};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = Task::Count.spec();
    let seq: Vec<i16> = vec![-1, 2, 5, -3, 2, 3, 4, 5];
    let t = trace(&spec.program, &[ValueSeq::tokens(seq)?])?;
    let cell = |v: &i16| format!("{v:>5}");
    for e in &t.entries {
        let label = e.name.clone().unwrap_or_else(|| format!("{} {}", e.id, e.op));
        println!("{label:<14}{}", e.values.iter().map(cell).collect::<String>());
    }
    Ok(())
}
