//! Greedy generation with the stop token, and with a step budget that runs out.

use raspl::programs::{Instance, Task};
use raspl::runtime::Runner;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = Task::Count.spec();
    let runner = Runner::new(&spec)?;
    let prompt = [-1, 3, 9, -3];
    let full = runner.run(&prompt, false)?;
    println!("count 3..9: {:?} ({:?})", full.completion(), full.terminated);
    let cut = runner.run_with_budget(&prompt, 2, false)?;
    println!("two steps:  {:?} ({:?})", cut.completion(), cut.terminated);

    let spec = Task::Sort.spec();
    let prompt = spec.encode_prompt(&Instance::Sort { tokens: vec![42, 7, 99, 19, 3] })?;
    let run = Runner::new(&spec)?.run(&prompt, false)?;
    let shown: Vec<String> = run.completion().iter().map(|&t| spec.render_token(t)).collect();
    println!("sort: {}", shown.join(" "));
    Ok(())
}
