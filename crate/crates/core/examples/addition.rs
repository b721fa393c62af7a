//! Adds two numbers with both addition programs and decodes the answers.

use raspl::programs::{Instance, Task};
use raspl::sample_autoregressive;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (a, b) = (std::env::args().nth(1).unwrap_or("88".into()), std::env::args().nth(2).unwrap_or("842".into()));
    let inst = Instance::Addition { a: a.clone(), b: b.clone() };
    for task in [Task::AddRev, Task::AddFwd] {
        let spec = task.spec();
        let prompt = spec.encode_prompt(&inst)?;
        let run = sample_autoregressive(&spec, &prompt, false)?;
        let seq: Vec<String> = run.full_sequence.iter().map(ToString::to_string).collect();
        println!("{task}: {}", seq.join(" "));
        println!("  {a} + {b} = {:?}", spec.decode_answer(&run.full_sequence, run.prompt_len)?);
    }
    Ok(())
}
