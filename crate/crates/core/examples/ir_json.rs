//! Serializes a shipped program to IR JSON and reads it back.

use raspl::programs::Task;
use raspl::Program;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let program = Task::BoolAnd.spec().program;
    let json = program.to_json();
    println!("{json}");
    let back = Program::from_json(&json)?;
    assert_eq!(back, program);
    Ok(())
}
