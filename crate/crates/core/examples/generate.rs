//! Writes a few dataset records as JSON lines.

use raspl::taskdata::{gen_instances, CarryMode, DataTask, GenConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (task, carry) in [
        ("add-rev", CarryMode::Hard),
        ("parity-scratchpad", CarryMode::Independent),
        ("mode-scratch-app", CarryMode::Independent),
    ] {
        let cfg = GenConfig { carry, ..GenConfig::new(task.parse::<DataTask>()?, 6, 42) };
        for r in gen_instances(&cfg, 2)? {
            println!("{}", serde_json::to_string(&r)?);
        }
    }
    Ok(())
}
