//! Verifies two programs against their oracles and shows what a broken program looks like.

use raspl::ir::Op;
use raspl::programs::Task;
use raspl::taskdata::{verify, VerifyConfig};
use raspl::MapFn;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = VerifyConfig { max_len: 30, per_length: 50, ..VerifyConfig::default() };
    for task in [Task::Sort, Task::ParityScratchpad] {
        let r = verify(&task.spec(), &cfg)?;
        println!("{task}: {} instances, EM {}", r.instances, r.em);
    }

    let mut spec = Task::Count.spec();
    for ins in spec.program.body.iter_mut().rev() {
        if let Op::TokMap { f: f @ MapFn::AddConst(1), .. } = &mut ins.op {
            *f = MapFn::AddConst(2);
            break;
        }
    }
    let r = verify(&spec, &VerifyConfig { max_failures: 2, ..cfg })?;
    println!("count with +2 successor: EM {:.3}, {} failures", r.em, r.failure_count);
    for f in &r.failures {
        println!("  {:?}: got {:?}.., want {:?}..", f.instance, &f.predicted[..4], &f.expected[..2]);
    }
    Ok(())
}
