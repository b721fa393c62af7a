//! Shows the kind rules rejecting index arithmetic while accepting every shipped program.

use raspl::programs::Task;
use raspl::typesys::illegal_addition_fixtures;
use raspl::{check_program, MapFn, ProgramBuilder};

fn main() {
    for f in illegal_addition_fixtures() {
        let errors = check_program(&f.program);
        println!("{:<20} expected {:<16} got {:?}", f.name, f.expected.to_string(), errors.iter().map(|e| e.code).collect::<Vec<_>>());
    }

    // a position may move by one, but not by two
    let mut b = ProgramBuilder::new("skip");
    let x = b.input("seq");
    let i = b.indices(x);
    let next = b.tok_map(i, MapFn::AddConst(1));
    let skip = b.tok_map(next, MapFn::AddConst(2));
    for e in check_program(&b.finish(skip)) {
        println!("skip: {} at {}: {}", e.code, e.site, e.message);
    }

    for t in Task::ALL {
        assert!(check_program(&t.spec().program).is_empty());
    }
    println!("all {} shipped programs are well-kinded", Task::ALL.len());
}
