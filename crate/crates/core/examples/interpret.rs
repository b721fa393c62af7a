//! Builds a small program by hand and evaluates it.
//!
//! The program computes a running histogram: at each position, how many earlier
//! tokens equal the current one.

use raspl::{evaluate, Predicate, ProgramBuilder, ValueSeq};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut b = ProgramBuilder::new("histogram");
    let x = b.input("tokens");
    let same = b.select(x, x, Predicate::Eq);
    let hist = b.sel_width(same);
    let program = b.finish(hist);

    let input = ValueSeq::tokens(vec![3, 1, 3, 3, 1, 7])?;
    let out = evaluate(&program, &[input.clone()])?;
    println!("tokens    {:?}", input.values());
    println!("histogram {:?}", out.values());
    Ok(())
}
