//! Minimum-degree interpolation of AND from inputs whose last bits are always 1.

use raspl::mindeg::gotu_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = gotu_report(8, 3)?;
    println!("support of {} points, degree profile {:.3?}", r.support_size, r.degree_profile);
    println!("dependence per coordinate {:.3?}", r.dependence);
    for (set, c) in &r.coefficients {
        println!("  coefficient {set:?} = {c:.3}");
    }
    for u in &r.unseen {
        println!("zero at {}: interpolator {:.6}, program {}", u.zero_at, u.interpolator, u.program);
    }
    Ok(())
}
