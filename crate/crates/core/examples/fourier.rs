//! Fourier coefficients, degree profiles and restrictions of small cube functions.

use raspl::mindeg::{check_restriction_lemma, BooleanTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let and = BooleanTable::from_fn(2, |p| f64::from(p == 0b11))?;
    println!("AND coefficients {:?}", and.fourier());
    println!("AND profile      {:?}", and.degree_profile().weights);

    let maj = BooleanTable::from_fn(3, |p| if p.count_ones() >= 2 { 1.0 } else { -1.0 })?;
    println!("MAJ3 coefficients {:?}", maj.fourier());
    let r = maj.restrict(1, 1)?;
    println!("MAJ3 with x1 = +1 {:?}, profile {:?}", r.values(), r.degree_profile().weights);
    println!("restriction lowers the profile: {}", check_restriction_lemma(&maj, 1)?);
    Ok(())
}
