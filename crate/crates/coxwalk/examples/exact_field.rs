//! Exact arithmetic in Q(2cos(pi/N)) and the geometric representation:
//! signs of algebraic numbers, roots, reduced words and normal forms.
//!
//! `cargo run --release --example exact_field`

use coxwalk::{AlgebraicField, CoxeterSystem};

pub fn run_example() -> coxwalk::Result<()> {
    let field = AlgebraicField::with_conductor(7);
    let l = field.lambda();
    // lambda = 2cos(pi/7) is a root of x^3 - x^2 - 2x + 1
    let l2 = field.mul(&l, &l);
    let l3 = field.mul(&l2, &l);
    println!("2cos(pi/7) = {:.12}, lambda^3 = {:.12}", field.to_f64(&l), field.to_f64(&l3));
    let two = field.from_int(2);
    println!("sign(lambda - 2) = {}", field.sign(&(&l - &two)));
    println!("lambda^3 - lambda^2 - 2 lambda + 1 is zero: {}", (&(&(&l3 - &l2) - &l) - &(&l - &field.one())).is_zero());

    let sys = CoxeterSystem::triangle(7, 3, 2)?;
    println!("{}", sys.classify().name());
    let w = sys.parse_word("1213121")?;
    let g = sys.word_to_element(&w);
    println!(
        "1213121: reduced {}, length {}, ShortLex form {}",
        sys.is_reduced(&w),
        sys.length(&g),
        sys.format_word(&sys.shortlex_nf(&g))
    );
    let beta = sys.reflect(1, &sys.simple_root(0));
    println!("sigma_2(alpha_1) has sign {}", sys.root_sign(&beta));
    Ok(())
}

#[allow(dead_code)]
fn main() -> coxwalk::Result<()> {
    run_example()
}
