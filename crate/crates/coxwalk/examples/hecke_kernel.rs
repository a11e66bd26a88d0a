//! Exact transition kernel of the retracted walk, from Hecke structure
//! constants and from per-letter mass propagation.
//!
//! `cargo run --release --example hecke_kernel`

use coxwalk::hecke::{hecke_product, kernel_row, kernel_row_by_mass, BuildingSpec, WalkSpec};
use coxwalk::CoxeterSystem;
use num_rational::BigRational;

pub fn run_example() -> coxwalk::Result<()> {
    let sys = CoxeterSystem::triangle(4, 3, 3)?;
    let b = BuildingSpec::uniform(&sys, 2)?;

    let u = sys.word_to_element(&sys.parse_word("12")?);
    let v = sys.word_to_element(&sys.parse_word("21")?);
    let mut prod: Vec<_> = hecke_product(&sys, &b, &u, &v)
        .into_iter()
        .map(|(w, c)| (sys.format_word(&sys.shortlex_nf(&w)), c))
        .collect();
    prod.sort();
    println!("P_12 P_21 =");
    for (w, c) in prod {
        println!("  {c} P_{w}");
    }

    let half = BigRational::new(1.into(), 2.into());
    let quarter = BigRational::new(1.into(), 4.into());
    let walk = WalkSpec::new(
        &sys,
        vec![(sys.parse_word("1")?, half), (sys.parse_word("23")?, quarter.clone()), (sys.parse_word("3")?, quarter)],
    )?;
    for src in ["e", "1", "123"] {
        let g = sys.word_to_element(&sys.parse_word(src)?);
        let row = kernel_row(&sys, &b, &walk, &g)?;
        println!("row {src} (sum {}):", row.total());
        for (w, p) in &row.entries {
            println!("  {:>6}  {p}", sys.format_word(w));
        }
    }

    // in the thin building the walk is the ordinary random walk on W
    let thin = BuildingSpec::thin(&sys);
    let row = kernel_row_by_mass(&sys, &thin, &walk, &sys.identity());
    println!("thin row from e: {} targets, all of the form e*w", row.entries.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> coxwalk::Result<()> {
    run_example()
}
