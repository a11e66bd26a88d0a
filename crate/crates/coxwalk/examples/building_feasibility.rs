//! Which triangle types admit thick regular buildings, and which thickness
//! parameters are compatible with a given Coxeter matrix.
//!
//! `cargo run --release --example building_feasibility`

use coxwalk::hecke::{enumerate_triangle_types, spectral_condition, triangle_feasibility, BuildingSpec, Feasibility};
use coxwalk::CoxeterSystem;

pub fn run_example() -> coxwalk::Result<()> {
    let all = enumerate_triangle_types();
    let feasible: Vec<_> = all.iter().filter(|(_, f)| *f == Feasibility::Feasible).map(|(t, _)| *t).collect();
    println!("{} feasible infinite triangle types:", feasible.len());
    for t in &feasible {
        print!(" {t:?}");
    }
    println!();
    for t in [(8, 8, 8), (4, 4, 4), (8, 3, 3)] {
        println!("{t:?}: {:?}", triangle_feasibility(t.0, t.1, t.2)?);
    }

    let sys = CoxeterSystem::triangle(6, 3, 2)?;
    for q in [vec![2, 2, 2], vec![2, 8, 8], vec![3, 12, 12]] {
        match BuildingSpec::new(&sys, q.clone()) {
            Ok(b) => println!("(6,3,2) with q = {q:?}: valid, spectral condition {}", spectral_condition(&sys, &b).satisfied),
            Err(e) => println!("(6,3,2) with q = {q:?}: {e}"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> coxwalk::Result<()> {
    run_example()
}
