//! Exact return probabilities `p^(n)(o,o)` and the root estimates of the
//! spectral radius.
//!
//! `cargo run --release --example return_probabilities`

use coxwalk::hecke::{n_step_return, BuildingSpec, WalkSpec};
use coxwalk::CoxeterSystem;

pub fn run_example() -> coxwalk::Result<()> {
    let sys = CoxeterSystem::triangle(4, 3, 3)?;
    let walk = WalkSpec::nearest_neighbour(&sys);
    for q in [1, 2, 3] {
        let b = BuildingSpec::uniform(&sys, q)?;
        let ret = n_step_return(&sys, &b, &walk, 12, 1_000_000)?;
        println!("q = {q}: p^(2) = {}, p^(4) = {}", ret.probs[2], ret.probs[4]);
        let rho: Vec<String> = ret.rho_hat().iter().map(|(m, r)| format!("{m}:{r:.4}")).collect();
        println!("  rho_hat {}", rho.join(" "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> coxwalk::Result<()> {
    run_example()
}
