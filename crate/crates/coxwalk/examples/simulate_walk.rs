//! Simulating the retracted walk: reproducible streams, replay of positions,
//! CSV dumps.
//!
//! `cargo run --release --example simulate_walk`

use coxwalk::automaton::build_cannon;
use coxwalk::hecke::{BuildingSpec, WalkSpec};
use coxwalk::stats::direct_speed;
use coxwalk::walk::{RngSpec, Simulator};
use coxwalk::CoxeterSystem;

pub fn run_example() -> coxwalk::Result<()> {
    let sys = CoxeterSystem::triangle(4, 3, 3)?;
    let aut = build_cannon(&sys)?;
    let walk = WalkSpec::nearest_neighbour(&sys);
    for q in [1, 2, 4] {
        let b = BuildingSpec::uniform(&sys, q)?;
        let sim = Simulator::new(&sys, &aut, &b, &walk)?;
        let batch = sim.batch_simulate(200, 2000, 17);
        let (v, se) = direct_speed(&batch)?;
        println!("q = {q}: l(u_n)/n = {v:.4} +- {se:.4}");
    }

    let b = BuildingSpec::uniform(&sys, 2)?;
    let sim = Simulator::new(&sys, &aut, &b, &walk)?;
    let t = sim.simulate(40, RngSpec::new(17, 0));
    assert_eq!(t, sim.simulate(40, RngSpec::new(17, 0)));
    let words = t.positions(&sys, sim.root_data());
    println!("u_40 = {} (length {})", sys.format_word(&words[40]), t.final_length());
    print!("{}", t.to_csv(&sys, true).lines().take(6).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    Ok(())
}

#[allow(dead_code)]
fn main() -> coxwalk::Result<()> {
    run_example()
}
