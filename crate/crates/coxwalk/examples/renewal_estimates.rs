//! Renewal times and the speed and variance estimators built from them,
//! compared with the endpoint estimator.
//!
//! `cargo run --release --example renewal_estimates`

use coxwalk::automaton::build_cannon;
use coxwalk::hecke::{BuildingSpec, WalkSpec};
use coxwalk::renewal::{extract_renewals, RenewalConfig, RenewalMode};
use coxwalk::stats::{direct_speed, estimate};
use coxwalk::walk::Simulator;
use coxwalk::CoxeterSystem;

pub fn run_example() -> coxwalk::Result<()> {
    let sys = CoxeterSystem::triangle(4, 3, 3)?;
    let aut = build_cannon(&sys)?;
    let b = BuildingSpec::uniform(&sys, 2)?;
    let walk = WalkSpec::nearest_neighbour(&sys);
    let sim = Simulator::new(&sys, &aut, &b, &walk)?;
    let n = 2000;
    let batch = sim.batch_simulate(200, n, 99);
    let (dv, dse) = direct_speed(&batch)?;
    println!("endpoint estimator: {dv:.4} +- {dse:.4}");

    let t = RenewalConfig::default_cone_type(&aut)?;
    println!("cone type T({}), default L1 = {}", aut.state_label(&sys, t), RenewalConfig::default_l1(&sys, &walk));
    for (mode, l1) in [(RenewalMode::EnterAndStay, 9), (RenewalMode::PaperPrefix, 1)] {
        let cfg = RenewalConfig::build(&sys, &aut, &walk, mode, t, l1, n / 5)?;
        let series: Vec<_> = batch
            .iter()
            .map(|tr| extract_renewals(&sys, &aut, tr, &cfg))
            .collect::<coxwalk::Result<_>>()?;
        let exact = series.iter().all(|s| s.is_additive() && s.is_nested());
        let e = estimate(&series)?;
        println!(
            "{mode} (L1 = {l1}, prefix {}): v = {:.4} +- {:.4}, sigma^2 = {:.3} +- {:.3}, {} increments, additive and nested: {exact}",
            sys.format_word(&cfg.prefix_path),
            e.v_hat,
            e.v_se,
            e.sigma2_hat,
            e.sigma2_se,
            e.n_increments,
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> coxwalk::Result<()> {
    run_example()
}
