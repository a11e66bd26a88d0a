//! Central limit check: standardized endpoints against the normal law, with
//! a deliberately wrong speed as a control.
//!
//! `cargo run --release --example clt_check`

use coxwalk::automaton::build_cannon;
use coxwalk::hecke::{BuildingSpec, WalkSpec};
use coxwalk::renewal::{extract_renewals, RenewalConfig, RenewalMode};
use coxwalk::stats::{clt_check, estimate};
use coxwalk::walk::Simulator;
use coxwalk::CoxeterSystem;

pub fn run_example() -> coxwalk::Result<()> {
    let sys = CoxeterSystem::triangle(4, 3, 3)?;
    let aut = build_cannon(&sys)?;
    let b = BuildingSpec::uniform(&sys, 2)?;
    let walk = WalkSpec::nearest_neighbour(&sys);
    let sim = Simulator::new(&sys, &aut, &b, &walk)?;
    let batch = sim.batch_simulate(300, 2000, 4);
    let cfg = RenewalConfig::with_defaults(&sys, &aut, &walk, RenewalMode::EnterAndStay, 2000)?;
    let series: Vec<_> = batch
        .iter()
        .map(|t| extract_renewals(&sys, &aut, t, &cfg))
        .collect::<coxwalk::Result<_>>()?;
    let e = estimate(&series)?;
    let report = clt_check(&batch, &series, e.v_hat, e.sigma2_hat)?;
    println!(
        "v = {:.4}, sigma^2 = {:.3}: KS D = {:.4}, p = {:.3}, skew {:.3}, excess kurtosis {:.3}",
        e.v_hat, e.sigma2_hat, report.ks_stat, report.ks_p, report.skewness, report.excess_kurtosis
    );
    if let Some(fit) = &report.tail_fit {
        println!("renewal gaps: log-tail slope {:.4}, R^2 {:.3}", fit.slope, fit.r2);
    }
    let control = clt_check(&batch, &series, e.v_hat + 0.1, e.sigma2_hat)?;
    println!("with v + 0.1: p = {:.2e}", control.ks_p);
    Ok(())
}

#[allow(dead_code)]
fn main() -> coxwalk::Result<()> {
    run_example()
}
