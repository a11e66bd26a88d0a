//! Orchestration behind the `coxwalk` binary. Every command returns a
//! serializable report and, given an output directory, writes its files there.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::automaton::appendix_automaton;
use crate::config::Experiment;
use crate::error::{Error, Result};
use crate::hecke::{
    enumerate_triangle_types, kernel_row, n_step_return, spectral_condition, triangle_feasibility, Feasibility,
};
use crate::renewal::{extract_renewals, RenewalConfig, RenewalSeries};
use crate::stats::{clt_check, direct_speed, estimate, CltReport, Estimates};
use crate::walk::{Simulator, Trajectory};

fn write(out: Option<&Path>, name: &str, contents: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let p = dir.join(name);
        fs::write(&p, contents)?;
        files.push(p);
    }
    Ok(())
}

fn write_json<T: Serialize>(out: Option<&Path>, name: &str, v: &T, files: &mut Vec<PathBuf>) -> Result<()> {
    write(out, name, &(serde_json::to_string_pretty(v)? + "\n"), files)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AutomatonReport {
    pub classification: String,
    pub states: usize,
    pub recurrent: usize,
    pub transient: Vec<String>,
    pub strongly_connected: bool,
    /// Recurrent `(from, to)` with no path from `from` to `to`.
    pub witness: Option<(String, String)>,
    pub appendix_states: Option<usize>,
    pub appendix_match: Option<bool>,
    pub appendix_note: Option<String>,
    pub files: Vec<PathBuf>,
}

impl AutomatonReport {
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{} states, {} recurrent, strongly connected: {}",
            self.states,
            self.recurrent,
            yes_no(self.strongly_connected)
        );
        if let Some((a, b)) = &self.witness {
            let _ = write!(s, ", witness {a} ↛ {b}");
        }
        match (self.appendix_match, &self.appendix_note) {
            (Some(m), _) => {
                let _ = write!(s, ", appendix match: {}", yes_no(m));
            }
            (None, Some(note)) => {
                let _ = write!(s, ", appendix: {note}");
            }
            _ => {}
        }
        s
    }
}

pub fn cmd_automaton(exp: &Experiment, out: Option<&Path>, dot: bool) -> Result<AutomatonReport> {
    let (sys, aut) = (&exp.sys, &exp.aut);
    let conn = aut.strong_connectivity();
    let mut files = Vec::new();
    let (appendix_states, appendix_match, appendix_note) = match appendix_automaton(sys) {
        Ok(app) => {
            if dot {
                write(out, "appendix.dot", &app.automaton.to_dot(sys), &mut files)?;
            }
            (
                Some(app.automaton.num_states()),
                Some(app.automaton.is_isomorphic(aut)),
                None,
            )
        }
        Err(e @ Error::UnsupportedClass(_)) => (None, None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    write_json(out, "automaton.json", &aut.to_json(sys), &mut files)?;
    if dot {
        write(out, "automaton.dot", &aut.to_dot(sys), &mut files)?;
    }
    let label = |q| aut.state_label(sys, q);
    let mut report = AutomatonReport {
        classification: sys.classify().name(),
        states: aut.num_states(),
        recurrent: aut.recurrent_states().len(),
        transient: aut.transient_states().into_iter().map(label).collect(),
        strongly_connected: conn.strongly_connected,
        witness: conn.witness.map(|(a, b)| (label(a), label(b))),
        appendix_states,
        appendix_match,
        appendix_note,
        files: Vec::new(),
    };
    write_json(out, "automaton_report.json", &report, &mut files)?;
    report.files = files;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityEntry {
    pub triple: [u32; 3],
    pub verdict: Feasibility,
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityReport {
    pub entries: Vec<FeasibilityEntry>,
    pub feasible: usize,
}

/// One triple, or the full list of infinite triangle types with `None`.
pub fn cmd_feasibility(triple: Option<[u32; 3]>, out: Option<&Path>) -> Result<FeasibilityReport> {
    let entries: Vec<FeasibilityEntry> = match triple {
        Some([a, b, c]) => vec![FeasibilityEntry {
            triple: [a, b, c],
            verdict: triangle_feasibility(a, b, c)?,
        }],
        None => enumerate_triangle_types()
            .into_iter()
            .map(|(triple, verdict)| FeasibilityEntry { triple, verdict })
            .collect(),
    };
    let feasible = entries.iter().filter(|e| e.verdict == Feasibility::Feasible).count();
    let report = FeasibilityReport { entries, feasible };
    write_json(out, "feasibility.json", &report, &mut Vec::new())?;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub csv: String,
    /// `(source, number of targets, row sum)`.
    pub rows: Vec<(String, usize, String)>,
}

/// Exact kernel rows as CSV `source,target,probability`.
pub fn cmd_kernel(exp: &Experiment, sources: &[String], out: Option<&Path>) -> Result<KernelReport> {
    let b = exp.building()?;
    let sys = &exp.sys;
    let mut csv = String::from("source,target,probability\n");
    let mut rows = Vec::new();
    for w in exp.words(sources)? {
        let row = kernel_row(sys, b, &exp.walk, &sys.word_to_element(&w))?;
        let src = sys.format_word(&row.source);
        for (v, p) in &row.entries {
            let _ = writeln!(csv, "{src},{},{p}", sys.format_word(v));
        }
        let total = row.total();
        rows.push((src, row.entries.len(), format!("{}/{}", total.numer(), total.denom())));
    }
    write(out, "kernel.csv", &csv, &mut Vec::new())?;
    Ok(KernelReport { csv, rows })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReturnReport {
    /// `p^(k)(1,1)` for `k = 0..=2n` as `num/den`.
    pub probabilities: Vec<String>,
    pub rho_hat: Vec<(usize, f64)>,
    pub all_below_one: bool,
    /// `rho_m >= rho_{m+1}` for all `3 <= m < n`, by exact comparison.
    pub non_increasing_from_3: bool,
    pub max_support: usize,
    pub spectral_condition: bool,
}

pub fn cmd_return(exp: &Experiment, n: usize, out: Option<&Path>) -> Result<ReturnReport> {
    let b = exp.building()?;
    let ret = n_step_return(&exp.sys, b, &exp.walk, 2 * n, exp.config.returns.state_cap)?;
    let rho_hat = ret.rho_hat();
    let one = num_rational::BigRational::from_integer(1.into());
    let report = ReturnReport {
        probabilities: ret
            .probs
            .iter()
            .map(|p| format!("{}/{}", p.numer(), p.denom()))
            .collect(),
        all_below_one: (1..=n).all(|m| ret.probs[2 * m] < one),
        non_increasing_from_3: (3..n).all(|m| ret.rho_cmp(m, m + 1).is_ge() || ret.probs[2 * m].is_zero()),
        rho_hat,
        max_support: ret.max_support,
        spectral_condition: spectral_condition(&exp.sys, b).satisfied,
    };
    write_json(out, "returns.json", &report, &mut Vec::new())?;
    Ok(report)
}

/// Simulated batch with renewal series, shared by the statistical commands.
pub struct Batch {
    pub trajectories: Vec<Trajectory>,
    pub series: Vec<RenewalSeries>,
    pub renewal: RenewalConfig,
}

pub fn run_batch(exp: &Experiment) -> Result<Batch> {
    exp.require_fuchsian()?;
    let renewal = exp.renewal_config()?;
    let run = &exp.config.experiment;
    let sim = Simulator::new(&exp.sys, &exp.aut, exp.building()?, &exp.walk)?;
    let trajectories = sim.batch_simulate(run.trajectories, run.horizon, run.seed);
    let series = trajectories
        .par_iter()
        .map(|t| extract_renewals(&exp.sys, &exp.aut, t, &renewal))
        .collect::<Result<Vec<_>>>()?;
    Ok(Batch {
        trajectories,
        series,
        renewal,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulateReport {
    pub master_seed: u64,
    pub trajectories: usize,
    pub horizon: usize,
    pub direct_v: f64,
    pub direct_se: f64,
    pub files: Vec<PathBuf>,
}

pub fn cmd_simulate(exp: &Experiment, out: Option<&Path>) -> Result<SimulateReport> {
    exp.require_fuchsian()?;
    let run = &exp.config.experiment;
    let sim = Simulator::new(&exp.sys, &exp.aut, exp.building()?, &exp.walk)?;
    let trajs = sim.batch_simulate(run.trajectories, run.horizon, run.seed);
    let mut files = Vec::new();
    let mut csv = String::from("trajectory,final_length,final_cone_type\n");
    for t in &trajs {
        let _ = writeln!(
            csv,
            "{},{},{}",
            t.rng.stream_id,
            t.final_length(),
            t.cone_types.last().expect("non-empty")
        );
    }
    write(out, "endpoints.csv", &csv, &mut files)?;
    for t in trajs.iter().take(exp.config.output.dump_trajectories) {
        let name = format!("trajectory_{:04}.csv", t.rng.stream_id);
        write(out, &name, &t.to_csv(&exp.sys, exp.config.output.nf_words), &mut files)?;
    }
    let (direct_v, direct_se) = if trajs.len() >= 2 {
        direct_speed(&trajs)?
    } else {
        (trajs.first().map_or(0.0, |t| t.final_length() as f64 / run.horizon.max(1) as f64), f64::NAN)
    };
    let report = SimulateReport {
        master_seed: run.seed,
        trajectories: trajs.len(),
        horizon: run.horizon,
        direct_v,
        direct_se,
        files: files.clone(),
    };
    write_json(out, "simulate.json", &report, &mut files)?;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub v_hat: f64,
    pub v_se: f64,
    pub sigma2_hat: f64,
    pub sigma2_se: f64,
    pub n_renewals: usize,
    pub ks_stat: f64,
    pub ks_p: f64,
    pub direct_v: f64,
    pub direct_se: f64,
    /// `|v_hat - direct_v| <= 3 sqrt(v_se^2 + direct_se^2)`.
    pub estimators_agree: bool,
    pub estimates: Estimates,
    pub renewal: RenewalConfig,
    pub master_seed: u64,
    pub streams: String,
    pub warnings: Vec<String>,
    /// The effective configuration; running it again reproduces this report.
    pub config_echo: String,
}

pub fn cmd_estimate(exp: &Experiment, out: Option<&Path>) -> Result<EstimateReport> {
    let batch = run_batch(exp)?;
    let report = estimate_report(exp, &batch)?;
    write_json(out, "estimates.json", &report, &mut Vec::new())?;
    Ok(report)
}

pub fn estimate_report(exp: &Experiment, batch: &Batch) -> Result<EstimateReport> {
    let est = estimate(&batch.series)?;
    let (direct_v, direct_se) = direct_speed(&batch.trajectories)?;
    let clt = if est.sigma2_hat > 0.0 {
        Some(clt_check(&batch.trajectories, &batch.series, est.v_hat, est.sigma2_hat)?)
    } else {
        None
    };
    let run = &exp.config.experiment;
    let mut warnings = exp.warnings.clone();
    if est.v_ci_includes_zero {
        warnings.push("the 3-SE interval of v_hat includes 0".into());
    }
    Ok(EstimateReport {
        v_hat: est.v_hat,
        v_se: est.v_se,
        sigma2_hat: est.sigma2_hat,
        sigma2_se: est.sigma2_se,
        n_renewals: est.n_renewals,
        ks_stat: clt.as_ref().map_or(f64::NAN, |c| c.ks_stat),
        ks_p: clt.as_ref().map_or(f64::NAN, |c| c.ks_p),
        direct_v,
        direct_se,
        estimators_agree: (est.v_hat - direct_v).abs() <= 3.0 * est.v_se.hypot(direct_se),
        estimates: est,
        renewal: batch.renewal.clone(),
        master_seed: run.seed,
        streams: format!("0..{}", run.trajectories),
        warnings,
        config_echo: exp.resolved_config(&batch.renewal).to_toml()?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CltCommandReport {
    pub report: CltReport,
    /// The same test with `v_hat + 0.1`; it should reject.
    pub control_shift: f64,
    pub control_ks_p: f64,
    pub estimate: EstimateReport,
}

pub fn cmd_clt(exp: &Experiment, out: Option<&Path>) -> Result<CltCommandReport> {
    let batch = run_batch(exp)?;
    let estimate = estimate_report(exp, &batch)?;
    let report = clt_check(&batch.trajectories, &batch.series, estimate.v_hat, estimate.sigma2_hat)?;
    let control_shift = 0.1;
    let control = clt_check(
        &batch.trajectories,
        &batch.series,
        estimate.v_hat + control_shift,
        estimate.sigma2_hat,
    )?;
    let out_report = CltCommandReport {
        report,
        control_shift,
        control_ks_p: control.ks_p,
        estimate,
    };
    write_json(out, "clt.json", &out_report, &mut Vec::new())?;
    Ok(out_report)
}
