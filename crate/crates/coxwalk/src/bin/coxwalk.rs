use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use coxwalk::commands::{cmd_automaton, cmd_clt, cmd_estimate, cmd_feasibility, cmd_kernel, cmd_return, cmd_simulate};
use coxwalk::config::{Experiment, ExperimentConfig};
use coxwalk::renewal::RenewalMode;
use coxwalk::Result;

#[derive(Parser)]
#[command(name = "coxwalk", version, about = "Cone types, Hecke kernels and random walks on Fuchsian buildings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: `output.dir` from the config, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    allow_non_fuchsian: bool,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Mode {
    PaperPrefix,
    EnterAndStay,
}

#[derive(Subcommand)]
enum Command {
    /// Cone-type automaton: counts, recurrence, connectivity, JSON and DOT.
    Automaton {
        #[command(flatten)]
        common: Common,
        /// Also write Graphviz files.
        #[arg(long)]
        dot: bool,
    },
    /// Building feasibility of a triangle type, or the full list.
    Feasibility {
        #[arg(num_args = 3, value_names = ["A", "B", "C"])]
        triple: Option<Vec<u32>>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact kernel rows of the retracted walk as CSV.
    Kernel {
        #[command(flatten)]
        common: Common,
        /// Source words (default: `kernel.sources` from the config).
        sources: Vec<String>,
    },
    /// Exact return probabilities and the rho_hat diagnostics.
    Return {
        #[command(flatten)]
        common: Common,
        /// Largest m of rho_m (default: `returns.n`).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Simulate trajectories; writes endpoint and trajectory CSVs.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Add ShortLex normal forms to trajectory dumps.
        #[arg(long)]
        words: bool,
    },
    /// Renewal and endpoint estimates of the speed and variance.
    Estimate {
        #[command(flatten)]
        common: Common,
    },
    /// Kolmogorov-Smirnov check of the central limit theorem.
    Clt {
        #[command(flatten)]
        common: Common,
    },
}

fn load(c: &Common) -> Result<(Experiment, PathBuf)> {
    let mut cfg = ExperimentConfig::load(&c.config)?;
    if let Some(seed) = c.seed {
        cfg.experiment.seed = seed;
    }
    if c.allow_non_fuchsian {
        cfg.experiment.allow_non_fuchsian = true;
    }
    if let Some(m) = c.mode {
        cfg.renewal.mode = match m {
            Mode::PaperPrefix => RenewalMode::PaperPrefix,
            Mode::EnterAndStay => RenewalMode::EnterAndStay,
        };
    }
    let out = c
        .out
        .clone()
        .or_else(|| cfg.output.dir.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let exp = Experiment::new(cfg)?;
    for w in &exp.warnings {
        eprintln!("warning: {w}");
    }
    Ok((exp, out))
}

fn print<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Automaton { common, dot } => {
            let (exp, out) = load(&common)?;
            let r = cmd_automaton(&exp, Some(&out), dot)?;
            println!("{}", r.summary());
        }
        Command::Feasibility { triple, all, out } => {
            let triple = match (triple, all) {
                (Some(t), false) => Some([t[0], t[1], t[2]]),
                (None, true) => None,
                _ => {
                    return Err(coxwalk::Error::Config("give either A B C or --all".into()));
                }
            };
            let r = cmd_feasibility(triple, out.as_deref())?;
            for e in &r.entries {
                println!("{:?}: {:?}", e.triple, e.verdict);
            }
            if triple.is_none() {
                println!("{} feasible", r.feasible);
            }
        }
        Command::Kernel { common, sources } => {
            let (exp, out) = load(&common)?;
            let sources = if sources.is_empty() { exp.config.kernel.sources.clone() } else { sources };
            let r = cmd_kernel(&exp, &sources, Some(&out))?;
            print!("{}", r.csv);
            for (src, n, total) in &r.rows {
                eprintln!("row {src}: {n} targets, sum {total}");
            }
        }
        Command::Return { common, n } => {
            let (exp, out) = load(&common)?;
            let n = n.unwrap_or(exp.config.returns.n);
            print(&cmd_return(&exp, n, Some(&out))?)?;
        }
        Command::Simulate { common, words } => {
            let (mut exp, out) = load(&common)?;
            exp.config.output.nf_words |= words;
            print(&cmd_simulate(&exp, Some(&out))?)?;
        }
        Command::Estimate { common } => {
            let (exp, out) = load(&common)?;
            let r = cmd_estimate(&exp, Some(&out))?;
            print(&serde_json::json!({
                "v_hat": r.v_hat, "v_se": r.v_se, "sigma2_hat": r.sigma2_hat, "sigma2_se": r.sigma2_se,
                "n_renewals": r.n_renewals, "direct_v": r.direct_v, "direct_se": r.direct_se,
                "estimators_agree": r.estimators_agree, "ks_p": r.ks_p,
            }))?;
        }
        Command::Clt { common } => {
            let (exp, out) = load(&common)?;
            let r = cmd_clt(&exp, Some(&out))?;
            print(&serde_json::json!({
                "ks_stat": r.report.ks_stat, "ks_p": r.report.ks_p,
                "skewness": r.report.skewness, "excess_kurtosis": r.report.excess_kurtosis,
                "control_ks_p": r.control_ks_p, "tail_fit": r.report.tail_fit,
            }))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
