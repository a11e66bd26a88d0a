//! TOML experiment files.
//!
//! ```toml
//! [system]
//! generators = ["1", "2", "3"]
//! matrix = [[1, 4, 3], [4, 1, 3], [3, 3, 1]]   # "inf" for an infinite label
//!
//! [building]
//! q = 2                  # or one value per generator: [2, 2, 2]
//!
//! [walk]                 # omitted: uniform nearest-neighbour walk
//! steps = [["1", "1/3"], ["2", "1/3"], ["3", "1/3"]]
//!
//! [experiment]
//! horizon = 2000
//! trajectories = 1000
//! seed = 42
//!
//! [renewal]
//! mode = "enter_and_stay"
//! cone_type = "12"       # any word of the cone type; default: least recurrent type
//! l1 = 9
//! tail_buffer = 400
//! ```
//!
//! Probabilities are exact rationals written `"num/den"`; decimals are rejected.

use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::automaton::{build_cannon, CannonAutomaton};
use crate::coxeter::{CoxeterSystem, Word};
use crate::error::{Error, Result};
use crate::field::Order;
use crate::hecke::{support_generates, BuildingSpec, Generation, WalkSpec};
use crate::renewal::{RenewalConfig, RenewalMode};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixEntry {
    Int(u32),
    Text(String),
}

impl MatrixEntry {
    fn order(&self) -> Result<Order> {
        match self {
            MatrixEntry::Int(m) => Ok(Order::Finite(*m)),
            MatrixEntry::Text(t) if t == "inf" => Ok(Order::Infinite),
            MatrixEntry::Text(t) => t
                .parse()
                .map(Order::Finite)
                .map_err(|_| Error::Config(format!("bad matrix entry {t:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    pub matrix: Vec<Vec<MatrixEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QParam {
    Uniform(u64),
    PerGenerator(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildingSection {
    pub q: QParam,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<(String, String)>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub horizon: usize,
    pub trajectories: usize,
    pub seed: u64,
    pub allow_non_fuchsian: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            horizon: 2000,
            trajectories: 1000,
            seed: 0,
            allow_non_fuchsian: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RenewalSection {
    pub mode: RenewalMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone_type: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_buffer: Option<usize>,
    /// Path to the deep sub-cone in `paper_prefix` mode; searched when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefix: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelSection {
    pub sources: Vec<String>,
}

impl Default for KernelSection {
    fn default() -> Self {
        KernelSection { sources: vec!["e".into()] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReturnSection {
    /// Largest `m` of `rho_m`; probabilities are computed up to `2m` steps.
    pub n: usize,
    pub state_cap: usize,
}

impl Default for ReturnSection {
    fn default() -> Self {
        ReturnSection {
            n: 10,
            state_cap: 2_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    /// Trajectories written in full by `simulate`.
    pub dump_trajectories: usize,
    pub nf_words: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: None,
            dump_trajectories: 1,
            nf_words: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: SystemSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub building: Option<BuildingSection>,
    #[serde(default)]
    pub walk: WalkSection,
    #[serde(default)]
    pub experiment: RunSection,
    #[serde(default)]
    pub renewal: RenewalSection,
    #[serde(default)]
    pub kernel: KernelSection,
    #[serde(default)]
    pub returns: ReturnSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }
}

impl ExperimentConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    /// Fails for values TOML cannot hold, such as seeds of `2^63` and above.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("cannot write config: {e}")))
    }

    /// Config for a triangle group `m12 = a, m23 = b, m13 = c`.
    pub fn triangle(a: u32, b: u32, c: u32) -> Self {
        let e = MatrixEntry::Int;
        ExperimentConfig {
            system: SystemSection {
                generators: Some(vec!["1".into(), "2".into(), "3".into()]),
                matrix: vec![vec![e(1), e(a), e(c)], vec![e(a), e(1), e(b)], vec![e(c), e(b), e(1)]],
            },
            building: None,
            walk: WalkSection::default(),
            experiment: RunSection::default(),
            renewal: RenewalSection::default(),
            kernel: KernelSection::default(),
            returns: ReturnSection::default(),
            output: OutputSection::default(),
        }
    }
}

/// Parses `"num/den"` (or an integer) exactly.
pub fn parse_probability(text: &str) -> Result<BigRational> {
    let t = text.trim();
    if t.contains(['.', 'e', 'E']) {
        return Err(Error::Config(format!("probability {t:?} must be an exact rational num/den")));
    }
    BigRational::from_str(t).map_err(|_| Error::Config(format!("cannot parse probability {t:?}")))
}

/// A validated configuration with the objects it describes.
#[derive(Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub sys: CoxeterSystem,
    pub aut: CannonAutomaton,
    pub walk: WalkSpec,
    building: Option<BuildingSpec>,
    pub warnings: Vec<String>,
}

impl Experiment {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::new(ExperimentConfig::load(path)?)
    }

    pub fn new(config: ExperimentConfig) -> Result<Self> {
        if i64::try_from(config.experiment.seed).is_err() {
            return Err(Error::Config(format!("seed {} is not below 2^63", config.experiment.seed)));
        }
        let matrix: Vec<Vec<Order>> = config
            .system
            .matrix
            .iter()
            .map(|row| row.iter().map(MatrixEntry::order).collect())
            .collect::<Result<_>>()?;
        let sys = match &config.system.generators {
            Some(labels) => CoxeterSystem::new(labels.clone(), matrix)?,
            None => CoxeterSystem::numbered(matrix)?,
        };
        let mut warnings = Vec::new();
        let building = match &config.building {
            None => None,
            Some(b) => {
                let q = match &b.q {
                    QParam::Uniform(q) => vec![*q; sys.rank()],
                    QParam::PerGenerator(q) => q.clone(),
                };
                let spec = BuildingSpec::new(&sys, q)?;
                warnings.extend(spec.warnings().iter().cloned());
                Some(spec)
            }
        };
        let walk = match &config.walk.steps {
            None => WalkSpec::nearest_neighbour(&sys),
            Some(steps) => {
                let parsed = steps
                    .iter()
                    .map(|(w, p)| Ok((sys.parse_word(w)?, parse_probability(p)?)))
                    .collect::<Result<Vec<_>>>()?;
                WalkSpec::new(&sys, parsed)?
            }
        };
        match support_generates(&sys, &walk, 12) {
            Generation::Yes => {}
            Generation::No(why) | Generation::Inconclusive(why) => {
                warnings.push(format!("walk support may not generate W: {why}"))
            }
        }
        let aut = build_cannon(&sys)?;
        Ok(Experiment {
            config,
            sys,
            aut,
            walk,
            building,
            warnings,
        })
    }

    pub fn building(&self) -> Result<&BuildingSpec> {
        self.building
            .as_ref()
            .ok_or_else(|| Error::Config("this command needs a [building] section".into()))
    }

    /// Refuses non-Fuchsian systems unless the override is set.
    pub fn require_fuchsian(&self) -> Result<()> {
        let class = self.sys.classify();
        if class.is_fuchsian() || self.config.experiment.allow_non_fuchsian {
            Ok(())
        } else {
            Err(Error::NotFuchsian(class.name()))
        }
    }

    /// Renewal settings with every default resolved.
    pub fn renewal_config(&self) -> Result<RenewalConfig> {
        let r = &self.config.renewal;
        let horizon = self.config.experiment.horizon;
        let cone_type = match &r.cone_type {
            Some(w) => self.aut.cone_type_of(&self.sys, &self.sys.parse_word(w)?)?,
            None => RenewalConfig::default_cone_type(&self.aut)?,
        };
        let l1 = r.l1.unwrap_or_else(|| RenewalConfig::default_l1(&self.sys, &self.walk));
        let tail = r.tail_buffer.unwrap_or_else(|| RenewalConfig::default_tail_buffer(horizon));
        if tail >= horizon {
            return Err(Error::Config(format!("tail buffer {tail} is not below the horizon {horizon}")));
        }
        match (&r.prefix, r.mode) {
            (Some(p), RenewalMode::PaperPrefix) => {
                let cfg = RenewalConfig {
                    cone_type,
                    l1,
                    mode: r.mode,
                    tail_buffer: tail,
                    prefix_path: self.sys.parse_word(p)?,
                };
                cfg.validate(&self.aut, &self.walk)?;
                Ok(cfg)
            }
            _ => RenewalConfig::build(&self.sys, &self.aut, &self.walk, r.mode, cone_type, l1, tail),
        }
    }

    /// The configuration with resolved renewal settings, for echoing.
    pub fn resolved_config(&self, renewal: &RenewalConfig) -> ExperimentConfig {
        let mut c = self.config.clone();
        c.renewal.cone_type = Some(self.aut.state_label(&self.sys, renewal.cone_type));
        c.renewal.l1 = Some(renewal.l1);
        c.renewal.tail_buffer = Some(renewal.tail_buffer);
        if renewal.mode == RenewalMode::PaperPrefix {
            c.renewal.prefix = Some(self.sys.format_word(&renewal.prefix_path));
        }
        c
    }

    pub fn words(&self, texts: &[String]) -> Result<Vec<Word>> {
        texts.iter().map(|t| self.sys.parse_word(t)).collect()
    }
}
