//! Renewal times of a simulated trajectory.
//!
//! A candidate time `k` has `T(u_k) = T`. In `enter_and_stay` mode it
//! qualifies when every later position stays in `C(u_k)` and, from the first
//! time `tau_k` the walk is in the `L1`-interior of `C(u_k)`, never leaves
//! that interior again before the horizon. In `paper_prefix` mode the walk
//! must first follow `u_k pi` letter by letter (`pi` a path to a deep
//! sub-cone) and from `tau_k = k + |pi|` on stay in the `L1`-interior.
//!
//! Membership and depth are read off the roots `gamma = u_i^-1 u_k beta`,
//! `beta` in `D(u_k)`: `u_i` is in the cone iff all are positive, and its
//! distance to the complement is `min dp(gamma)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automaton::{find_deep_subcone, CannonAutomaton, RootData};
use crate::coxeter::{CoxeterSystem, Word};
use crate::error::{Error, Result};
use crate::hecke::WalkSpec;
use crate::walk::{TrackedRoot, Trajectory, WalkState};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RenewalMode {
    PaperPrefix,
    #[default]
    EnterAndStay,
}

impl FromStr for RenewalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper_prefix" => Ok(RenewalMode::PaperPrefix),
            "enter_and_stay" => Ok(RenewalMode::EnterAndStay),
            _ => Err(Error::Config(format!(
                "unknown renewal mode {s:?} (expected paper_prefix or enter_and_stay)"
            ))),
        }
    }
}

impl fmt::Display for RenewalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RenewalMode::PaperPrefix => "paper_prefix",
            RenewalMode::EnterAndStay => "enter_and_stay",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RenewalConfig {
    pub cone_type: usize,
    pub l1: usize,
    pub mode: RenewalMode,
    pub tail_buffer: usize,
    /// Path from the cone root to the deep sub-cone root (`paper_prefix` only).
    pub prefix_path: Word,
}

impl RenewalConfig {
    /// `L0 + 2 max m_st` over finite labels.
    pub fn default_l1(sys: &CoxeterSystem, walk: &WalkSpec) -> usize {
        walk.l0() + 2 * sys.max_finite_order() as usize
    }

    pub fn default_tail_buffer(horizon: usize) -> usize {
        horizon / 5
    }

    /// The recurrent cone type with the ShortLex-least representative.
    pub fn default_cone_type(aut: &CannonAutomaton) -> Result<usize> {
        aut.recurrent_states()
            .first()
            .copied()
            .ok_or_else(|| Error::InvalidInput("the automaton has no recurrent cone type".into()))
    }

    /// Defaults for a horizon: first recurrent type, default `L1`, 20% tail
    /// buffer. `paper_prefix` mode also searches the prefix path.
    pub fn with_defaults(
        sys: &CoxeterSystem,
        aut: &CannonAutomaton,
        walk: &WalkSpec,
        mode: RenewalMode,
        horizon: usize,
    ) -> Result<Self> {
        let cone_type = Self::default_cone_type(aut)?;
        Self::build(sys, aut, walk, mode, cone_type, Self::default_l1(sys, walk), Self::default_tail_buffer(horizon))
    }

    pub fn build(
        sys: &CoxeterSystem,
        aut: &CannonAutomaton,
        walk: &WalkSpec,
        mode: RenewalMode,
        cone_type: usize,
        l1: usize,
        tail_buffer: usize,
    ) -> Result<Self> {
        let prefix_path = match mode {
            RenewalMode::EnterAndStay => Vec::new(),
            RenewalMode::PaperPrefix => prefix_for(sys, aut, cone_type, l1)?,
        };
        let cfg = RenewalConfig {
            cone_type,
            l1,
            mode,
            tail_buffer,
            prefix_path,
        };
        cfg.validate(aut, walk)?;
        Ok(cfg)
    }

    pub fn validate(&self, aut: &CannonAutomaton, walk: &WalkSpec) -> Result<()> {
        if self.cone_type >= aut.num_states() || !aut.is_recurrent(self.cone_type) {
            return Err(Error::Config(format!("cone type {} is not recurrent", self.cone_type)));
        }
        if self.l1 < walk.l0() {
            return Err(Error::Config(format!("L1 = {} is below L0 = {}", self.l1, walk.l0())));
        }
        if self.mode == RenewalMode::PaperPrefix {
            let data = aut.require_roots()?;
            let q = data
                .dfa
                .run(aut.representative(self.cone_type))
                .and_then(|q| self.prefix_path.iter().try_fold(q, |q, &s| data.dfa.step(q, s)));
            if q.map(|q| data.class_of[q as usize]) != Some(self.cone_type) {
                return Err(Error::Config("prefix path does not return to the cone type".into()));
            }
        }
        Ok(())
    }
}

/// Deep sub-cone path, certified to depth `L1 + 1` along all extensions.
pub fn prefix_for(sys: &CoxeterSystem, aut: &CannonAutomaton, cone_type: usize, l1: usize) -> Result<Word> {
    Ok(find_deep_subcone(sys, aut, cone_type, l1, l1 + 1, 4 * (l1 + 2))?.prefix)
}

/// Renewal times of one trajectory and the increments between them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RenewalSeries {
    pub times: Vec<usize>,
    /// `l(u_{R_i})`.
    pub root_lengths: Vec<usize>,
    /// `R_{i+1} - R_i`.
    pub increments_time: Vec<usize>,
    /// `d(u_{R_i}, u_{R_{i+1}})`, computed from the letters in between.
    pub increments_dist: Vec<usize>,
    pub candidates: usize,
    pub diagnostic: Option<String>,
}

impl RenewalSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `l(u_{R_n}) = l(u_{R_1}) + sum_{i<n} d(u_{R_i}, u_{R_{i+1}})` for every `n`.
    pub fn is_additive(&self) -> bool {
        let Some(&first) = self.root_lengths.first() else { return true };
        let mut acc = first;
        self.root_lengths[1..]
            .iter()
            .zip(&self.increments_dist)
            .all(|(&l, &d)| {
                acc += d;
                acc == l
            })
    }

    /// Each root lies in the cone of the previous one.
    pub fn is_nested(&self) -> bool {
        self.root_lengths
            .windows(2)
            .zip(&self.increments_dist)
            .all(|(w, &d)| w[1] == w[0] + d)
    }
}

struct Scan<'a> {
    sys: &'a CoxeterSystem,
    data: &'a RootData,
    traj: &'a Trajectory,
    cfg: &'a RenewalConfig,
    cap: usize,
}

const DEPTH_SLACK: usize = 16;

impl Scan<'_> {
    /// `tau_k` when `k` qualifies. Stops early at `tau_j` of a later
    /// qualifying `j` reached while inside the cone.
    fn check(&self, k: usize, anchors: &[bool]) -> Option<usize> {
        let (sys, data, l1) = (self.sys, self.data, self.cfg.l1);
        let n = self.traj.steps();
        let mut gammas: Vec<TrackedRoot> = data
            .dfa
            .state(self.traj.root_states[k])
            .iter()
            .map(|&b| TrackedRoot::Minimal(b))
            .collect();
        let mut lb: Vec<usize> = gammas.iter().map(|g| g.depth(sys, data, self.cap)).collect();
        let plen = self.cfg.prefix_path.len();
        let paper = self.cfg.mode == RenewalMode::PaperPrefix;
        let mut entered = None;
        for i in k..=n {
            if i > k {
                let mut letters = 0;
                for s in self.traj.letters_into(i) {
                    letters += 1;
                    for g in gammas.iter_mut() {
                        g.reflect(sys, data, s);
                    }
                }
                for d in lb.iter_mut() {
                    *d = d.saturating_sub(letters);
                }
            }
            if paper && i > k && i <= k + plen && !self.follows(i, self.cfg.prefix_path[i - k - 1]) {
                return None;
            }
            if paper && i < k + plen {
                continue;
            }
            for (g, d) in gammas.iter().zip(lb.iter_mut()) {
                if *d == 0 {
                    if g.sign(sys) < 0 {
                        return None;
                    }
                    *d = 1;
                }
            }
            if paper || entered.is_some() {
                for (g, d) in gammas.iter().zip(lb.iter_mut()) {
                    if *d <= l1 {
                        *d = g.depth(sys, data, self.cap);
                        if *d <= l1 {
                            return None;
                        }
                    }
                }
                entered.get_or_insert(i);
            } else {
                let mut deep = true;
                for (g, d) in gammas.iter().zip(lb.iter_mut()) {
                    if *d <= l1 {
                        *d = g.depth(sys, data, self.cap);
                        if *d <= l1 {
                            deep = false;
                            break;
                        }
                    }
                }
                if deep {
                    entered = Some(i);
                }
            }
            if entered.is_some() && anchors[i] {
                break;
            }
        }
        entered
    }

    /// Whether step `i` moves by exactly the generator `s`.
    fn follows(&self, i: usize, s: usize) -> bool {
        let mut st = WalkState::identity();
        for t in self.traj.letters_into(i) {
            st.apply(self.sys, self.data, t);
        }
        st.word() == [s]
    }
}

/// All renewal times of `traj` under `cfg`, in increasing order.
pub fn extract_renewals(
    sys: &CoxeterSystem,
    aut: &CannonAutomaton,
    traj: &Trajectory,
    cfg: &RenewalConfig,
) -> Result<RenewalSeries> {
    let data = aut.require_roots()?;
    let n = traj.steps();
    if cfg.tail_buffer >= n.max(1) {
        return Err(Error::Config(format!(
            "tail buffer {} is not below the horizon {n}",
            cfg.tail_buffer
        )));
    }
    let scan = Scan {
        sys,
        data,
        traj,
        cfg,
        cap: cfg.l1 + 1 + DEPTH_SLACK,
    };
    let last = n - cfg.tail_buffer;
    let mut anchors = vec![false; n + 1];
    let mut times = Vec::new();
    let mut candidates = 0;
    for k in (0..=n).rev() {
        if traj.cone_types[k] as usize != cfg.cone_type {
            continue;
        }
        if k <= last {
            candidates += 1;
        }
        if let Some(tau) = scan.check(k, &anchors) {
            anchors[tau] = true;
            if k <= last {
                times.push(k);
            }
        }
    }
    times.reverse();
    let root_lengths: Vec<usize> = times.iter().map(|&t| traj.lengths[t] as usize).collect();
    let increments_time: Vec<usize> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let increments_dist: Vec<usize> = times
        .windows(2)
        .map(|w| {
            let mut st = WalkState::identity();
            for s in traj.letters_between(w[0], w[1]) {
                st.apply(sys, data, s);
            }
            st.len()
        })
        .collect();
    let diagnostic = times.is_empty().then(|| {
        format!(
            "no renewal among {candidates} candidates; try a longer horizon or a smaller L1 (now {})",
            cfg.l1
        )
    });
    Ok(RenewalSeries {
        times,
        root_lengths,
        increments_time,
        increments_dist,
        candidates,
        diagnostic,
    })
}
