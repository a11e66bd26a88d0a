//! Simulation of the retracted walk on `W`.
//!
//! A step draws `w` with probability `p_w` and pushes the walker along a
//! reduced word of `w` letter by letter: an ascent is always taken, a
//! descent `s` with probability `1/q_s`.

mod state;

use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use state::{TrackedRoot, WalkState};

use crate::automaton::{CannonAutomaton, RootData};
use crate::coxeter::{CoxeterSystem, Gen, GroupElement, Word};
use crate::error::{Error, Result};
use crate::hecke::{BuildingSpec, WalkSpec};

/// Seed material of one trajectory: ChaCha8 keyed by `master_seed`, on
/// stream `stream_id`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RngSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngSpec {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        RngSpec { master_seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Observables of one run `u_0 = 1, u_1, ..., u_n`. Positions are not stored;
/// they are recovered by replaying the applied letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub rng: RngSpec,
    /// `l(u_i)`.
    pub lengths: Vec<u32>,
    /// Cone type of `u_i`.
    pub cone_types: Vec<u32>,
    /// Root-DFA state of `u_i`.
    pub root_states: Vec<u32>,
    letters: Vec<u8>,
    offsets: Vec<u32>,
}

impl Trajectory {
    fn new(rng: RngSpec, n: usize) -> Self {
        let mut t = Trajectory {
            rng,
            lengths: Vec::with_capacity(n + 1),
            cone_types: Vec::with_capacity(n + 1),
            root_states: Vec::with_capacity(n + 1),
            letters: Vec::with_capacity(n),
            offsets: Vec::with_capacity(n + 1),
        };
        t.offsets.push(0);
        t
    }

    fn record(&mut self, st: &WalkState, data: &RootData) {
        self.lengths.push(st.len() as u32);
        self.root_states.push(st.root_state());
        self.cone_types.push(st.cone_type(data) as u32);
    }

    /// Trajectory of a prescribed run: step `i` applies the letters
    /// `steps[i - 1]` as right multiplications, ascents and descents alike.
    pub fn from_letters(sys: &CoxeterSystem, data: &RootData, steps: &[Vec<Gen>]) -> Self {
        let mut st = WalkState::identity();
        let mut traj = Trajectory::new(RngSpec::new(0, 0), steps.len());
        traj.record(&st, data);
        for letters in steps {
            for &s in letters {
                st.apply(sys, data, s);
                traj.letters.push(s as u8);
            }
            traj.offsets.push(traj.letters.len() as u32);
            traj.record(&st, data);
        }
        traj
    }

    /// Number of steps `n`.
    pub fn steps(&self) -> usize {
        self.lengths.len() - 1
    }

    pub fn final_length(&self) -> usize {
        *self.lengths.last().expect("trajectories contain u_0") as usize
    }

    /// Letters `s` applied as `u <- u s` between `u_{i-1}` and `u_i`.
    pub fn letters_into(&self, i: usize) -> impl Iterator<Item = Gen> + '_ {
        let (a, b) = (self.offsets[i - 1] as usize, self.offsets[i] as usize);
        self.letters[a..b].iter().map(|&s| s as Gen)
    }

    /// All letters applied between `u_i` and `u_j`, `i <= j`.
    pub fn letters_between(&self, i: usize, j: usize) -> impl Iterator<Item = Gen> + '_ {
        let (a, b) = (self.offsets[i] as usize, self.offsets[j] as usize);
        self.letters[a..b].iter().map(|&s| s as Gen)
    }

    /// Reduced words of `u_0, ..., u_n`.
    pub fn positions(&self, sys: &CoxeterSystem, data: &RootData) -> Vec<Word> {
        let mut st = WalkState::identity();
        let mut out = Vec::with_capacity(self.lengths.len());
        out.push(Vec::new());
        for i in 1..self.lengths.len() {
            for s in self.letters_into(i) {
                st.apply(sys, data, s);
            }
            out.push(st.word().to_vec());
        }
        out
    }

    /// `u_i` as a matrix, by replay.
    pub fn element_at(&self, sys: &CoxeterSystem, i: usize) -> GroupElement {
        let mut g = sys.identity();
        for s in self.letters_between(0, i) {
            g.right_mul_gen(sys, s);
        }
        g
    }

    /// ShortLex normal forms of every position.
    pub fn normal_forms(&self, sys: &CoxeterSystem) -> Vec<Word> {
        let mut g = sys.identity();
        let mut out = vec![Vec::new()];
        for i in 1..self.lengths.len() {
            for s in self.letters_into(i) {
                g.right_mul_gen(sys, s);
            }
            out.push(sys.shortlex_nf(&g));
        }
        out
    }

    /// CSV with columns `step,length,cone_type` and optionally `nf_word`.
    pub fn to_csv(&self, sys: &CoxeterSystem, with_words: bool) -> String {
        let words = with_words.then(|| self.normal_forms(sys));
        let mut out = String::from(if with_words {
            "step,length,cone_type,nf_word\n"
        } else {
            "step,length,cone_type\n"
        });
        for i in 0..self.lengths.len() {
            let _ = write!(out, "{i},{},{}", self.lengths[i], self.cone_types[i]);
            if let Some(w) = &words {
                let _ = write!(out, ",{}", sys.format_word(&w[i]));
            }
            out.push('\n');
        }
        out
    }
}

/// Shared, read-only sampler for one building and step law.
pub struct Simulator<'a> {
    sys: &'a CoxeterSystem,
    data: &'a RootData,
    q: Vec<u64>,
    words: Vec<Word>,
    cum: Vec<f64>,
    cum_exact: Vec<BigRational>,
}

const GUARD: f64 = 1.0 / (1u64 << 40) as f64;
const UNIT_BITS: u32 = 53;

impl<'a> Simulator<'a> {
    pub fn new(
        sys: &'a CoxeterSystem,
        aut: &'a CannonAutomaton,
        b: &BuildingSpec,
        walk: &WalkSpec,
    ) -> Result<Self> {
        if sys.rank() > u8::MAX as usize {
            return Err(Error::InvalidInput("rank above 255 is not supported by the simulator".into()));
        }
        let data = aut.require_roots()?;
        let mut acc = BigRational::from_integer(BigInt::from(0));
        let mut cum_exact = Vec::new();
        for (_, p) in walk.steps() {
            acc += p;
            cum_exact.push(acc.clone());
        }
        let mut cum: Vec<f64> = cum_exact.iter().map(rational_to_f64).collect();
        *cum.last_mut().expect("walk support is non-empty") = 1.0;
        Ok(Simulator {
            sys,
            data,
            q: b.params().to_vec(),
            words: walk.steps().iter().map(|(w, _)| w.clone()).collect(),
            cum,
            cum_exact,
        })
    }

    pub fn system(&self) -> &CoxeterSystem {
        self.sys
    }

    pub fn root_data(&self) -> &RootData {
        self.data
    }

    /// Index of the drawn support element.
    fn draw<R: Rng>(&self, rng: &mut R) -> usize {
        let u: u64 = rng.gen::<u64>() >> (64 - UNIT_BITS);
        let x = u as f64 / (1u64 << UNIT_BITS) as f64;
        let i = self.cum.partition_point(|&c| c <= x);
        let near = |j: usize| (self.cum[j] - x).abs() < GUARD;
        if !near(i) && (i == 0 || !near(i - 1)) {
            return i;
        }
        let exact = BigRational::new(BigInt::from(u), BigInt::from(1u64) << UNIT_BITS);
        self.cum_exact
            .iter()
            .position(|c| &exact < c)
            .expect("the last cumulative value is 1")
    }

    /// One step from `st`, pushing the applied letters.
    fn advance<R: Rng>(&self, st: &mut WalkState, rng: &mut R, applied: &mut Vec<u8>) {
        let w = &self.words[self.draw(rng)];
        for &s in w {
            if st.is_ascent(self.data, s) || self.q[s] == 1 || rng.gen_range(0..self.q[s]) == 0 {
                st.apply(self.sys, self.data, s);
                applied.push(s as u8);
            }
        }
    }

    /// One step of the retracted walk from `u`.
    pub fn step<R: Rng>(&self, u: &GroupElement, rng: &mut R) -> GroupElement {
        let mut st = WalkState::from_reduced(self.data, u.shortlex_nf(self.sys)).expect("normal forms are reduced");
        let mut applied = Vec::new();
        self.advance(&mut st, rng, &mut applied);
        self.sys.word_to_element(st.word())
    }

    /// One step applied in place.
    pub fn step_word<R: Rng>(&self, st: &mut WalkState, rng: &mut R) {
        let mut applied = Vec::new();
        self.advance(st, rng, &mut applied);
    }

    pub fn simulate(&self, n: usize, spec: RngSpec) -> Trajectory {
        let mut rng = spec.rng();
        let mut st = WalkState::identity();
        let mut traj = Trajectory::new(spec, n);
        traj.record(&st, self.data);
        for _ in 0..n {
            self.advance(&mut st, &mut rng, &mut traj.letters);
            traj.offsets.push(traj.letters.len() as u32);
            traj.record(&st, self.data);
        }
        traj
    }

    /// `m` trajectories on streams `0..m`; the result does not depend on
    /// thread scheduling.
    pub fn batch_simulate(&self, m: usize, n: usize, master_seed: u64) -> Vec<Trajectory> {
        (0..m as u64)
            .into_par_iter()
            .map(|id| self.simulate(n, RngSpec::new(master_seed, id)))
            .collect()
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    crate::field::bigint_to_f64(r.numer()) / crate::field::bigint_to_f64(r.denom())
}
