use crate::automaton::{RootData, RootMove};
use crate::coxeter::{CoxeterSystem, Gen, IntRoot, Root};

/// A positive or negative root followed under reflections, kept as a
/// minimal-root index while possible and as integer coordinates otherwise.
#[derive(Clone, Debug)]
pub enum TrackedRoot {
    Minimal(u32),
    Int(IntRoot),
    Exact(Root),
}

impl TrackedRoot {
    /// `gamma <- sigma_s(gamma)`.
    pub fn reflect(&mut self, sys: &CoxeterSystem, data: &RootData, s: Gen) {
        match self {
            TrackedRoot::Minimal(i) => match data.minimal.apply(*i, s) {
                RootMove::To(j) => *i = j,
                RootMove::Negative => {
                    let mut v = sys.int_simple_root(s);
                    v.iter_mut().for_each(|x| *x = -*x);
                    *self = TrackedRoot::Int(v);
                }
                RootMove::Leaves => {
                    let mut v = data.minimal.int_root(*i).clone();
                    *self = if sys.int_reflect(s, &mut v) {
                        TrackedRoot::Int(v)
                    } else {
                        TrackedRoot::Exact(sys.reflect(s, data.minimal.root(*i)))
                    };
                }
            },
            TrackedRoot::Int(v) => {
                if !sys.int_reflect(s, v) {
                    let r = sys.reflect(s, &sys.int_to_root(v));
                    *self = TrackedRoot::Exact(r);
                }
            }
            TrackedRoot::Exact(r) => sys.reflect_in_place(s, r),
        }
    }

    pub fn is_simple(&self, sys: &CoxeterSystem, data: &RootData, s: Gen) -> bool {
        match self {
            TrackedRoot::Minimal(i) => *i == data.minimal.simple(s),
            TrackedRoot::Int(v) => sys.int_is_simple(v, s),
            TrackedRoot::Exact(r) => sys.is_simple_root(r, s),
        }
    }

    pub fn sign(&self, sys: &CoxeterSystem) -> i8 {
        match self {
            TrackedRoot::Minimal(_) => 1,
            TrackedRoot::Int(v) => sys.int_root_sign(v),
            TrackedRoot::Exact(r) => sys.root_sign(r),
        }
    }

    /// `min(dp(gamma), cap)` for a positive root.
    pub fn depth(&self, sys: &CoxeterSystem, data: &RootData, cap: usize) -> usize {
        match self {
            TrackedRoot::Minimal(i) => (data.minimal.depth(*i) as usize).min(cap),
            TrackedRoot::Int(v) => sys.int_root_depth(v, cap),
            TrackedRoot::Exact(r) => sys.root_depth(r, cap),
        }
    }
}

/// Current position as a reduced word together with the root-DFA state
/// after each prefix. Every move is a right multiplication `u <- u s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkState {
    word: Vec<Gen>,
    stack: Vec<u32>,
}

impl Default for WalkState {
    fn default() -> Self {
        Self::identity()
    }
}

impl WalkState {
    pub fn identity() -> Self {
        WalkState {
            word: Vec::new(),
            stack: vec![0],
        }
    }

    /// `None` when the word is not reduced.
    pub fn from_reduced(data: &RootData, word: &[Gen]) -> Option<Self> {
        let mut st = Self::identity();
        for &s in word {
            let q = data.dfa.step(st.root_state(), s)?;
            st.word.push(s);
            st.stack.push(q);
        }
        Some(st)
    }

    pub fn word(&self) -> &[Gen] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn root_state(&self) -> u32 {
        *self.stack.last().expect("stack holds the identity state")
    }

    pub fn cone_type(&self, data: &RootData) -> usize {
        data.class_of[self.root_state() as usize]
    }

    pub fn is_ascent(&self, data: &RootData, s: Gen) -> bool {
        data.dfa.step(self.root_state(), s).is_some()
    }

    /// `u <- u s`. Returns `true` on an ascent.
    pub fn apply(&mut self, sys: &CoxeterSystem, data: &RootData, s: Gen) -> bool {
        if let Some(q) = data.dfa.step(self.root_state(), s) {
            self.word.push(s);
            self.stack.push(q);
            return true;
        }
        let j = self.exchange_position(sys, data, s);
        self.word.remove(j);
        self.stack.truncate(j + 1);
        for i in j..self.word.len() {
            let q = data
                .dfa
                .step(self.root_state(), self.word[i])
                .expect("a deletion keeps the word reduced");
            self.stack.push(q);
        }
        false
    }

    /// For a right descent `s` of `u = s_1 ... s_l`, the `j` with
    /// `u s = s_1 ... s_{j-1} s_{j+1} ... s_l`: the last `j` (walking back)
    /// with `s_{j+1} ... s_l (alpha_s) = alpha_{s_j}`.
    fn exchange_position(&self, sys: &CoxeterSystem, data: &RootData, s: Gen) -> usize {
        let mut beta = TrackedRoot::Minimal(data.minimal.simple(s));
        for j in (0..self.word.len()).rev() {
            let t = self.word[j];
            if beta.is_simple(sys, data, t) {
                return j;
            }
            beta.reflect(sys, data, t);
        }
        unreachable!("s is a right descent, so the exchange condition applies")
    }
}
