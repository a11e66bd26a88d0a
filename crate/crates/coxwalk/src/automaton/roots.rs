use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::coxeter::{CoxeterSystem, Gen, IntRoot, Root};
use crate::error::{Error, Result};

/// What `sigma_s` does to a minimal root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RootMove {
    /// The root is `alpha_s` itself and becomes negative.
    Negative,
    /// The image is again minimal, with this index.
    To(u32),
    /// The image dominates `alpha_s` and leaves the minimal set.
    Leaves,
}

/// The finite set of minimal roots with its reflection table.
#[derive(Debug)]
pub struct MinimalRoots {
    roots: Vec<Root>,
    int_roots: Vec<IntRoot>,
    simple: Vec<u32>,
    table: Vec<Vec<RootMove>>,
    depth: Vec<u32>,
}

pub const DEFAULT_ROOT_CAP: usize = 100_000;

/// Worklist closure from the simple roots. For a minimal root `beta != alpha_s`
/// the image `sigma_s(beta)` is minimal iff `B(alpha_s, beta) > -1`.
pub fn build_minimal_roots(sys: &CoxeterSystem, cap: usize) -> Result<MinimalRoots> {
    let n = sys.rank();
    let mut roots: Vec<Root> = (0..n).map(|s| sys.simple_root(s)).collect();
    let mut index: HashMap<Root, u32> = roots.iter().cloned().zip(0..).collect();
    let simple: Vec<u32> = (0..n as u32).collect();
    let mut table: Vec<Vec<RootMove>> = Vec::new();
    let minus_two = sys.field().from_int(-2);
    let mut i = 0;
    while i < roots.len() {
        let beta = roots[i].clone();
        let mut row = Vec::with_capacity(n);
        for s in 0..n {
            if i == s {
                row.push(RootMove::Negative);
                continue;
            }
            let b = sys.two_b(s, &beta);
            if sys.field().cmp(&b, &minus_two).is_gt() {
                let image = sys.reflect(s, &beta);
                let next = roots.len() as u32;
                let idx = *index.entry(image.clone()).or_insert_with(|| {
                    roots.push(image);
                    next
                });
                if roots.len() > cap {
                    return Err(Error::RootCap(cap));
                }
                row.push(RootMove::To(idx));
            } else {
                row.push(RootMove::Leaves);
            }
        }
        table.push(row);
        i += 1;
    }
    let int_roots: Vec<IntRoot> = roots
        .iter()
        .map(|r| sys.int_root(r).expect("minimal roots have small integral coordinates"))
        .collect();
    let depth = int_roots
        .iter()
        .map(|r| sys.int_root_depth(r, usize::MAX) as u32)
        .collect();
    Ok(MinimalRoots {
        roots,
        int_roots,
        simple,
        table,
        depth,
    })
}

impl MinimalRoots {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn root(&self, i: u32) -> &Root {
        &self.roots[i as usize]
    }

    pub fn int_root(&self, i: u32) -> &IntRoot {
        &self.int_roots[i as usize]
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn simple(&self, s: Gen) -> u32 {
        self.simple[s]
    }

    pub fn apply(&self, i: u32, s: Gen) -> RootMove {
        self.table[i as usize][s]
    }

    pub fn depth(&self, i: u32) -> u32 {
        self.depth[i as usize]
    }
}

/// DFA whose state after a reduced word `w` is the set of minimal roots made
/// negative by `w^-1`, stored as sorted root indices. State 0 is the identity.
#[derive(Debug)]
pub struct RootDfa {
    states: Vec<Vec<u32>>,
    trans: Vec<Vec<Option<u32>>>,
}

impl RootDfa {
    pub fn build(sys: &CoxeterSystem, roots: &MinimalRoots) -> RootDfa {
        Self::build_with(sys, |state, s| Self::successor(roots, state, s))
    }

    /// Restriction to ShortLex normal forms: reading `s` also records
    /// `sigma_s(alpha_t)` for `t < s` with `m_st` finite, which rules out
    /// any later letter that would allow a lexicographically smaller word.
    /// Exactly one accepted word per element.
    pub fn shortlex(sys: &CoxeterSystem, roots: &MinimalRoots) -> RootDfa {
        Self::build_with(sys, |state, s| {
            let mut next = Self::successor(roots, state, s)?;
            for t in 0..s {
                if let RootMove::To(c) = roots.apply(roots.simple(t), s) {
                    next.push(c);
                }
            }
            next.sort_unstable();
            next.dedup();
            Some(next)
        })
    }

    fn build_with(sys: &CoxeterSystem, succ: impl Fn(&[u32], Gen) -> Option<Vec<u32>>) -> RootDfa {
        let n = sys.rank();
        let mut states: Vec<Vec<u32>> = vec![Vec::new()];
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        index.insert(Vec::new(), 0);
        let mut trans: Vec<Vec<Option<u32>>> = Vec::new();
        let mut queue = VecDeque::from([0u32]);
        while let Some(q) = queue.pop_front() {
            let mut row = vec![None; n];
            for (s, slot) in row.iter_mut().enumerate() {
                let Some(next) = succ(&states[q as usize], s) else {
                    continue;
                };
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = states.len() as u32;
                        index.insert(next.clone(), id);
                        states.push(next);
                        queue.push_back(id);
                        id
                    }
                };
                *slot = Some(id);
            }
            // states are discovered in BFS order, so rows line up with ids
            debug_assert_eq!(trans.len(), q as usize);
            trans.push(row);
        }
        RootDfa { states, trans }
    }

    /// `D(ws) = {alpha_s} + (sigma_s D(w) restricted to minimal roots)`,
    /// or `None` if `alpha_s` is already in `D(w)`.
    pub fn successor(roots: &MinimalRoots, state: &[u32], s: Gen) -> Option<Vec<u32>> {
        let a = roots.simple(s);
        if state.binary_search(&a).is_ok() {
            return None;
        }
        let mut next = vec![a];
        for &b in state {
            if let RootMove::To(c) = roots.apply(b, s) {
                next.push(c);
            }
        }
        next.sort_unstable();
        next.dedup();
        Some(next)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, q: u32) -> &[u32] {
        &self.states[q as usize]
    }

    pub fn step(&self, q: u32, s: Gen) -> Option<u32> {
        self.trans[q as usize][s]
    }

    pub fn transitions(&self) -> &[Vec<Option<u32>>] {
        &self.trans
    }

    pub fn run(&self, word: &[Gen]) -> Option<u32> {
        word.iter().try_fold(0u32, |q, &s| self.step(q, s))
    }

    /// Accepted words of each length `0..=n`.
    pub fn word_counts(&self, n: usize) -> Vec<u128> {
        let mut v = vec![0u128; self.num_states()];
        v[0] = 1;
        let mut out = vec![1u128];
        for _ in 0..n {
            let mut w = vec![0u128; self.num_states()];
            for (q, &c) in v.iter().enumerate() {
                for t in self.trans[q].iter().flatten() {
                    w[*t as usize] += c;
                }
            }
            out.push(w.iter().sum());
            v = w;
        }
        out
    }
}
