//! Cone types and the Cannon automaton.
//!
//! The generic construction runs the minimal-root DFA and minimizes it; the
//! explicit constructions in [`appendix`] resolve appends through known
//! identifications of cone types and serve as an independent check.

pub mod appendix;
mod cone;
mod export;
mod roots;

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

pub use appendix::appendix_automaton;
pub use cone::{boundary_depth, depth_in_cone, find_deep_subcone, in_cone, BoundaryDepth, DeepSubcone};
pub use roots::{build_minimal_roots, MinimalRoots, RootDfa, RootMove, DEFAULT_ROOT_CAP};

use crate::coxeter::{CoxeterSystem, Gen, GroupElement, Word};
use crate::error::{Error, Result};

/// Root-level data kept by the generic construction.
#[derive(Debug)]
pub struct RootData {
    pub minimal: MinimalRoots,
    pub dfa: RootDfa,
    /// Cone type of each root-DFA state.
    pub class_of: Vec<usize>,
}

/// Minimal DFA of the geodesic language. States are cone types, numbered in
/// ShortLex order of their least representative; state 0 is `T(e)`.
#[derive(Debug)]
pub struct CannonAutomaton {
    labels: Vec<String>,
    trans: Vec<Vec<Option<usize>>>,
    reps: Vec<Word>,
    recurrent: Vec<bool>,
    scc: Vec<usize>,
    roots: Option<RootData>,
}

/// Verdict of [`CannonAutomaton::strong_connectivity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connectivity {
    pub strongly_connected: bool,
    /// Recurrent `(from, to)` with no path from `from` to `to`.
    pub witness: Option<(usize, usize)>,
}

/// Generic construction from the minimal roots.
pub fn build_cannon(sys: &CoxeterSystem) -> Result<CannonAutomaton> {
    build_cannon_with_cap(sys, DEFAULT_ROOT_CAP)
}

pub fn build_cannon_with_cap(sys: &CoxeterSystem, root_cap: usize) -> Result<CannonAutomaton> {
    let minimal = build_minimal_roots(sys, root_cap)?;
    let dfa = RootDfa::build(sys, &minimal);
    let trans: Vec<Vec<Option<usize>>> = dfa
        .transitions()
        .iter()
        .map(|row| row.iter().map(|t| t.map(|x| x as usize)).collect())
        .collect();
    let (mut aut, class_of) = CannonAutomaton::minimize(sys.labels().to_vec(), &trans);
    aut.roots = Some(RootData {
        minimal,
        dfa,
        class_of,
    });
    Ok(aut)
}

impl CannonAutomaton {
    /// Minimizes a DFA (state 0 is the start, every state accepting, missing
    /// transitions go to an implicit dead state) by partition refinement, then
    /// renumbers the classes in ShortLex order of their representatives.
    /// Returns the automaton and the class of each input state.
    pub fn minimize(labels: Vec<String>, trans: &[Vec<Option<usize>>]) -> (Self, Vec<usize>) {
        let n = trans.len();
        let k = labels.len();
        let mut class = vec![0usize; n];
        let mut count = 1;
        loop {
            let mut sig_index: std::collections::HashMap<Vec<usize>, usize> = Default::default();
            let mut next = vec![0usize; n];
            for q in 0..n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q]);
                for t in &trans[q] {
                    sig.push(t.map_or(usize::MAX, |x| class[x]));
                }
                let len = sig_index.len();
                next[q] = *sig_index.entry(sig).or_insert(len);
            }
            let new_count = sig_index.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // quotient, then canonical ShortLex renumbering by BFS from the start
        let mut qtrans = vec![vec![None; k]; count];
        for q in 0..n {
            for (s, t) in trans[q].iter().enumerate() {
                qtrans[class[q]][s] = t.map(|x| class[x]);
            }
        }
        let mut order = vec![usize::MAX; count];
        let mut reps: Vec<Word> = Vec::new();
        let mut queue = VecDeque::new();
        order[class[0]] = 0;
        reps.push(Vec::new());
        queue.push_back(class[0]);
        while let Some(c) = queue.pop_front() {
            for s in 0..k {
                if let Some(d) = qtrans[c][s] {
                    if order[d] == usize::MAX {
                        order[d] = reps.len();
                        let mut w = reps[order[c]].clone();
                        w.push(s);
                        reps.push(w);
                        queue.push_back(d);
                    }
                }
            }
        }
        let m = reps.len();
        let mut ftrans = vec![vec![None; k]; m];
        for c in 0..count {
            if order[c] == usize::MAX {
                continue;
            }
            for s in 0..k {
                ftrans[order[c]][s] = qtrans[c][s].map(|d| order[d]);
            }
        }
        let class_of = class.iter().map(|&c| order[c]).collect();
        let mut aut = CannonAutomaton {
            labels,
            trans: ftrans,
            reps,
            recurrent: Vec::new(),
            scc: Vec::new(),
            roots: None,
        };
        aut.compute_components();
        (aut, class_of)
    }

    fn compute_components(&mut self) {
        let n = self.trans.len();
        let mut g: DiGraph<(), ()> = DiGraph::new();
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for q in 0..n {
            for t in self.trans[q].iter().flatten() {
                g.add_edge(nodes[q], nodes[*t], ());
            }
        }
        let comps = tarjan_scc(&g);
        let mut scc = vec![0; n];
        let mut recurrent = vec![false; n];
        for (i, comp) in comps.iter().enumerate() {
            for v in comp {
                scc[v.index()] = i;
            }
            if comp.len() > 1 {
                for v in comp {
                    recurrent[v.index()] = true;
                }
            }
        }
        for q in 0..n {
            if self.trans[q].iter().flatten().any(|&t| t == q) {
                recurrent[q] = true;
            }
        }
        self.scc = scc;
        self.recurrent = recurrent;
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn step(&self, q: usize, s: Gen) -> Option<usize> {
        self.trans[q][s]
    }

    pub fn transitions(&self) -> &[Vec<Option<usize>>] {
        &self.trans
    }

    /// ShortLex-least word of the cone type.
    pub fn representative(&self, q: usize) -> &[Gen] {
        &self.reps[q]
    }

    pub fn is_recurrent(&self, q: usize) -> bool {
        self.recurrent[q]
    }

    pub fn recurrent_states(&self) -> Vec<usize> {
        (0..self.num_states()).filter(|&q| self.recurrent[q]).collect()
    }

    pub fn transient_states(&self) -> Vec<usize> {
        (0..self.num_states()).filter(|&q| !self.recurrent[q]).collect()
    }

    pub fn scc_of(&self, q: usize) -> usize {
        self.scc[q]
    }

    pub fn root_data(&self) -> Option<&RootData> {
        self.roots.as_ref()
    }

    /// Root data, which only the generic construction carries.
    pub fn require_roots(&self) -> Result<&RootData> {
        self.roots
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("automaton has no minimal-root data".into()))
    }

    /// State reached by reading the word, `None` if it is not reduced.
    pub fn run(&self, word: &[Gen]) -> Option<usize> {
        word.iter().try_fold(0, |q, &s| self.step(q, s))
    }

    pub fn accepts(&self, word: &[Gen]) -> bool {
        self.run(word).is_some()
    }

    /// Cone type of a reduced word.
    pub fn cone_type_of(&self, sys: &CoxeterSystem, word: &[Gen]) -> Result<usize> {
        self.run(word)
            .ok_or_else(|| Error::NotReduced(sys.format_word(word)))
    }

    pub fn cone_type_of_element(&self, sys: &CoxeterSystem, g: &GroupElement) -> usize {
        self.run(g.shortlex_nf(sys))
            .expect("normal forms are reduced")
    }

    /// State whose ShortLex representative is `word`.
    pub fn state_with_representative(&self, word: &[Gen]) -> Option<usize> {
        self.reps.iter().position(|r| r == word)
    }

    /// Geodesic words of each length `0..=n`, from the transfer matrix.
    pub fn geodesic_counts(&self, n: usize) -> Vec<u128> {
        let mut v = vec![0u128; self.num_states()];
        v[0] = 1;
        let mut out = vec![1u128];
        for _ in 0..n {
            let mut w = vec![0u128; self.num_states()];
            for (q, &c) in v.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for t in self.trans[q].iter().flatten() {
                    w[*t] += c;
                }
            }
            out.push(w.iter().sum());
            v = w;
        }
        out
    }

    /// Sphere sizes `|S(1, k)|` for `k = 0..=n`, counted on the ShortLex
    /// restriction of the root DFA.
    pub fn sphere_sizes(&self, sys: &CoxeterSystem, n: usize) -> Result<Vec<u128>> {
        let data = self.require_roots()?;
        Ok(RootDfa::shortlex(sys, &data.minimal).word_counts(n))
    }

    pub fn reachable_from(&self, q: usize) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![q];
        seen[q] = true;
        while let Some(p) = stack.pop() {
            for t in self.trans[p].iter().flatten() {
                if !seen[*t] {
                    seen[*t] = true;
                    stack.push(*t);
                }
            }
        }
        seen
    }

    /// Whether a path of length at least one leads from `a` to `b`.
    pub fn has_path(&self, a: usize, b: usize) -> bool {
        self.trans[a]
            .iter()
            .flatten()
            .any(|&t| self.reachable_from(t)[b])
    }

    /// The recurrent subgraph is one strongly connected component. On failure
    /// the witness is the first recurrent pair, in state order, with no path.
    pub fn strong_connectivity(&self) -> Connectivity {
        let rec = self.recurrent_states();
        for &a in &rec {
            let reach = self.reachable_from(a);
            for &b in &rec {
                if !reach[b] {
                    return Connectivity {
                        strongly_connected: false,
                        witness: Some((a, b)),
                    };
                }
            }
        }
        Connectivity {
            strongly_connected: !rec.is_empty(),
            witness: None,
        }
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strong_connectivity().strongly_connected
    }

    /// Labelled-digraph isomorphism fixing the start state. Both automata
    /// are reachable and deterministic, so a simultaneous traversal decides it.
    pub fn is_isomorphic(&self, other: &CannonAutomaton) -> bool {
        if self.num_states() != other.num_states() || self.rank() != other.rank() {
            return false;
        }
        let mut map = vec![usize::MAX; self.num_states()];
        let mut used = vec![false; other.num_states()];
        map[0] = 0;
        used[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(q) = queue.pop_front() {
            for s in 0..self.rank() {
                match (self.trans[q][s], other.trans[map[q]][s]) {
                    (None, None) => {}
                    (Some(a), Some(b)) => {
                        if map[a] == usize::MAX {
                            if used[b] {
                                return false;
                            }
                            map[a] = b;
                            used[b] = true;
                            queue.push_back(a);
                        } else if map[a] != b {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
        }
        true
    }

    pub fn state_label(&self, sys: &CoxeterSystem, q: usize) -> String {
        sys.format_word(&self.reps[q])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w334() -> CoxeterSystem {
        CoxeterSystem::triangle(4, 3, 3).unwrap()
    }

    #[test]
    fn triangle_334_has_eighteen_cone_types() {
        let sys = w334();
        let aut = build_cannon(&sys).unwrap();
        assert_eq!(aut.num_states(), 18);
        let transient: Vec<String> = aut
            .transient_states()
            .iter()
            .map(|&q| aut.state_label(&sys, q))
            .collect();
        assert_eq!(transient, vec!["e", "1", "2", "3"]);
        assert!(aut.is_strongly_connected());
    }

    #[test]
    fn figure_path_exists() {
        let sys = w334();
        let aut = build_cannon(&sys).unwrap();
        let path = ["121", "1212", "12123", "232", "2321", "212", "23"];
        let states: Vec<usize> = path
            .iter()
            .map(|w| aut.cone_type_of(&sys, &sys.parse_word(w).unwrap()).unwrap())
            .collect();
        for (w, &q) in path.iter().zip(&states) {
            assert_eq!(aut.state_label(&sys, q), *w);
        }
        for pair in states.windows(2) {
            assert!(aut.transitions()[pair[0]].contains(&Some(pair[1])));
        }
    }

    #[test]
    fn isomorphism_is_reflexive_and_detects_differences() {
        let a = build_cannon(&w334()).unwrap();
        let b = build_cannon(&w334()).unwrap();
        assert!(a.is_isomorphic(&b));
        let c = build_cannon(&CoxeterSystem::triangle(5, 3, 3).unwrap()).unwrap();
        assert!(!a.is_isomorphic(&c));
    }

    #[test]
    fn word_and_sphere_counts() {
        let sys = w334();
        let aut = build_cannon(&sys).unwrap();
        // two braid relations of length 3 give 12 geodesics for 10 elements
        assert_eq!(aut.geodesic_counts(3), [1, 3, 6, 12]);
        assert_eq!(aut.sphere_sizes(&sys, 3).unwrap(), [1, 3, 6, 10]);
    }
}
