use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::CannonAutomaton;
use crate::coxeter::{CoxeterSystem, Gen, GroupElement, IntRoot, Word};
use crate::error::{Error, Result};

/// Distance from a cone element to the complement of the cone, capped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundaryDepth {
    /// `x` lies in `boundary_L C(u)` for this least `L` (0 when `x` is outside).
    Depth(usize),
    /// No exit within the cap: `x` is in the `L_max`-interior.
    Deeper,
}

/// `x in C(u)` iff `l(x) = l(u) + l(u^-1 x)`.
pub fn in_cone(sys: &CoxeterSystem, u: &GroupElement, x: &GroupElement) -> bool {
    sys.length(x) == sys.length(u) + sys.distance(u, x)
}

/// Least `L <= l_max` with `x` within distance `L` of `W \ C(u)`, by
/// breadth-first search from `x` over the Cayley graph.
pub fn boundary_depth(
    sys: &CoxeterSystem,
    u: &GroupElement,
    x: &GroupElement,
    l_max: usize,
) -> BoundaryDepth {
    if !in_cone(sys, u, x) {
        return BoundaryDepth::Depth(0);
    }
    let mut seen: HashSet<GroupElement> = HashSet::from([x.clone()]);
    let mut frontier = vec![x.clone()];
    for dist in 1..=l_max {
        let mut next = Vec::new();
        for g in &frontier {
            for s in 0..sys.rank() {
                let h = g.right_mul_gen_cloned(sys, s);
                if !seen.insert(h.clone()) {
                    continue;
                }
                if !in_cone(sys, u, &h) {
                    return BoundaryDepth::Depth(dist);
                }
                next.push(h);
            }
        }
        frontier = next;
    }
    BoundaryDepth::Deeper
}

/// Same quantity as [`boundary_depth`] computed from roots: with `y = u^-1 x`
/// and `D(u)` the minimal roots sent negative by `u^-1`, the distance is
/// `min dp(y^-1 beta)` over `beta` in `D(u)`.
pub fn depth_in_cone(
    sys: &CoxeterSystem,
    aut: &CannonAutomaton,
    u: &GroupElement,
    x: &GroupElement,
    l_max: usize,
) -> Result<BoundaryDepth> {
    let data = aut.require_roots()?;
    let q = data
        .dfa
        .run(u.shortlex_nf(sys))
        .expect("normal forms are reduced");
    let y = u.inverse().multiply(sys, x);
    let mut best = usize::MAX;
    for &b in data.dfa.state(q) {
        let gamma = y.apply_inverse(sys, data.minimal.root(b));
        if sys.root_sign(&gamma) < 0 {
            return Ok(BoundaryDepth::Depth(0));
        }
        best = best.min(sys.root_depth(&gamma, l_max + 1));
    }
    Ok(if best > l_max {
        BoundaryDepth::Deeper
    } else {
        BoundaryDepth::Depth(best)
    })
}

/// A deep sub-cone `C(v)`, `v = u x`, of the cone `C(u)` rooted at the
/// representative `u` of a cone type.
#[derive(Clone, Debug, Serialize)]
pub struct DeepSubcone {
    pub cone_type: usize,
    pub root: Word,
    /// The path `x` from `u` to `v`.
    pub prefix: Word,
    /// `v = u x`.
    pub deep_root: Word,
    pub l1: usize,
    pub search_depth: usize,
}

/// Finds `v = u x` with `T(v) = T` and every element of `C(v)` within
/// `search_depth` of `v` lying in the `L1`-interior of `C(u)`. Candidates `x`
/// are tried in ShortLex order up to length `max_prefix`.
pub fn find_deep_subcone(
    sys: &CoxeterSystem,
    aut: &CannonAutomaton,
    cone_type: usize,
    l1: usize,
    search_depth: usize,
    max_prefix: usize,
) -> Result<DeepSubcone> {
    let data = aut.require_roots()?;
    let root: Word = aut.representative(cone_type).to_vec();
    let q0 = data.dfa.run(&root).expect("representatives are reduced");
    let betas: Vec<IntRoot> = data
        .dfa
        .state(q0)
        .iter()
        .map(|&b| data.minimal.int_root(b).clone())
        .collect();
    // breadth-first over x, carrying gamma_beta = x^-1 beta
    let mut queue: VecDeque<(Word, u32, Vec<IntRoot>)> = VecDeque::from([(Vec::new(), q0, betas)]);
    while let Some((x, q, gammas)) = queue.pop_front() {
        if data.class_of[q as usize] == cone_type
            && certify(sys, aut, q, &gammas, l1, search_depth)
        {
            let mut deep_root = root.clone();
            deep_root.extend_from_slice(&x);
            return Ok(DeepSubcone {
                cone_type,
                root,
                prefix: x,
                deep_root,
                l1,
                search_depth,
            });
        }
        if x.len() >= max_prefix {
            continue;
        }
        for s in 0..sys.rank() {
            let Some(q2) = data.dfa.step(q, s) else { continue };
            let Some(g2) = reflect_all(sys, s, &gammas) else { continue };
            let mut x2 = x.clone();
            x2.push(s);
            queue.push_back((x2, q2, g2));
        }
    }
    Err(Error::SearchExhausted(format!(
        "no certified sub-cone of type {} with L1 = {l1} and prefix length <= {max_prefix}; \
         increase the prefix bound or lower search_depth",
        aut.state_label(sys, cone_type)
    )))
}

fn reflect_all(sys: &CoxeterSystem, s: Gen, gammas: &[IntRoot]) -> Option<Vec<IntRoot>> {
    let mut out = gammas.to_vec();
    for g in out.iter_mut() {
        if !sys.int_reflect(s, g) {
            return None;
        }
    }
    Some(out)
}

/// Every reduced extension `y` of length `<= search_depth` (paths in the root
/// DFA from `q`) keeps `min dp((x y)^-1 beta) > l1`.
fn certify(
    sys: &CoxeterSystem,
    aut: &CannonAutomaton,
    q: u32,
    gammas: &[IntRoot],
    l1: usize,
    search_depth: usize,
) -> bool {
    let data = aut.root_data().expect("checked by caller");
    let deep = |gs: &[IntRoot]| {
        gs.iter()
            .all(|g| sys.int_root_sign(g) > 0 && sys.int_root_depth(g, l1 + 1) > l1)
    };
    let mut stack: Vec<(u32, Vec<IntRoot>, usize)> = vec![(q, gammas.to_vec(), 0)];
    while let Some((p, gs, len)) = stack.pop() {
        if !deep(&gs) {
            return false;
        }
        if len == search_depth {
            continue;
        }
        for s in 0..sys.rank() {
            let Some(p2) = data.dfa.step(p, s) else { continue };
            let Some(g2) = reflect_all(sys, s, &gs) else { return false };
            stack.push((p2, g2, len + 1));
        }
    }
    true
}
