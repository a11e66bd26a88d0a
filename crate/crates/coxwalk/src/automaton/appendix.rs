//! Cannon automata built from explicit identifications `T(lhs) = T(rhs)` of
//! cone types, one family per class of Fuchsian (or affine) Coxeter system.
//!
//! Starting from the identity, every length-increasing append `w r` is
//! resolved to a vertex: an existing vertex if the element already is one,
//! otherwise through the first identification whose left side is a prefix of
//! `w r` in the weak order (`T(lhs z) = T(rhs z)`), otherwise as a new
//! vertex. The vertex graph is then minimized.

use std::collections::{HashMap, VecDeque};

use super::CannonAutomaton;
use crate::coxeter::{Classification, CoxeterSystem, Gen, GroupElement, TriangleClass, Word};
use crate::error::{Error, Result};

/// An identification `T(lhs) = T(rhs)`.
#[derive(Clone, Debug)]
pub struct Identification {
    pub lhs: Word,
    pub rhs: Word,
}

#[derive(Debug)]
pub struct AppendixAutomaton {
    pub automaton: CannonAutomaton,
    /// Vertices created by the closure, before minimization.
    pub vertices: Vec<Word>,
    pub identifications: Vec<Identification>,
}

const VERTEX_CAP: usize = 2_000;

pub fn appendix_automaton(sys: &CoxeterSystem) -> Result<AppendixAutomaton> {
    let rules = identifications(sys)?;
    close(sys, rules)
}

/// The identification list for the class of `sys`.
pub fn identifications(sys: &CoxeterSystem) -> Result<Vec<Identification>> {
    let rules = match sys.classify() {
        Classification::FuchsianTriangle { class, roles, .. }
        | Classification::AffineTriangle { class, roles, .. } => match class {
            TriangleClass::I => class_one(sys),
            TriangleClass::II => class_two(sys, roles),
            TriangleClass::III => class_three(sys, roles),
        },
        Classification::FuchsianPolygon { .. } => class_four(sys),
        other => return Err(Error::UnsupportedClass(other.name())),
    };
    Ok(rules)
}

fn order(sys: &CoxeterSystem, s: Gen, t: Gen) -> usize {
    sys.m(s, t).finite().expect("finite edge") as usize
}

/// Alternating word of length `len` starting with `a`.
fn alt(a: Gen, b: Gen, len: usize) -> Word {
    (0..len).map(|i| if i % 2 == 0 { a } else { b }).collect()
}

/// Elements of `W_st` other than the identity and the longest element, as
/// their unique reduced words.
fn dihedral_middle(sys: &CoxeterSystem, s: Gen, t: Gen) -> Vec<Word> {
    let m = order(sys, s, t);
    let mut out = Vec::new();
    for len in 1..m {
        out.push(alt(s, t, len));
        out.push(alt(t, s, len));
    }
    out
}

/// Longest element of `W_st`, written starting with `s`.
fn longest(sys: &CoxeterSystem, s: Gen, t: Gen) -> Word {
    alt(s, t, order(sys, s, t))
}

fn cat(parts: &[&[Gen]]) -> Word {
    parts.concat()
}

fn rule(lhs: Word, rhs: Word) -> Identification {
    Identification { lhs, rhs }
}

fn class_one(sys: &CoxeterSystem) -> Vec<Identification> {
    let mut rules = Vec::new();
    for s in 0..3 {
        for t in 0..3 {
            if s == t {
                continue;
            }
            let u = 3 - s - t;
            for v in dihedral_middle(sys, s, t) {
                if v.len() >= 2 {
                    let s1 = *v.last().unwrap();
                    rules.push(rule(cat(&[&v, &[u]]), vec![s1, u]));
                }
            }
            let x = longest(sys, s, t);
            rules.push(rule(cat(&[&x, &[u, s]]), vec![s, u, s]));
            rules.push(rule(cat(&[&x, &[u, t]]), vec![t, u, t]));
        }
    }
    rules
}

/// `m_st = a >= m_tu = b >= 4`, `m_us = 2`. The identifications are applied
/// together with their images under exchanging `s` and `u`.
fn class_two(sys: &CoxeterSystem, [s, t, u]: [Gen; 3]) -> Vec<Identification> {
    let mut rules = Vec::new();
    for (s, u) in [(s, u), (u, s)] {
        let x = longest(sys, s, t);
        let xs = sys.shortlex_nf(&sys.word_to_element(&cat(&[&x, &[s]])));
        let xe = sys.word_to_element(&x);
        let xse = sys.word_to_element(&xs);
        for v in dihedral_middle(sys, s, t) {
            let ve = sys.word_to_element(&v);
            if v.len() >= 2 && ve != xe && ve != xse {
                let s1 = *v.last().unwrap();
                rules.push(rule(cat(&[&v, &[u]]), vec![s1, u]));
            }
        }
        rules.push(rule(cat(&[&xs, &[u, t]]), vec![t, u, t]));
        rules.push(rule(cat(&[&x, &[u, t, u]]), vec![t, u, t, u]));
        rules.push(rule(cat(&[&x, &[u, t, s, u]]), vec![t, u, t, s, u]));
        rules.push(rule(cat(&[&x, &[u, t, s, t]]), vec![s, t, s, t]));
        rules.push(rule(vec![s, u, t, s], vec![s, t, s]));
        rules.push(rule(vec![s, u, t, u], vec![u, t, u]));
    }
    rules
}

/// `m_st >= 6`, `m_tu = 3`, `m_us = 2`; the list is used as stated,
/// including its repeated entry.
fn class_three(sys: &CoxeterSystem, [s, t, u]: [Gen; 3]) -> Vec<Identification> {
    let x = longest(sys, s, t);
    let nf = |w: Word| sys.shortlex_nf(&sys.word_to_element(&w));
    let xs = nf(cat(&[&x, &[s]]));
    let xt = nf(cat(&[&x, &[t]]));
    let xts = nf(cat(&[&x, &[t, s]]));
    let excluded: Vec<GroupElement> = [vec![], x.clone(), xs.clone(), xt.clone(), xts.clone()]
        .iter()
        .map(|w| sys.word_to_element(w))
        .collect();
    let mut rules = Vec::new();
    for v in dihedral_middle(sys, s, t) {
        if v.len() >= 2 && !excluded.contains(&sys.word_to_element(&v)) {
            let s1 = *v.last().unwrap();
            rules.push(rule(cat(&[&v, &[u]]), vec![s1, u]));
        }
    }
    let stststut: Word = vec![s, t, s, t, s, t, u, t];
    let table: Vec<(Word, Word)> = vec![
        (cat(&[&x, &[u, t, s, t, s, t]]), vec![s, t, s, t, s, t]),
        (cat(&[&xs, &[u, t]]), vec![t, u, t]),
        (cat(&[&x, &[u, t, s, t, s, t]]), vec![s, t, s, t, s, t]),
        (cat(&[&x, &[u, t, s, t, s, t, u, t]]), stststut.clone()),
        (cat(&[&x, &[u, t, s, t, s, t, u, t, s]]), cat(&[&stststut, &[s]])),
        (cat(&[&x, &[u, t, s, t, s, t, u, t, s, t, u]]), cat(&[&stststut, &[s, t, u]])),
        (cat(&[&xt, &[u, t, s, t, u, t, s, t, s, t, s]]), vec![t, s, t, s, t, s]),
        (cat(&[&xts, &[u, t]]), vec![t, u, t]),
        (cat(&[&xt, &[u, t, s, t, s]]), vec![s, t, s, t, s]),
        (cat(&[&xt, &[u, t, s, t, s, u]]), vec![s, t, s, t, s, u]),
        (vec![t, u, t, s, t, s, t], vec![t, s, t, s, t]),
        (vec![u, t, s, t, u, t, s], vec![t, u, t, s]),
        (vec![u, t, s, t, u, t], vec![t, u, t]),
        (vec![u, t, s, t], vec![t, s, t]),
        (vec![s, t, u, t], vec![t, u, t]),
        (vec![u, s, t, s, t], vec![s, t, s, t]),
        (vec![s, t, u, t, s], vec![t, u, t, s]),
    ];
    rules.extend(table.into_iter().map(|(l, r)| rule(l, r)));
    rules
}

fn class_four(sys: &CoxeterSystem) -> Vec<Identification> {
    let n = sys.rank();
    let mut rules = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if s == t || sys.m(s, t).is_infinite() {
                continue;
            }
            let mut elems = vec![Vec::new(), longest(sys, s, t)];
            elems.extend(dihedral_middle(sys, s, t));
            for u in 0..n {
                if u == s || u == t || !sys.m(u, s).is_infinite() {
                    continue;
                }
                for v in &elems {
                    let lhs = cat(&[v, &[u]]);
                    let rhs = if !sys.m(t, u).is_infinite() && !sys.word_to_element(v).is_right_ascent(sys, t) {
                        vec![t, u]
                    } else {
                        vec![u]
                    };
                    if lhs.len() > rhs.len() {
                        rules.push(rule(lhs, rhs));
                    }
                }
            }
        }
    }
    rules
}

struct Compiled {
    lhs: GroupElement,
    lhs_inv: GroupElement,
    lhs_len: usize,
    rhs: GroupElement,
    rhs_len: usize,
}

fn close(sys: &CoxeterSystem, rules: Vec<Identification>) -> Result<AppendixAutomaton> {
    let compiled: Vec<Compiled> = rules
        .iter()
        .map(|r| {
            let lhs = sys.word_to_element(&r.lhs);
            let rhs = sys.word_to_element(&r.rhs);
            Compiled {
                lhs_inv: lhs.inverse(),
                lhs_len: sys.length(&lhs),
                rhs_len: sys.length(&rhs),
                lhs,
                rhs,
            }
        })
        .filter(|c| c.rhs_len < c.lhs_len && c.lhs != c.rhs)
        .collect();
    let mut vertices: Vec<GroupElement> = vec![sys.identity()];
    let mut index: HashMap<GroupElement, usize> = HashMap::from([(sys.identity(), 0)]);
    let mut trans: Vec<Vec<Option<usize>>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let w = vertices[v].clone();
        let mut row = vec![None; sys.rank()];
        for (r, slot) in row.iter_mut().enumerate() {
            if !w.is_right_ascent(sys, r) {
                continue;
            }
            let e = w.right_mul_gen_cloned(sys, r);
            *slot = Some(resolve(sys, &compiled, &mut vertices, &mut index, &mut queue, e)?);
        }
        while trans.len() <= v {
            trans.push(Vec::new());
        }
        trans[v] = row;
    }
    let labels = sys.labels().to_vec();
    let (automaton, _) = CannonAutomaton::minimize(labels, &trans);
    Ok(AppendixAutomaton {
        automaton,
        vertices: vertices.iter().map(|g| sys.shortlex_nf(g)).collect(),
        identifications: rules,
    })
}

fn resolve(
    sys: &CoxeterSystem,
    rules: &[Compiled],
    vertices: &mut Vec<GroupElement>,
    index: &mut HashMap<GroupElement, usize>,
    queue: &mut VecDeque<usize>,
    mut e: GroupElement,
) -> Result<usize> {
    'outer: loop {
        if let Some(&v) = index.get(&e) {
            return Ok(v);
        }
        let len = sys.length(&e);
        for rule in rules {
            if rule.lhs_len > len {
                continue;
            }
            let z = rule.lhs_inv.multiply(sys, &e);
            let zl = sys.length(&z);
            if zl + rule.lhs_len != len {
                continue;
            }
            let next = rule.rhs.multiply(sys, &z);
            if sys.length(&next) != rule.rhs_len + zl {
                return Err(Error::AppendixRules(format!(
                    "{} = {} extended by {} is not reduced on the right-hand side",
                    sys.format_word(&sys.shortlex_nf(&rule.lhs)),
                    sys.format_word(&sys.shortlex_nf(&rule.rhs)),
                    sys.format_word(&sys.shortlex_nf(&z)),
                )));
            }
            e = next;
            continue 'outer;
        }
        if vertices.len() >= VERTEX_CAP {
            return Err(Error::AppendixRules(format!(
                "more than {VERTEX_CAP} vertices; the identifications do not close"
            )));
        }
        let id = vertices.len();
        index.insert(e.clone(), id);
        vertices.push(e);
        queue.push_back(id);
        return Ok(id);
    }
}
