use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use super::{BuildingSpec, WalkSpec};
use crate::coxeter::{CoxeterSystem, GroupElement, Word};
use crate::error::{Error, Result};

/// Structure constants of `P_u P_v = sum_w alpha^w_{u,v} P_w`, by induction
/// along a reduced word of `v`:
/// `P_w P_s = P_{ws}` if `l(ws) = l(w) + 1`, else
/// `q_s^-1 P_{ws} + (1 - q_s^-1) P_w`.
pub fn hecke_product(
    sys: &CoxeterSystem,
    b: &BuildingSpec,
    u: &GroupElement,
    v: &GroupElement,
) -> HashMap<GroupElement, BigRational> {
    let mut cur: HashMap<GroupElement, BigRational> = HashMap::from([(u.clone(), BigRational::one())]);
    for &s in v.shortlex_nf(sys) {
        let qs = BigRational::from_integer(BigInt::from(b.q(s)));
        let mut next: HashMap<GroupElement, BigRational> = HashMap::with_capacity(cur.len() * 2);
        for (w, c) in cur {
            let ws = w.right_mul_gen_cloned(sys, s);
            if w.is_right_ascent(sys, s) {
                *next.entry(ws).or_insert_with(BigRational::zero) += c;
            } else {
                let down = &c / &qs;
                let stay = &c - &down;
                *next.entry(ws).or_insert_with(BigRational::zero) += down;
                if !stay.is_zero() {
                    *next.entry(w).or_insert_with(BigRational::zero) += stay;
                }
            }
        }
        cur = next;
    }
    cur
}

/// One row `v -> p(u, v)` of the retracted-walk kernel, sorted in ShortLex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelRow {
    pub source: Word,
    #[serde(serialize_with = "ser_entries")]
    pub entries: Vec<(Word, BigRational)>,
}

fn ser_entries<S: serde::Serializer>(e: &[(Word, BigRational)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(e.len()))?;
    for (w, p) in e {
        seq.serialize_element(&(w, p.to_string()))?;
    }
    seq.end()
}

impl KernelRow {
    fn from_map(sys: &CoxeterSystem, u: &GroupElement, map: HashMap<GroupElement, BigRational>) -> Self {
        let mut entries: Vec<(Word, BigRational)> = map
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(g, p)| (sys.shortlex_nf(&g), p))
            .collect();
        entries.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        KernelRow {
            source: sys.shortlex_nf(u),
            entries,
        }
    }

    pub fn total(&self) -> BigRational {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    pub fn get(&self, v: &[usize]) -> BigRational {
        self.entries
            .iter()
            .find(|(w, _)| w == v)
            .map_or_else(BigRational::zero, |(_, p)| p.clone())
    }
}

/// `p(u, v) = q_u^-1 q_v sum_w alpha^u_{v, w^-1} p_w` over `v` in the ball
/// of radius `L0` around `u`.
pub fn kernel_row_by_structure_constants(
    sys: &CoxeterSystem,
    b: &BuildingSpec,
    walk: &WalkSpec,
    u: &GroupElement,
) -> KernelRow {
    let qu = BigRational::from_integer(b.q_of(sys, u));
    let steps: Vec<(GroupElement, &BigRational)> = walk
        .steps()
        .iter()
        .map(|(w, p)| (sys.word_to_element(w).inverse(), p))
        .collect();
    let mut map = HashMap::new();
    for y in sys.spheres(walk.l0()).into_iter().flatten() {
        let v = u.multiply(sys, &y);
        let mut sum = BigRational::zero();
        for (w_inv, p) in &steps {
            if let Some(a) = hecke_product(sys, b, &v, w_inv).get(u) {
                sum += a * *p;
            }
        }
        if !sum.is_zero() {
            let qv = BigRational::from_integer(b.q_of(sys, &v));
            map.insert(v, sum * qv / &qu);
        }
    }
    KernelRow::from_map(sys, u, map)
}

/// Pushes each `p_w` along a reduced word of `w`: an ascent moves all mass,
/// a descent moves the fraction `1/q_s` and keeps the rest.
pub fn kernel_row_by_mass(
    sys: &CoxeterSystem,
    b: &BuildingSpec,
    walk: &WalkSpec,
    u: &GroupElement,
) -> KernelRow {
    KernelRow::from_map(sys, u, mass_map(sys, b, walk, u))
}

fn mass_map(
    sys: &CoxeterSystem,
    b: &BuildingSpec,
    walk: &WalkSpec,
    u: &GroupElement,
) -> HashMap<GroupElement, BigRational> {
    let mut map: HashMap<GroupElement, BigRational> = HashMap::new();
    for (w, p) in walk.steps() {
        let mut points = vec![(u.clone(), p.clone())];
        for &s in w {
            let qs = BigRational::from_integer(BigInt::from(b.q(s)));
            let mut next = Vec::with_capacity(points.len() * 2);
            for (x, m) in points {
                let xs = x.right_mul_gen_cloned(sys, s);
                if x.is_right_ascent(sys, s) {
                    next.push((xs, m));
                } else {
                    let down = &m / &qs;
                    let stay = &m - &down;
                    next.push((xs, down));
                    if !stay.is_zero() {
                        next.push((x, stay));
                    }
                }
            }
            points = next;
        }
        for (x, m) in points {
            *map.entry(x).or_insert_with(BigRational::zero) += m;
        }
    }
    map
}

/// Kernel row computed both ways; any difference is an invariant breach.
pub fn kernel_row(
    sys: &CoxeterSystem,
    b: &BuildingSpec,
    walk: &WalkSpec,
    u: &GroupElement,
) -> Result<KernelRow> {
    let a = kernel_row_by_structure_constants(sys, b, walk, u);
    let m = kernel_row_by_mass(sys, b, walk, u);
    if a != m {
        return Err(Error::KernelMismatch(sys.format_word(&a.source)));
    }
    Ok(a)
}

/// Exact return probabilities `p^(k)(1,1)` for `k = 0..=n`.
#[derive(Clone, Debug, Serialize)]
pub struct ReturnProbabilities {
    #[serde(serialize_with = "ser_rats")]
    pub probs: Vec<BigRational>,
    /// Largest support size of the distribution over the run.
    pub max_support: usize,
}

fn ser_rats<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return crate::field::bigint_to_f64(x).ln();
    }
    let shift = bits - 60;
    crate::field::bigint_to_f64(&(x >> shift as usize)).ln() + shift as f64 * std::f64::consts::LN_2
}

impl ReturnProbabilities {
    /// `rho_m = p^(2m)(1,1)^(1/2m)`, for every `m >= 1` with `2m <= n`.
    pub fn rho_hat(&self) -> Vec<(usize, f64)> {
        (1..)
            .take_while(|m| 2 * m < self.probs.len())
            .map(|m| {
                let p = &self.probs[2 * m];
                let r = if p.is_zero() {
                    0.0
                } else {
                    ((ln_big(p.numer()) - ln_big(p.denom())) / (2 * m) as f64).exp()
                };
                (m, r)
            })
            .collect()
    }

    /// Exact comparison of `rho_a` with `rho_b`:
    /// `p_{2a}^(1/2a)` vs `p_{2b}^(1/2b)` iff `p_{2a}^(2b)` vs `p_{2b}^(2a)`.
    pub fn rho_cmp(&self, a: usize, b: usize) -> Ordering {
        let pa: BigRational = Pow::pow(&self.probs[2 * a], 2 * b as u32);
        let pb: BigRational = Pow::pow(&self.probs[2 * b], 2 * a as u32);
        pa.cmp(&pb)
    }
}

/// Exact `n`-step return probabilities by dynamic programming over the
/// distribution of the retracted walk, keyed by ShortLex normal forms.
pub fn n_step_return(
    sys: &CoxeterSystem,
    b: &BuildingSpec,
    walk: &WalkSpec,
    n: usize,
    state_cap: usize,
) -> Result<ReturnProbabilities> {
    let mut rows: HashMap<Word, Vec<(Word, BigRational)>> = HashMap::new();
    let mut dist: HashMap<Word, BigRational> = HashMap::from([(Vec::new(), BigRational::one())]);
    let mut probs = vec![BigRational::one()];
    let mut max_support = 1;
    for _ in 0..n {
        let mut next: HashMap<Word, BigRational> = HashMap::with_capacity(dist.len() * 3);
        for (u, m) in &dist {
            let row = rows.entry(u.clone()).or_insert_with(|| {
                let g = sys.word_to_element(u);
                mass_map(sys, b, walk, &g)
                    .into_iter()
                    .map(|(v, p)| (sys.shortlex_nf(&v), p))
                    .collect()
            });
            for (v, p) in row.iter() {
                *next.entry(v.clone()).or_insert_with(BigRational::zero) += m * p;
            }
        }
        if next.len() > state_cap {
            return Err(Error::CapExceeded(format!(
                "return-probability state space exceeded {state_cap} elements"
            )));
        }
        max_support = max_support.max(next.len());
        probs.push(next.get(&Vec::new()).cloned().unwrap_or_else(BigRational::zero));
        dist = next;
    }
    Ok(ReturnProbabilities { probs, max_support })
}
