//! Regular buildings through their thickness parameters, isotropic walk
//! laws, and the Hecke-algebra description of the retracted walk.

mod kernel;

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use kernel::{
    hecke_product, kernel_row, kernel_row_by_mass, kernel_row_by_structure_constants, n_step_return,
    KernelRow, ReturnProbabilities,
};

use crate::coxeter::{CoxeterSystem, Gen, GroupElement, Word};
use crate::error::{Error, Result};
use crate::field::Order;

/// Thickness parameters `q_s` of a regular building of type `(W, S)`.
/// `q = 1` everywhere is the Coxeter complex itself.
#[derive(Clone, Debug, Serialize)]
pub struct BuildingSpec {
    q: Vec<u64>,
    #[serde(skip)]
    warnings: Vec<String>,
}

fn is_square(n: u64) -> bool {
    let r = (n as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).any(|x| x * x == n)
}

impl BuildingSpec {
    /// Validates the parameters against the rank-2 residues: a generalised
    /// `m`-gon with parameters `(q_s, q_t)` needs `q_s = q_t` for `m = 3`,
    /// `q_s q_t` a square for `m = 6` and `2 q_s q_t` a square for `m = 8`.
    /// Other odd `m` with unequal parameters only produce a warning.
    pub fn new(sys: &CoxeterSystem, q: Vec<u64>) -> Result<Self> {
        if q.len() != sys.rank() {
            return Err(Error::Thickness(format!(
                "{} parameters for {} generators",
                q.len(),
                sys.rank()
            )));
        }
        if let Some(s) = q.iter().position(|&x| x == 0) {
            return Err(Error::Thickness(format!("q_{} = 0", sys.labels()[s])));
        }
        let mut warnings = Vec::new();
        for s in 0..sys.rank() {
            for t in s + 1..sys.rank() {
                let (a, b) = (q[s], q[t]);
                let (ls, lt) = (&sys.labels()[s], &sys.labels()[t]);
                let odd = matches!(sys.m(s, t), Order::Finite(m) if m % 2 == 1);
                if a < 2 || b < 2 {
                    if odd && a != b {
                        warnings.push(format!(
                            "m({ls},{lt}) is odd but q_{ls} = {a} != q_{lt} = {b}; the kernel is not well defined"
                        ));
                    }
                    continue;
                }
                match sys.m(s, t) {
                    Order::Finite(3) if a != b => {
                        return Err(Error::Thickness(format!(
                            "m({ls},{lt}) = 3 needs q_{ls} = q_{lt}, got {a} and {b}"
                        )))
                    }
                    Order::Finite(6) if !is_square(a * b) => {
                        return Err(Error::Thickness(format!(
                            "m({ls},{lt}) = 6 needs q_{ls} q_{lt} to be a square, got {}",
                            a * b
                        )))
                    }
                    Order::Finite(8) if !is_square(2 * a * b) => {
                        return Err(Error::Thickness(format!(
                            "m({ls},{lt}) = 8 needs 2 q_{ls} q_{lt} to be a square, got {}",
                            2 * a * b
                        )))
                    }
                    Order::Finite(m) if m % 2 == 1 && a != b => warnings.push(format!(
                        "m({ls},{lt}) = {m} is odd but q_{ls} = {a} != q_{lt} = {b}; the kernel is not well defined"
                    )),
                    _ => {}
                }
            }
        }
        Ok(BuildingSpec { q, warnings })
    }

    pub fn uniform(sys: &CoxeterSystem, q: u64) -> Result<Self> {
        Self::new(sys, vec![q; sys.rank()])
    }

    pub fn thin(sys: &CoxeterSystem) -> Self {
        Self::uniform(sys, 1).expect("thin parameters are always valid")
    }

    pub fn q(&self, s: Gen) -> u64 {
        self.q[s]
    }

    pub fn params(&self) -> &[u64] {
        &self.q
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_thick(&self) -> bool {
        self.q.iter().all(|&x| x >= 2)
    }

    pub fn is_thin(&self) -> bool {
        self.q.iter().all(|&x| x == 1)
    }

    /// `q_w = q_{s_1} ... q_{s_l}` over a reduced word.
    pub fn q_of(&self, sys: &CoxeterSystem, w: &GroupElement) -> BigInt {
        self.q_of_word(w.shortlex_nf(sys))
    }

    pub fn q_of_word(&self, word: &[Gen]) -> BigInt {
        word.iter().fold(BigInt::one(), |acc, &s| acc * self.q[s])
    }
}

/// A finitely supported isotropic step law `{(w, p_w)}`.
#[derive(Clone, Debug)]
pub struct WalkSpec {
    steps: Vec<(Word, BigRational)>,
    l0: usize,
}

impl WalkSpec {
    /// Checks that words are reduced and distinct, probabilities positive and
    /// summing to one exactly. Words are replaced by their ShortLex forms.
    pub fn new(sys: &CoxeterSystem, steps: Vec<(Word, BigRational)>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidWalk("empty support".into()));
        }
        let mut seen = HashSet::new();
        let mut total = BigRational::zero();
        let mut out = Vec::with_capacity(steps.len());
        for (w, p) in steps {
            if !sys.is_reduced(&w) {
                return Err(Error::NotReduced(sys.format_word(&w)));
            }
            if !p.is_positive() {
                return Err(Error::InvalidWalk(format!(
                    "probability {p} of {} is not positive",
                    sys.format_word(&w)
                )));
            }
            let g = sys.word_to_element(&w);
            let nf = sys.shortlex_nf(&g);
            if !seen.insert(g) {
                return Err(Error::InvalidWalk(format!(
                    "{} appears twice in the support",
                    sys.format_word(&w)
                )));
            }
            total += &p;
            out.push((nf, p));
        }
        if !total.is_one() {
            return Err(Error::InvalidWalk(format!("probabilities sum to {total}, not 1")));
        }
        if out.iter().all(|(w, _)| w.is_empty()) {
            return Err(Error::InvalidWalk("the walk never moves".into()));
        }
        let l0 = out.iter().map(|(w, _)| w.len()).max().unwrap_or(0);
        Ok(WalkSpec { steps: out, l0 })
    }

    /// `p_s = 1/|S|` for every generator.
    pub fn nearest_neighbour(sys: &CoxeterSystem) -> Self {
        let p = BigRational::new(BigInt::one(), BigInt::from(sys.rank()));
        Self::new(sys, (0..sys.rank()).map(|s| (vec![s], p.clone())).collect())
            .expect("uniform nearest-neighbour law is valid")
    }

    pub fn steps(&self) -> &[(Word, BigRational)] {
        &self.steps
    }

    /// `L0 = max l(w)` over the support.
    pub fn l0(&self) -> usize {
        self.l0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Feasibility {
    Feasible,
    /// Some `m` is not the order of a thick generalised polygon.
    FeitHigman,
    /// One of the four triples with no compatible parameters.
    NoCompatibleParameters,
}

/// Whether a thick regular building of triangle type `(a, b, c)` can exist.
pub fn triangle_feasibility(a: u32, b: u32, c: u32) -> Result<Feasibility> {
    if !(a >= b && b >= c && c >= 2) {
        return Err(Error::InvalidInput(format!(
            "expected a >= b >= c >= 2, got ({a},{b},{c})"
        )));
    }
    if (b * c + a * c + a * b) as u64 > (a * b * c) as u64 {
        return Err(Error::InvalidInput(format!("({a},{b},{c}) is spherical")));
    }
    let admissible = |m: u32| matches!(m, 2 | 3 | 4 | 6 | 8);
    if ![a, b, c].into_iter().all(admissible) {
        return Ok(Feasibility::FeitHigman);
    }
    if [(8, 3, 3), (8, 6, 3), (8, 6, 6), (8, 8, 8)].contains(&(a, b, c)) {
        return Ok(Feasibility::NoCompatibleParameters);
    }
    Ok(Feasibility::Feasible)
}

/// All infinite triangle types with entries in `{2,3,4,6,8}`, with verdicts.
pub fn enumerate_triangle_types() -> Vec<([u32; 3], Feasibility)> {
    let ms = [8u32, 6, 4, 3, 2];
    let mut out = Vec::new();
    for &a in &ms {
        for &b in ms.iter().filter(|&&b| b <= a) {
            for &c in ms.iter().filter(|&&c| c <= b) {
                if let Ok(f) = triangle_feasibility(a, b, c) {
                    out.push(([a, b, c], f));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralCondition {
    pub satisfied: bool,
    /// A finite-type subset `I` with `sum_{s not in I} q_s < |I|`.
    pub witness: Option<Vec<Gen>>,
}

/// Checks `sum_{s in S \ I} q_s >= |I|` for every `I` with `W_I` finite.
pub fn spectral_condition(sys: &CoxeterSystem, b: &BuildingSpec) -> SpectralCondition {
    for subset in sys.finite_parabolics() {
        let outside: u64 = (0..sys.rank())
            .filter(|s| !subset.contains(s))
            .map(|s| b.q(s))
            .sum();
        if outside < subset.len() as u64 {
            return SpectralCondition {
                satisfied: false,
                witness: Some(subset),
            };
        }
    }
    SpectralCondition {
        satisfied: true,
        witness: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Generation {
    Yes,
    No(String),
    Inconclusive(String),
}

/// Whether the support generates `W`, by closing it under products inside
/// the ball of radius `depth_cap`.
pub fn support_generates(sys: &CoxeterSystem, walk: &WalkSpec, depth_cap: usize) -> Generation {
    if walk.steps().iter().all(|(w, _)| w.len() % 2 == 0) {
        return Generation::No("every support element has even length, so only the even subgroup is reached".into());
    }
    let gens: Vec<GroupElement> = walk
        .steps()
        .iter()
        .filter(|(w, _)| !w.is_empty())
        .flat_map(|(w, _)| {
            let g = sys.word_to_element(w);
            [g.inverse(), g]
        })
        .collect();
    let mut seen: HashSet<GroupElement> = HashSet::from([sys.identity()]);
    let mut queue = VecDeque::from([sys.identity()]);
    let mut truncated = false;
    let targets: Vec<GroupElement> = (0..sys.rank()).map(|s| sys.generator(s)).collect();
    while let Some(g) = queue.pop_front() {
        for h in &gens {
            let p = g.multiply(sys, h);
            if seen.contains(&p) {
                continue;
            }
            if sys.length(&p) > depth_cap {
                truncated = true;
                continue;
            }
            seen.insert(p.clone());
            queue.push_back(p);
        }
        if targets.iter().all(|t| seen.contains(t)) {
            return Generation::Yes;
        }
    }
    if truncated {
        Generation::Inconclusive(format!(
            "closure within radius {depth_cap} does not contain every generator"
        ))
    } else {
        Generation::No(format!(
            "the support generates a finite subgroup of order {} missing a generator",
            seen.len()
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w334() -> CoxeterSystem {
        CoxeterSystem::triangle(4, 3, 3).unwrap()
    }

    #[test]
    fn thickness_constraints() {
        let sys = w334();
        assert!(BuildingSpec::new(&sys, vec![2, 2, 2]).is_ok());
        // m(2,3) = 3 forces q_2 = q_3
        assert!(matches!(BuildingSpec::new(&sys, vec![2, 2, 3]), Err(Error::Thickness(_))));
        let sys6 = CoxeterSystem::triangle(6, 3, 3).unwrap();
        assert!(BuildingSpec::new(&sys6, vec![2, 2, 2]).is_ok());
        let sys8 = CoxeterSystem::triangle(8, 4, 2).unwrap();
        assert!(BuildingSpec::new(&sys8, vec![2, 4, 4]).is_ok());
        assert!(BuildingSpec::new(&sys8, vec![2, 2, 2]).is_err());
        let sys5 = CoxeterSystem::triangle(5, 4, 2).unwrap();
        assert_eq!(BuildingSpec::new(&sys5, vec![2, 3, 3]).unwrap().warnings().len(), 1);
        assert_eq!(BuildingSpec::new(&sys, vec![2, 2, 1]).unwrap().warnings().len(), 2);
    }

    #[test]
    fn q_of_products() {
        let sys = w334();
        let b = BuildingSpec::uniform(&sys, 2).unwrap();
        assert_eq!(b.q_of(&sys, &sys.identity()), BigInt::one());
        assert_eq!(b.q_of(&sys, &sys.word_to_element(&[0, 1, 0, 1])), BigInt::from(16));
    }

    #[test]
    fn walk_validation() {
        let sys = w334();
        let third = BigRational::new(1.into(), 3.into());
        let half = BigRational::new(1.into(), 2.into());
        assert!(WalkSpec::new(&sys, vec![(vec![0], half.clone()), (vec![1], half.clone())]).is_ok());
        assert!(WalkSpec::new(&sys, vec![(vec![0], third.clone()), (vec![1], half.clone())]).is_err());
        assert!(WalkSpec::new(&sys, vec![(vec![0, 0], BigRational::one())]).is_err());
        assert!(WalkSpec::new(&sys, vec![(vec![0, 1, 0, 1], half.clone()), (vec![1, 0, 1, 0], half)]).is_err());
        assert_eq!(WalkSpec::nearest_neighbour(&sys).l0(), 1);
    }

    #[test]
    fn feasibility() {
        assert_eq!(triangle_feasibility(8, 6, 6).unwrap(), Feasibility::NoCompatibleParameters);
        assert_eq!(triangle_feasibility(8, 6, 4).unwrap(), Feasibility::Feasible);
        assert_eq!(triangle_feasibility(5, 4, 2).unwrap(), Feasibility::FeitHigman);
        assert!(triangle_feasibility(3, 3, 2).is_err());
        let all = enumerate_triangle_types();
        assert_eq!(all.iter().filter(|(_, f)| *f == Feasibility::Feasible).count(), 24);
    }

    #[test]
    fn spectral() {
        let sys = w334();
        assert!(spectral_condition(&sys, &BuildingSpec::uniform(&sys, 2).unwrap()).satisfied);
        let thin = spectral_condition(&sys, &BuildingSpec::thin(&sys));
        assert!(!thin.satisfied);
        assert_eq!(thin.witness.unwrap().len(), 2);
    }

    #[test]
    fn generation() {
        let sys = w334();
        assert_eq!(support_generates(&sys, &WalkSpec::nearest_neighbour(&sys), 4), Generation::Yes);
        let evens: Vec<(Word, BigRational)> = sys.spheres(2)[2]
            .iter()
            .map(|g| (sys.shortlex_nf(g), BigRational::new(1.into(), 6.into())))
            .collect();
        let walk = WalkSpec::new(&sys, evens).unwrap();
        assert!(matches!(support_generates(&sys, &walk, 6), Generation::No(_)));
        let sts = WalkSpec::new(&sys, vec![(vec![0, 1, 0], BigRational::one())]).unwrap();
        assert!(matches!(support_generates(&sys, &sts, 2), Generation::Inconclusive(_)));
        assert!(matches!(support_generates(&sys, &sts, 6), Generation::No(_)));
    }
}
