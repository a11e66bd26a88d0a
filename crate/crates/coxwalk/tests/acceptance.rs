//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.
//!
//! `cargo test --release --test acceptance` (an optional argument filters
//! criteria by substring of their name).

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use coxwalk::automaton::{appendix_automaton, build_cannon, CannonAutomaton, RootDfa};
use coxwalk::hecke::{
    enumerate_triangle_types, hecke_product, kernel_row, kernel_row_by_mass, kernel_row_by_structure_constants,
    n_step_return, BuildingSpec, Feasibility, WalkSpec,
};
use coxwalk::renewal::{extract_renewals, RenewalConfig, RenewalMode, RenewalSeries};
use coxwalk::stats::{clt_check, direct_speed, estimate, Estimates};
use coxwalk::walk::{RngSpec, Simulator, Trajectory, WalkState};
use coxwalk::{CoxeterSystem, GroupElement, Word};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("{what} took {:.1} s, limit {:.0} s", t.as_secs_f64(), limit.as_secs_f64()));
    }
    Ok(())
}

fn w334() -> CoxeterSystem {
    CoxeterSystem::triangle(4, 3, 3).unwrap()
}

fn test_matrix() -> Vec<(&'static str, CoxeterSystem, BuildingSpec)> {
    let tri = |a, b, c, q| {
        let sys = CoxeterSystem::triangle(a, b, c).unwrap();
        let b = BuildingSpec::uniform(&sys, q).unwrap();
        (sys, b)
    };
    let pent = CoxeterSystem::polygon(&[2; 5]).unwrap();
    let pent_b = BuildingSpec::new(&pent, vec![2, 3, 4, 2, 3]).unwrap();
    let mut out = Vec::new();
    for (name, (s, b)) in [
        ("(3,3,4)", tri(4, 3, 3, 2)),
        ("(4,4,2)", tri(4, 4, 2, 3)),
        ("(5,4,2)", tri(5, 4, 2, 2)),
        ("(6,3,2)", tri(6, 3, 2, 2)),
        ("(7,3,2)", tri(7, 3, 2, 2)),
    ] {
        out.push((name, s, b));
    }
    out.push(("pentagon", pent, pent_b));
    out
}

/// Elements of length at most `r`.
fn ball(sys: &CoxeterSystem, r: usize) -> Vec<GroupElement> {
    sys.spheres(r).into_iter().flatten().collect()
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn c01_automaton_334() -> Outcome {
    let start = Instant::now();
    let sys = w334();
    let aut = build_cannon(&sys).map_err(|e| e.to_string())?;
    ensure!(aut.num_states() == 18, "{} cone types, expected 18", aut.num_states());
    let transient: Vec<String> = aut.transient_states().iter().map(|&q| aut.state_label(&sys, q)).collect();
    ensure!(transient == ["e", "1", "2", "3"], "transient set {transient:?}");
    ensure!(aut.is_strongly_connected(), "recurrent part not strongly connected");
    let app = appendix_automaton(&sys).map_err(|e| e.to_string())?;
    ensure!(app.automaton.is_isomorphic(&aut), "explicit construction not isomorphic");
    let path = ["121", "1212", "12123", "232", "2321", "212", "23"];
    let states: Vec<usize> = path
        .iter()
        .map(|w| aut.cone_type_of(&sys, &sys.parse_word(w).unwrap()).unwrap())
        .collect();
    for (w, &q) in path.iter().zip(&states) {
        ensure!(aut.state_label(&sys, q) == *w, "T({w}) has representative {}", aut.state_label(&sys, q));
    }
    for p in states.windows(2) {
        ensure!(aut.transitions()[p[0]].contains(&Some(p[1])), "missing edge {} -> {}", p[0], p[1]);
    }
    within(start, Duration::from_secs(1), "construction")?;
    Ok(format!("18 states, transient e 1 2 3, path 121 -> ... -> 23 present, {:.2} s", start.elapsed().as_secs_f64()))
}

fn c02_affine_counterexamples() -> Outcome {
    let start = Instant::now();
    for (a, b, c) in [(3, 3, 3), (4, 4, 2), (6, 3, 2)] {
        let sys = CoxeterSystem::triangle(a, b, c).unwrap();
        let aut = build_cannon(&sys).map_err(|e| e.to_string())?;
        ensure!(!aut.is_strongly_connected(), "({a},{b},{c}) is strongly connected");
    }
    let sys = CoxeterSystem::triangle(4, 4, 2).unwrap();
    let aut = build_cannon(&sys).map_err(|e| e.to_string())?;
    let from = aut.cone_type_of(&sys, &sys.parse_word("1212").unwrap()).unwrap();
    let to = aut.cone_type_of(&sys, &sys.parse_word("13").unwrap()).unwrap();
    ensure!(aut.is_recurrent(from) && aut.is_recurrent(to), "witness types are not recurrent");
    ensure!(!aut.has_path(from, to), "(4,4,2) has a path T(1212) -> T(13)");
    within(start, Duration::from_secs(1), "three constructions")?;
    Ok("(3,3,3), (4,4,2), (6,3,2) not strongly connected; no path T(1212) -> T(13) in (4,4,2)".into())
}

fn c03_class_two_counts() -> Outcome {
    let mut found = Vec::new();
    let mut ok = true;
    for (a, b, c) in [(4, 4, 2), (5, 4, 2), (6, 4, 2)] {
        let start = Instant::now();
        let sys = CoxeterSystem::triangle(a, b, c).unwrap();
        let aut = build_cannon(&sys).map_err(|e| e.to_string())?;
        within(start, Duration::from_secs(1), "construction")?;
        let expected = (a + b + c + 4) as usize;
        ok &= aut.num_states() == expected;
        found.push(format!("({a},{b},{c}): {} (expected {expected})", aut.num_states()));
    }
    let msg = found.join(", ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Every word of length at most `n`, depth first, with its element.
fn for_all_words(sys: &CoxeterSystem, n: usize, f: &mut dyn FnMut(&[usize], bool)) {
    fn go(sys: &CoxeterSystem, n: usize, w: &mut Vec<usize>, g: &GroupElement, reduced: bool, f: &mut dyn FnMut(&[usize], bool)) {
        f(w, reduced);
        if w.len() == n {
            return;
        }
        for s in 0..sys.rank() {
            let r = reduced && g.is_right_ascent(sys, s);
            w.push(s);
            go(sys, n, w, &g.right_mul_gen_cloned(sys, s), r, f);
            w.pop();
        }
    }
    go(sys, n, &mut Vec::new(), &sys.identity(), true, f);
}

fn c04_geodesic_language() -> Outcome {
    let start = Instant::now();
    let mut words = 0usize;
    for (name, sys, _) in test_matrix() {
        let aut = build_cannon(&sys).map_err(|e| e.to_string())?;
        let shortlex = RootDfa::shortlex(&sys, &aut.require_roots().map_err(|e| e.to_string())?.minimal);
        let mut bad: Option<Word> = None;
        let mut reduced_words = vec![0u128; 9];
        for_all_words(&sys, 8, &mut |w, reduced| {
            words += 1;
            if reduced {
                reduced_words[w.len()] += 1;
            }
            let normal = reduced && sys.shortlex_nf(&sys.word_to_element(w)) == w;
            if bad.is_none() && (aut.accepts(w) != reduced || shortlex.run(w).is_some() != normal) {
                bad = Some(w.to_vec());
            }
        });
        if let Some(w) = bad {
            return Err(format!("{name}: DFA disagrees on {}", sys.format_word(&w)));
        }
        ensure!(aut.geodesic_counts(8) == reduced_words, "{name}: geodesic counts differ");
        let bfs: Vec<u128> = sys.spheres(8).iter().map(|s| s.len() as u128).collect();
        let dfa = aut.sphere_sizes(&sys, 8).map_err(|e| e.to_string())?;
        ensure!(bfs == dfa, "{name}: sphere sizes {bfs:?} vs path counts {dfa:?}");
    }
    within(start, Duration::from_secs(60), "language oracle")?;
    Ok(format!("6 systems, {words} words: geodesic and ShortLex languages exact, sphere sizes agree, {:.1} s", start.elapsed().as_secs_f64()))
}

fn c05_feasibility() -> Outcome {
    let start = Instant::now();
    let all = enumerate_triangle_types();
    let feasible = all.iter().filter(|(_, f)| *f == Feasibility::Feasible).count();
    let rejected: HashSet<[u32; 3]> = all
        .iter()
        .filter(|(_, f)| *f == Feasibility::NoCompatibleParameters)
        .map(|(t, _)| *t)
        .collect();
    let expected: HashSet<[u32; 3]> = [[8, 3, 3], [8, 6, 3], [8, 6, 6], [8, 8, 8]].into();
    ensure!(all.iter().all(|(_, f)| *f != Feasibility::FeitHigman), "enumeration contains a non-admissible triple");
    ensure!(feasible == 24, "{feasible} feasible types");
    ensure!(rejected == expected, "rejected {rejected:?}");
    within(start, Duration::from_secs(1), "enumeration")?;
    Ok(format!("{feasible} feasible, {} admissible triples, 4 rejected", all.len()))
}

fn c06_hecke_suite() -> Outcome {
    let start = Instant::now();
    let sys = w334();
    let b = BuildingSpec::uniform(&sys, 2).unwrap();
    let elems = ball(&sys, 6);
    let checked: usize = elems
        .par_iter()
        .map(|u| -> Result<usize, String> {
            for v in &elems {
                let prod = hecke_product(&sys, &b, u, v);
                let mut total = BigRational::zero();
                for (w, a) in &prod {
                    ensure!(*a >= BigRational::zero(), "negative coefficient");
                    ensure!(
                        sys.distance(u, w) <= sys.length(v),
                        "support: {} outside u * ball(l(v))",
                        sys.format_word(&sys.shortlex_nf(w))
                    );
                    total += a;
                }
                ensure!(total.is_one(), "coefficients sum to {total}");
            }
            Ok(elems.len())
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let small = ball(&sys, 4);
    let apply_right = |lhs: HashMap<GroupElement, BigRational>, x: &GroupElement| {
        let mut out: HashMap<GroupElement, BigRational> = HashMap::new();
        for (w, a) in lhs {
            for (z, c) in hecke_product(&sys, &b, &w, x) {
                *out.entry(z).or_insert_with(BigRational::zero) += &a * c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    };
    for _ in 0..200 {
        let pick = |rng: &mut ChaCha8Rng| small[rng.gen_range(0..small.len())].clone();
        let (u, v, x) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let left = apply_right(hecke_product(&sys, &b, &u, &v), &x);
        let mut right: HashMap<GroupElement, BigRational> = HashMap::new();
        for (y, c) in hecke_product(&sys, &b, &v, &x) {
            for (z, a) in hecke_product(&sys, &b, &u, &y) {
                *right.entry(z).or_insert_with(BigRational::zero) += &c * a;
            }
        }
        right.retain(|_, c| !c.is_zero());
        ensure!(left == right, "associativity fails");
    }
    within(start, Duration::from_secs(60), "Hecke suite")?;
    Ok(format!("{checked} products exact, 200 associativity checks, {:.1} s", start.elapsed().as_secs_f64()))
}

fn mixed_walk(sys: &CoxeterSystem) -> WalkSpec {
    let steps = vec![
        (vec![0], rat(1, 4)),
        (vec![1], rat(1, 8)),
        (vec![2], rat(1, 8)),
        (vec![0, 1], rat(1, 6)),
        (vec![2, 1], rat(1, 6)),
        (vec![1, 2], rat(1, 6)),
    ];
    WalkSpec::new(sys, steps).unwrap()
}

fn c07_kernel_double_computation() -> Outcome {
    let start = Instant::now();
    let mut rows = 0usize;
    for (name, sys, b) in test_matrix() {
        let mut walks = vec![WalkSpec::nearest_neighbour(&sys)];
        if name == "(3,3,4)" {
            walks.push(mixed_walk(&sys));
        }
        let thin = BuildingSpec::thin(&sys);
        let sources = ball(&sys, 6);
        for walk in &walks {
            let n = sources
                .par_iter()
                .map(|u| -> Result<usize, String> {
                    let row = kernel_row(&sys, &b, walk, u).map_err(|e| format!("{name}: {e}"))?;
                    ensure!(row.total().is_one(), "{name}: row sums to {}", row.total());
                    let t1 = kernel_row_by_structure_constants(&sys, &thin, walk, u);
                    let t2 = kernel_row_by_mass(&sys, &thin, walk, u);
                    ensure!(t1 == t2, "{name}: thin rows differ");
                    let mut direct: HashMap<Word, BigRational> = HashMap::new();
                    for (w, p) in walk.steps() {
                        let v = u.multiply(&sys, &sys.word_to_element(w));
                        *direct.entry(sys.shortlex_nf(&v)).or_insert_with(BigRational::zero) += p;
                    }
                    direct.retain(|_, p| !p.is_zero());
                    let got: HashMap<Word, BigRational> = t1.entries.iter().cloned().collect();
                    ensure!(got == direct, "{name}: thin kernel is not the group walk at {}", sys.format_word(&row.source));
                    Ok(1)
                })
                .collect::<Result<Vec<_>, _>>()?
                .len();
            rows += n;
        }
    }
    Ok(format!("{rows} rows agree exactly and sum to 1; thin case is the group walk, {:.1} s", start.elapsed().as_secs_f64()))
}

fn in_cone_of(sys: &CoxeterSystem, w: &GroupElement, x: &GroupElement) -> bool {
    sys.length(&w.multiply(sys, x)) == sys.length(w) + sys.length(x)
}

fn c08_cone_invariance() -> Outcome {
    let start = Instant::now();
    let sys = w334();
    let aut = build_cannon(&sys).map_err(|e| e.to_string())?;
    let b = BuildingSpec::uniform(&sys, 2).unwrap();
    let mut by_type: HashMap<usize, Vec<GroupElement>> = HashMap::new();
    for g in ball(&sys, 7) {
        by_type.entry(aut.cone_type_of_element(&sys, &g)).or_default().push(g);
    }
    let types: Vec<usize> = {
        let mut t: Vec<usize> = by_type.iter().filter(|(_, v)| v.len() >= 2).map(|(k, _)| *k).collect();
        t.sort();
        t
    };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0usize;
    let mut nonzero = 0usize;
    for walk in [WalkSpec::nearest_neighbour(&sys), mixed_walk(&sys)] {
        let near = ball(&sys, walk.l0());
        let mut attempts = 0;
        let mut done = 0;
        while done < 100 {
            attempts += 1;
            ensure!(attempts < 100_000, "could not sample enough triples");
            let t = types[rng.gen_range(0..types.len())];
            let reps = &by_type[&t];
            let w1 = &reps[rng.gen_range(0..reps.len())];
            let w2 = &reps[rng.gen_range(0..reps.len())];
            if w1 == w2 {
                continue;
            }
            // u: a random reduced extension read off the automaton from T
            let mut q = t;
            let mut u = sys.identity();
            for _ in 0..rng.gen_range(0..6) {
                let next: Vec<(usize, usize)> = aut.transitions()[q]
                    .iter()
                    .enumerate()
                    .filter_map(|(s, n)| n.map(|n| (s, n)))
                    .collect();
                let (s, n) = next[rng.gen_range(0..next.len())];
                u.right_mul_gen(&sys, s);
                q = n;
            }
            let v = u.multiply(&sys, &near[rng.gen_range(0..near.len())]);
            let interior = near.iter().all(|y| in_cone_of(&sys, w1, &v.multiply(&sys, y)));
            if !in_cone_of(&sys, w1, &u) || !interior {
                continue;
            }
            let p1 = kernel_row(&sys, &b, &walk, &w1.multiply(&sys, &u))
                .map_err(|e| e.to_string())?
                .get(&sys.shortlex_nf(&w1.multiply(&sys, &v)));
            let p2 = kernel_row(&sys, &b, &walk, &w2.multiply(&sys, &u))
                .map_err(|e| e.to_string())?
                .get(&sys.shortlex_nf(&w2.multiply(&sys, &v)));
            ensure!(
                p1 == p2,
                "T({}): w1 = {}, w2 = {}, u = {}, v = {}: {p1} vs {p2}",
                aut.state_label(&sys, t),
                sys.format_word(&sys.shortlex_nf(w1)),
                sys.format_word(&sys.shortlex_nf(w2)),
                sys.format_word(&sys.shortlex_nf(&u)),
                sys.format_word(&sys.shortlex_nf(&v))
            );
            nonzero += usize::from(!p1.is_zero());
            done += 1;
        }
        checked += done;
    }
    ensure!(nonzero >= 100, "only {nonzero} triples with positive probability");
    Ok(format!(
        "{checked} triples over {} cone types ({nonzero} with p > 0), {:.1} s",
        types.len(),
        start.elapsed().as_secs_f64()
    ))
}

fn c09_return_probabilities() -> Outcome {
    let start = Instant::now();
    let sys = w334();
    let b = BuildingSpec::uniform(&sys, 2).unwrap();
    let walk = WalkSpec::nearest_neighbour(&sys);
    let ret = n_step_return(&sys, &b, &walk, 20, 2_000_000).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(120), "n <= 10")?;
    ensure!(ret.probs[1].is_zero(), "p(1) = {}", ret.probs[1]);
    ensure!(ret.probs[2] == rat(1, 6), "p(2) = {}", ret.probs[2]);
    let rho = ret.rho_hat();
    ensure!(rho.iter().all(|&(m, _)| ret.probs[2 * m] < BigRational::one()), "some rho_hat >= 1");
    let shown: Vec<String> = rho.iter().map(|(_, r)| format!("{r:.4}")).collect();
    let rises: Vec<String> = (3..rho.len())
        .filter(|&m| ret.rho_cmp(m, m + 1) == std::cmp::Ordering::Less)
        .map(|m| format!("{m}->{}", m + 1))
        .collect();
    ensure!(
        rises.is_empty(),
        "p(1) = 0, p(2) = 1/6, all rho_hat < 1, but rho_hat increases at n = {} (rho_hat = {})",
        rises.join(", "),
        shown.join(" ")
    );
    Ok(format!("rho_hat = {}", shown.join(" ")))
}

fn c10_simulator_fidelity() -> Outcome {
    const SAMPLES: usize = 1_000_000;
    let start = Instant::now();
    let sys = w334();
    let aut = build_cannon(&sys).map_err(|e| e.to_string())?;
    let b = BuildingSpec::uniform(&sys, 2).unwrap();
    let walk = WalkSpec::nearest_neighbour(&sys);
    let sim = Simulator::new(&sys, &aut, &b, &walk).map_err(|e| e.to_string())?;
    let data = aut.require_roots().map_err(|e| e.to_string())?;
    let mut sources: Vec<Word> = Vec::new();
    let mut seen = HashSet::new();
    for id in 0.. {
        let tr = sim.simulate(3 * id as usize % 40, RngSpec::new(10, id));
        let u = tr.normal_forms(&sys).pop().unwrap();
        if seen.insert(u.clone()) {
            sources.push(u);
        }
        if sources.len() == 20 {
            break;
        }
    }
    let results = sources
        .par_iter()
        .enumerate()
        .map(|(i, u)| -> Result<(f64, f64), String> {
            let row = kernel_row(&sys, &b, &walk, &sys.word_to_element(u)).map_err(|e| e.to_string())?;
            let exact: HashMap<Word, f64> = row
                .entries
                .iter()
                .map(|(w, p)| (w.clone(), to_f64(p)))
                .collect();
            let origin = WalkState::from_reduced(data, u).expect("normal forms are reduced");
            let mut rng = RngSpec::new(1010, i as u64).rng();
            let mut counts: HashMap<Word, usize> = HashMap::new();
            for _ in 0..SAMPLES {
                let mut st = origin.clone();
                sim.step_word(&mut st, &mut rng);
                *counts.entry(st.word().to_vec()).or_default() += 1;
            }
            let mut empirical: HashMap<Word, f64> = HashMap::new();
            for (w, c) in counts {
                *empirical.entry(sys.shortlex_nf(&sys.word_to_element(&w))).or_default() += c as f64 / SAMPLES as f64;
            }
            let keys: HashSet<&Word> = exact.keys().chain(empirical.keys()).collect();
            let tv = 0.5
                * keys
                    .iter()
                    .map(|k| (exact.get(*k).unwrap_or(&0.0) - empirical.get(*k).unwrap_or(&0.0)).abs())
                    .sum::<f64>();
            let bound = 0.5 * exact.values().map(|p| 3.0 * (p * (1.0 - p) / SAMPLES as f64).sqrt()).sum::<f64>();
            Ok((tv, bound))
        })
        .collect::<Result<Vec<_>, _>>()?;
    within(start, Duration::from_secs(300), "fidelity check")?;
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let bound = results.iter().map(|r| r.1).fold(0.0, f64::max);
    ensure!(worst < 0.01, "max TV {worst:.5} over 20 sources");
    Ok(format!("20 sources x 10^6 samples: max TV {worst:.5} (3 sigma multinomial bound {bound:.5}), {:.0} s", start.elapsed().as_secs_f64()))
}

fn to_f64(p: &BigRational) -> f64 {
    let n: f64 = p.numer().to_string().parse().unwrap();
    let d: f64 = p.denom().to_string().parse().unwrap();
    n / d
}

const HORIZON: usize = 2000;
const TRAJECTORIES: usize = 1000;
const SEED: u64 = 20240601;

struct Lln {
    sys: CoxeterSystem,
    aut: CannonAutomaton,
    walk: WalkSpec,
    trajectories: Vec<Trajectory>,
}

fn lln_batch() -> &'static Lln {
    static BATCH: OnceLock<Lln> = OnceLock::new();
    BATCH.get_or_init(|| {
        let sys = w334();
        let aut = build_cannon(&sys).unwrap();
        let b = BuildingSpec::uniform(&sys, 2).unwrap();
        let walk = WalkSpec::nearest_neighbour(&sys);
        let trajectories = Simulator::new(&sys, &aut, &b, &walk)
            .unwrap()
            .batch_simulate(TRAJECTORIES, HORIZON, SEED);
        Lln {
            sys,
            aut,
            walk,
            trajectories,
        }
    })
}

fn renewals(mode: RenewalMode, l1: usize, tail_buffer: usize) -> Result<(Vec<RenewalSeries>, Estimates), String> {
    let lln = lln_batch();
    let t = RenewalConfig::default_cone_type(&lln.aut).map_err(|e| e.to_string())?;
    let cfg = RenewalConfig::build(&lln.sys, &lln.aut, &lln.walk, mode, t, l1, tail_buffer).map_err(|e| e.to_string())?;
    let series = lln
        .trajectories
        .par_iter()
        .map(|tr| extract_renewals(&lln.sys, &lln.aut, tr, &cfg))
        .collect::<coxwalk::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    let est = estimate(&series).map_err(|e| e.to_string())?;
    Ok((series, est))
}

fn default_l1() -> usize {
    let lln = lln_batch();
    RenewalConfig::default_l1(&lln.sys, &lln.walk)
}

fn baseline() -> &'static Result<(Vec<RenewalSeries>, Estimates), String> {
    static BASE: OnceLock<Result<(Vec<RenewalSeries>, Estimates), String>> = OnceLock::new();
    BASE.get_or_init(|| renewals(RenewalMode::EnterAndStay, default_l1(), RenewalConfig::default_tail_buffer(HORIZON)))
}

fn c11_lln() -> Outcome {
    let start = Instant::now();
    let (_, est) = baseline().as_ref().map_err(Clone::clone)?;
    let (dv, dse) = direct_speed(&lln_batch().trajectories).map_err(|e| e.to_string())?;
    let combined = (est.v_se.powi(2) + dse.powi(2)).sqrt();
    let gap = (est.v_hat - dv).abs() / combined;
    within(start, Duration::from_secs(600), "LLN batch")?;
    ensure!(gap < 3.0, "renewal {:.4} +- {:.4} vs endpoint {dv:.4} +- {dse:.4}: {gap:.2} combined SE", est.v_hat, est.v_se);
    ensure!(est.v_hat - 3.0 * est.v_se > 0.0, "v_hat - 3 SE <= 0");
    Ok(format!(
        "renewal v = {:.4} +- {:.4}, endpoint v = {dv:.4} +- {dse:.4}, gap {gap:.2} combined SE, {} increments",
        est.v_hat, est.v_se, est.n_increments
    ))
}

fn c12_clt() -> Outcome {
    let (series, est) = baseline().as_ref().map_err(Clone::clone)?;
    let trajs = &lln_batch().trajectories;
    let rep = clt_check(trajs, series, est.v_hat, est.sigma2_hat).map_err(|e| e.to_string())?;
    let control = clt_check(trajs, series, est.v_hat + 0.1, est.sigma2_hat).map_err(|e| e.to_string())?;
    ensure!(rep.ks_p > 0.01, "KS p = {:.4} (D = {:.4})", rep.ks_p, rep.ks_stat);
    ensure!(control.ks_p < 1e-6, "control with v + 0.1 gives p = {:.3e}", control.ks_p);
    Ok(format!(
        "sigma^2 = {:.3} +- {:.3}, KS D = {:.4}, p = {:.3}; control p = {:.1e}",
        est.sigma2_hat, est.sigma2_se, rep.ks_stat, rep.ks_p, control.ks_p
    ))
}

fn c13_renewal_structure() -> Outcome {
    let (series, est) = baseline().as_ref().map_err(Clone::clone)?;
    let lln = lln_batch();
    for (s, tr) in series.iter().zip(&lln.trajectories) {
        ensure!(s.is_additive(), "additivity fails");
        ensure!(s.is_nested(), "nesting fails");
        // independent recheck of the identity l(u_{R_n}) = l(u_{R_1}) + sum of increments
        if let (Some(&first), Some(&last)) = (s.times.first(), s.times.last()) {
            let total: usize = s.increments_dist.iter().sum();
            ensure!(
                tr.lengths[last] as usize == tr.lengths[first] as usize + total,
                "l(u_R_n) != l(u_R_1) + sum of increments"
            );
        }
    }
    let fit = est.tail_fit.as_ref().ok_or("no tail fit")?;
    ensure!(fit.slope < 0.0, "tail slope {:.4}", fit.slope);
    ensure!(fit.r2 > 0.9, "tail fit R^2 = {:.3}", fit.r2);
    Ok(format!(
        "{} series additive and nested; log-tail slope {:.4}, R^2 = {:.3} over {} points",
        series.len(),
        fit.slope,
        fit.r2,
        fit.points
    ))
}

fn c14_robustness() -> Outcome {
    let (_, base) = baseline().as_ref().map_err(Clone::clone)?;
    let l1 = default_l1();
    let tb = RenewalConfig::default_tail_buffer(HORIZON);
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for (label, l1x, tbx) in [("tail_buffer x2", l1, 2 * tb), ("L1 + 2", l1 + 2, tb)] {
        let (_, e) = renewals(RenewalMode::EnterAndStay, l1x, tbx)?;
        let dv = (e.v_hat - base.v_hat).abs() / base.v_se;
        let ds = (e.sigma2_hat - base.sigma2_hat).abs() / base.sigma2_se;
        lines.push(format!("{label}: dv {dv:.2} SE, dsigma^2 {ds:.2} SE"));
        if dv >= 1.0 || ds >= 1.0 {
            failures.push(label);
        }
    }
    let (_, p) = renewals(RenewalMode::PaperPrefix, lln_batch().walk.l0(), tb)?;
    let gap = (p.v_hat - base.v_hat).abs() / (p.v_se.powi(2) + base.v_se.powi(2)).sqrt();
    lines.push(format!("paper_prefix vs enter_and_stay: {gap:.2} combined SE"));
    if gap >= 3.0 {
        failures.push("modes");
    }
    let msg = lines.join("; ");
    if failures.is_empty() {
        Ok(msg)
    } else {
        Err(msg)
    }
}

type Criterion = (&'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 14] = [
    ("01 automaton (3,3,4)", c01_automaton_334),
    ("02 affine counterexamples", c02_affine_counterexamples),
    ("03 class II vertex counts", c03_class_two_counts),
    ("04 geodesic language oracle", c04_geodesic_language),
    ("05 triangle feasibility", c05_feasibility),
    ("06 Hecke structure constants", c06_hecke_suite),
    ("07 kernel double computation", c07_kernel_double_computation),
    ("08 cone invariance", c08_cone_invariance),
    ("09 return probabilities", c09_return_probabilities),
    ("10 simulator fidelity", c10_simulator_fidelity),
    ("11 law of large numbers", c11_lln),
    ("12 central limit theorem", c12_clt),
    ("13 renewal structure", c13_renewal_structure),
    ("14 robustness sweeps", c14_robustness),
];

fn main() {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = Vec::new();
    let mut ran = 0;
    for (name, check) in CRITERIA {
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name} [{secs:.1} s]  {detail}"),
            Err(detail) => {
                println!("FAIL  {name} [{secs:.1} s]  {detail}");
                failed.push(name);
            }
        }
    }
    println!("\n{} of {ran} criteria passed", ran - failed.len());
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
