//! Property tests against matrix arithmetic and brute force.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use coxwalk::automaton::{build_cannon, CannonAutomaton};
use coxwalk::config::{ExperimentConfig, QParam};
use coxwalk::hecke::{kernel_row, BuildingSpec, WalkSpec};
use coxwalk::renewal::RenewalMode;
use coxwalk::walk::WalkState;
use coxwalk::{AlgebraicField, CoxeterSystem};

struct Fixture {
    sys: CoxeterSystem,
    aut: CannonAutomaton,
}

fn fixtures() -> &'static [Fixture] {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| {
        [
            CoxeterSystem::triangle(4, 3, 3).unwrap(),
            CoxeterSystem::triangle(7, 3, 2).unwrap(),
            CoxeterSystem::triangle(5, 4, 2).unwrap(),
            CoxeterSystem::polygon(&[2, 3, 2, 4, 2]).unwrap(),
        ]
        .into_iter()
        .map(|sys| {
            let aut = build_cannon(&sys).unwrap();
            Fixture { sys, aut }
        })
        .collect()
    })
}

fn system_and_word(max_len: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..4usize).prop_flat_map(move |i| {
        let rank = fixtures()[i].sys.rank();
        (Just(i), prop::collection::vec(0..rank, 0..max_len))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_forms_are_reduced_and_stable((i, w) in system_and_word(16)) {
        let sys = &fixtures()[i].sys;
        let g = sys.word_to_element(&w);
        let nf = sys.shortlex_nf(&g);
        prop_assert!(sys.is_reduced(&nf));
        prop_assert_eq!(nf.len(), sys.length(&g));
        prop_assert_eq!(&sys.word_to_element(&nf), &g);
        prop_assert_eq!(sys.shortlex_nf(&sys.word_to_element(&nf)), nf.clone());
        prop_assert!(nf.len() <= w.len() && (w.len() - nf.len()) % 2 == 0);
    }

    #[test]
    fn dfa_accepts_exactly_the_reduced_words((i, w) in system_and_word(14)) {
        let f = &fixtures()[i];
        prop_assert_eq!(f.aut.accepts(&w), f.sys.is_reduced(&w));
    }

    #[test]
    fn walk_state_tracks_the_product((i, w) in system_and_word(60)) {
        let f = &fixtures()[i];
        let data = f.aut.require_roots().unwrap();
        let mut st = WalkState::identity();
        let mut g = f.sys.identity();
        for &s in &w {
            let up = st.apply(&f.sys, data, s);
            prop_assert_eq!(up, g.is_right_ascent(&f.sys, s));
            g.right_mul_gen(&f.sys, s);
            prop_assert_eq!(st.len(), f.sys.length(&g));
        }
        prop_assert!(f.sys.is_reduced(st.word()));
        prop_assert_eq!(&f.sys.word_to_element(st.word()), &g);
        prop_assert_eq!(st.cone_type(data), f.aut.cone_type_of_element(&f.sys, &g));
    }

    #[test]
    fn kernel_rows_are_probability_vectors(
        (i, w) in system_and_word(8),
        q in prop::collection::vec(1u64..5, 5),
    ) {
        let sys = &fixtures()[i].sys;
        let q: Vec<u64> = match sys.rank() {
            3 => vec![q[0]; 3],
            n => q[..n].to_vec(),
        };
        // odd m forces equal parameters; other choices are rejected or warned about
        let Ok(b) = BuildingSpec::new(sys, q) else { return Ok(()); };
        prop_assume!(b.warnings().is_empty());
        let walk = WalkSpec::nearest_neighbour(sys);
        let row = kernel_row(sys, &b, &walk, &sys.word_to_element(&w)).unwrap();
        prop_assert!(row.total().is_one());
        prop_assert!(row.entries.iter().all(|(_, p)| *p > BigRational::from_integer(0.into())));
    }

    #[test]
    fn field_arithmetic_matches_floats(
        n in prop::sample::select(vec![5u32, 7, 8, 9, 12]),
        a in prop::collection::vec(-20i64..20, 4),
        b in prop::collection::vec(-20i64..20, 4),
    ) {
        let field = AlgebraicField::with_conductor(n);
        let l = field.lambda();
        let poly = |c: &[i64]| {
            let mut acc = field.zero();
            let mut pow = field.one();
            for &k in c {
                acc = &acc + &field.mul(&pow, &field.from_int(k));
                pow = field.mul(&pow, &l);
            }
            acc
        };
        let (x, y) = (poly(&a), poly(&b));
        let prod = field.mul(&x, &y);
        let approx = field.to_f64(&x) * field.to_f64(&y);
        prop_assert!((field.to_f64(&prod) - approx).abs() <= 1e-6 * (1.0 + approx.abs()));
        let d = &x - &y;
        let fd = field.to_f64(&x) - field.to_f64(&y);
        if fd.abs() > 1e-9 {
            prop_assert_eq!(field.sign(&d), if fd > 0.0 { 1 } else { -1 });
        }
        if !x.is_zero() {
            let inv = field.inv(&x).unwrap();
            prop_assert!((&field.mul(&inv, &x) - &field.one()).is_zero());
        }
    }

    #[test]
    fn config_round_trips_through_toml(
        (a, b, c) in (2u32..9, 2u32..9, 2u32..9),
        q in 1u64..6,
        seed in any::<u64>(),
        horizon in 10usize..5000,
        paper in any::<bool>(),
        l1 in prop::option::of(1usize..20),
    ) {
        let mut cfg = ExperimentConfig::triangle(a, b, c);
        cfg.building = Some(coxwalk::config::BuildingSection { q: QParam::Uniform(q) });
        cfg.experiment.seed = seed;
        cfg.experiment.horizon = horizon;
        cfg.renewal.mode = if paper { RenewalMode::PaperPrefix } else { RenewalMode::EnterAndStay };
        cfg.renewal.l1 = l1;
        match cfg.to_toml() {
            Ok(text) => {
                let back: ExperimentConfig = text.parse().unwrap();
                prop_assert_eq!(back, cfg);
            }
            Err(_) => {
                prop_assert!(seed > i64::MAX as u64);
                prop_assert!(coxwalk::config::Experiment::new(cfg).is_err());
            }
        }
    }
}
