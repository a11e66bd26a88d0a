//! Every example runs to completion.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        #[path = $file]
        mod $name;

        #[test]
        fn $name() {
            $name::run_example().unwrap();
        }
    };
}

example!(exact_field, "../examples/exact_field.rs");
example!(cone_types, "../examples/cone_types.rs");
example!(building_feasibility, "../examples/building_feasibility.rs");
example!(hecke_kernel, "../examples/hecke_kernel.rs");
example!(return_probabilities, "../examples/return_probabilities.rs");
example!(simulate_walk, "../examples/simulate_walk.rs");
example!(renewal_estimates, "../examples/renewal_estimates.rs");
example!(clt_check, "../examples/clt_check.rs");
example!(experiment_pipeline, "../examples/experiment_pipeline.rs");
