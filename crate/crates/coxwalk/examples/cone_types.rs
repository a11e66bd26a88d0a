//! Cone types of Coxeter groups: the geodesic automaton, its recurrent part,
//! the explicit construction for Fuchsian triangles, and Graphviz output.
//!
//! `cargo run --release --example cone_types`

use coxwalk::automaton::{appendix_automaton, build_cannon};
use coxwalk::CoxeterSystem;

pub fn run_example() -> coxwalk::Result<()> {
    let sys = CoxeterSystem::triangle(4, 3, 3)?;
    let aut = build_cannon(&sys)?;
    println!("{}: {}", sys.classify().name(), sys);
    println!(
        "{} cone types, {} recurrent, strongly connected: {}",
        aut.num_states(),
        aut.recurrent_states().len(),
        aut.is_strongly_connected()
    );
    let transient: Vec<String> = aut.transient_states().iter().map(|&q| aut.state_label(&sys, q)).collect();
    println!("transient: {}", transient.join(" "));

    // growth series from the automaton
    println!("geodesic words: {:?}", aut.geodesic_counts(8));
    println!("sphere sizes:   {:?}", aut.sphere_sizes(&sys, 8)?);

    let app = appendix_automaton(&sys)?;
    println!("explicit construction isomorphic: {}", app.automaton.is_isomorphic(&aut));

    // a Euclidean triangle group loses strong connectivity
    let affine = CoxeterSystem::triangle(4, 4, 2)?;
    let a = build_cannon(&affine)?;
    let from = a.cone_type_of(&affine, &affine.parse_word("1212")?)?;
    let to = a.cone_type_of(&affine, &affine.parse_word("13")?)?;
    println!(
        "(4,4,2): {} cone types, path from T(1212) to T(13): {}",
        a.num_states(),
        a.has_path(from, to)
    );

    let dot = aut.to_dot(&sys);
    println!("DOT output: {} lines, starts with {:?}", dot.lines().count(), dot.lines().next().unwrap_or(""));
    Ok(())
}

#[allow(dead_code)]
fn main() -> coxwalk::Result<()> {
    run_example()
}
