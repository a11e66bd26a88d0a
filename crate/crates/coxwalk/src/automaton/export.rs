use std::fmt::Write;

use serde_json::{json, Value};

use super::CannonAutomaton;
use crate::coxeter::CoxeterSystem;

const PALETTE: [&str; 8] = [
    "darkgreen", "blue", "red", "orange", "purple", "brown", "magenta", "gray40",
];

impl CannonAutomaton {
    /// Graphviz rendering: states labelled by representatives, recurrent
    /// states filled, edges labelled and coloured by generator.
    pub fn to_dot(&self, sys: &CoxeterSystem) -> String {
        let mut out = String::from("digraph cannon {\n  rankdir=LR;\n  node [shape=ellipse, fontname=\"Helvetica\"];\n");
        for q in 0..self.num_states() {
            let label = if q == 0 { "∅".to_string() } else { self.state_label(sys, q) };
            let style = if self.is_recurrent(q) {
                ", style=filled, fillcolor=\"lightblue\""
            } else {
                ""
            };
            let _ = writeln!(out, "  q{q} [label=\"{label}\"{style}];");
        }
        for q in 0..self.num_states() {
            for (s, t) in self.transitions()[q].iter().enumerate() {
                if let Some(t) = t {
                    let _ = writeln!(
                        out,
                        "  q{q} -> q{t} [label=\"{}\", color=\"{}\"];",
                        self.labels()[s],
                        PALETTE[s % PALETTE.len()]
                    );
                }
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self, sys: &CoxeterSystem) -> Value {
        let states: Vec<Value> = (0..self.num_states())
            .map(|q| {
                let next: serde_json::Map<String, Value> = self.transitions()[q]
                    .iter()
                    .enumerate()
                    .map(|(s, t)| (self.labels()[s].clone(), t.map_or(Value::Null, |t| json!(t))))
                    .collect();
                json!({
                    "id": q,
                    "representative": self.state_label(sys, q),
                    "recurrent": self.is_recurrent(q),
                    "scc": self.scc_of(q),
                    "transitions": next,
                })
            })
            .collect();
        let conn = self.strong_connectivity();
        json!({
            "generators": self.labels(),
            "start": self.start(),
            "num_states": self.num_states(),
            "num_recurrent": self.recurrent_states().len(),
            "strongly_connected": conn.strongly_connected,
            "witness": conn.witness.map(|(a, b)| json!([self.state_label(sys, a), self.state_label(sys, b)])),
            "states": states,
        })
    }
}
