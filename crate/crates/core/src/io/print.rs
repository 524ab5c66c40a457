//! Printer for the problem syntax; `parse_problem(print_problem(p))` gives `p` back.

use std::fmt::Write;

use crate::dlts::Dlts;
use crate::fluent::FluentKind;
use crate::problem::{ControlProblem, Mode};

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// A `dlts` block listing states in index order.
pub fn print_dlts(d: &Dlts) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dlts {}", d.name());
    let _ = writeln!(out, "  states: {}", join(d.states().map(|s| d.state_name(s)), " "));
    let _ = writeln!(out, "  init: {}", d.state_name(d.initial()));
    let _ = writeln!(out, "  controlled: {}", join(d.alphabet().controlled(), " "));
    let _ = writeln!(out, "  monitored: {}", join(d.alphabet().monitored(), " "));
    let plain: Vec<_> = d.props().iter().filter(|p| !d.enabledness_props().contains(*p)).collect();
    if !plain.is_empty() {
        let _ = writeln!(out, "  props: {}", join(plain, " "));
    }
    if !d.enabledness_props().is_empty() {
        let _ = writeln!(out, "  enabledness: {}", join(d.enabledness_props(), " "));
    }
    for s in d.states() {
        if !d.labels(s).is_empty() {
            let _ = writeln!(out, "  label {}: {}", d.state_name(s), join(d.labels(s), " "));
        }
    }
    for s in d.states() {
        if let Some(side) = d.side(s) {
            let _ = writeln!(out, "  side {} {}", d.state_name(s), side.tag());
        }
    }
    for (s, a, t) in d.transitions() {
        let _ = writeln!(out, "  trans {} {a} {}", d.state_name(s), d.state_name(t));
    }
    out.push_str("end\n");
    out
}

pub fn print_problem(p: &ControlProblem, mode: Mode) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mode: {}", mode.as_str());
    let _ = writeln!(out, "controllable: {}\n", join(&p.controllable, " "));
    out.push_str(&print_dlts(&p.env));
    let _ = writeln!(out, "environment {}\n", p.env.name());
    for f in p.fluents.iter() {
        match &f.kind {
            FluentKind::Transition { initiating, terminating, initially } => {
                let _ = writeln!(
                    out,
                    "fluent {} = <{{{}}},{{{}}},{initially}>",
                    f.name,
                    join(initiating, ", "),
                    join(terminating, ", ")
                );
            }
            FluentKind::Prop(q) => {
                let _ = writeln!(out, "fluent {} = @{q}", f.name);
            }
        }
    }
    let g = &p.goal;
    for f in &g.safety {
        let _ = writeln!(out, "goal safety: {f}");
    }
    for f in &g.require {
        let _ = writeln!(out, "require GF {f}");
    }
    for f in &g.assumptions {
        let _ = writeln!(out, "assume GF {f}");
    }
    for f in &g.guarantees {
        let _ = writeln!(out, "guarantee GF {f}");
    }
    out
}
