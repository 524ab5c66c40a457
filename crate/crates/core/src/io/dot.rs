//! Graphviz export.

use std::fmt::Write;

use crate::dlts::{Dlts, Side};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Deterministic DOT rendering; controller-turn states are drawn as filled boxes.
pub fn to_dot(d: &Dlts) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(d.name()));
    out.push_str("  rankdir=LR;\n  __init [shape=point];\n");
    for s in d.states() {
        let mut label = d.state_name(s).to_string();
        if !d.labels(s).is_empty() {
            let props: Vec<_> = d.labels(s).iter().map(|p| p.to_string()).collect();
            label.push_str(&format!("\n{{{}}}", props.join(",")));
        }
        let style = match d.side(s) {
            Some(Side::Ctrl) => ", shape=box, style=filled, fillcolor=lightgrey",
            _ => "",
        };
        let _ = writeln!(out, "  s{s} [label={}{style}];", quote(&label));
    }
    let _ = writeln!(out, "  __init -> s{};", d.initial());
    let mut edges: Vec<_> = d.transitions().collect();
    edges.sort();
    for (s, a, t) in edges {
        let dashed = if d.alphabet().is_controlled(a) { "" } else { ", style=dashed" };
        let _ = writeln!(out, "  s{s} -> s{t} [label={}{dashed}];", quote(a.name()));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_dlts;

    #[test]
    fn dot_is_stable_and_escaped() {
        let d = parse_dlts("dlts \"M\"\n  states: a b\n  controlled: c\n  monitored: u\n  side b c\n  trans a u b\n  trans a c a\n").unwrap();
        let dot = to_dot(&d);
        assert!(dot.starts_with("digraph \"\\\"M\\\"\" {"));
        let a = dot.find("s0 -> s0 [label=\"c\"]").unwrap();
        let b = dot.find("s0 -> s1 [label=\"u\", style=dashed]").unwrap();
        assert!(a < b);
        assert!(dot.contains("fillcolor"));
        assert_eq!(dot, to_dot(&d));
    }
}
