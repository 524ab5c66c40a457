//! Deterministic monitors for safety formulas, by formula progression.
//!
//! A monitor state is a disjunction of conjunctions of pending obligations,
//! each obligation a `G` or `W` subformula that must hold from the next
//! position on. States are kept in a canonical form (sorted, absorbed) and
//! interned lazily, so only the states actually visited are materialised.

use std::collections::{BTreeSet, HashMap, VecDeque};

use indexmap::IndexSet;

use crate::dlts::{Alphabet, Dlts, DltsBuilder};
use crate::error::{usage, Result};
use crate::fluent::{FluentKind, FluentSet};
use crate::formula::{Atom, Formula, Position};
use crate::symbol::ActionId;

#[derive(Clone, Debug)]
enum Node {
    Atom(Atom),
    And(usize, usize),
    Or(usize, usize),
    Always(usize),
    WeakUntil(usize, usize),
}

type Clause = Vec<u32>;
type Dnf = Vec<Clause>;

#[derive(Clone, Debug)]
pub struct Monitor {
    nodes: Vec<Node>,
    states: IndexSet<Dnf>,
}

impl Monitor {
    /// The rejecting sink: once reached, the formula is violated on every extension.
    pub const VIOLATION: usize = 0;

    pub fn new(f: &Formula, fluents: &FluentSet) -> Result<Monitor> {
        f.check_safety()?;
        let mut m = Monitor { nodes: Vec::new(), states: IndexSet::new() };
        let root = m.lower(f, fluents)? as u32;
        m.states.insert(Vec::new());
        m.states.insert(vec![vec![root]]);
        Ok(m)
    }

    fn lower(&mut self, f: &Formula, fluents: &FluentSet) -> Result<usize> {
        let node = if f.is_propositional() {
            Node::Atom(f.compile(fluents)?)
        } else {
            match f {
                Formula::And(a, b) => Node::And(self.lower(a, fluents)?, self.lower(b, fluents)?),
                Formula::Or(a, b) => Node::Or(self.lower(a, fluents)?, self.lower(b, fluents)?),
                Formula::Implies(a, b) => {
                    let na = Node::Atom(Atom::Not(Box::new(a.compile(fluents)?)));
                    self.nodes.push(na);
                    let ia = self.nodes.len() - 1;
                    Node::Or(ia, self.lower(b, fluents)?)
                }
                Formula::Always(a) => Node::Always(self.lower(a, fluents)?),
                Formula::WeakUntil(a, b) => Node::WeakUntil(self.lower(a, fluents)?, self.lower(b, fluents)?),
                _ => unreachable!("rejected by check_safety"),
            }
        };
        self.nodes.push(node);
        Ok(self.nodes.len() - 1)
    }

    pub fn initial(&self) -> usize {
        1
    }

    /// Number of states interned so far.
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn is_violation(&self, state: usize) -> bool {
        state == Self::VIOLATION
    }

    /// True when no obligation is left: every continuation is accepted.
    pub fn is_satisfied(&self, state: usize) -> bool {
        self.states[state].iter().any(Vec::is_empty)
    }

    /// Advances the monitor by one position.
    pub fn step(&mut self, state: usize, pos: &Position<'_>) -> usize {
        if state == Self::VIOLATION {
            return state;
        }
        let mut out: Dnf = Vec::new();
        for clause in &self.states[state] {
            let mut acc: Dnf = vec![Vec::new()];
            for &n in clause {
                let p = self.progress(n as usize, pos);
                acc = product(&acc, &p);
                if acc.is_empty() {
                    break;
                }
            }
            out.extend(acc);
        }
        let out = normalize(out);
        self.states.insert_full(out).0
    }

    fn progress(&self, n: usize, pos: &Position<'_>) -> Dnf {
        match &self.nodes[n] {
            Node::Atom(a) => {
                if a.eval(pos) {
                    vec![Vec::new()]
                } else {
                    Vec::new()
                }
            }
            Node::And(a, b) => product(&self.progress(*a, pos), &self.progress(*b, pos)),
            Node::Or(a, b) => {
                let mut d = self.progress(*a, pos);
                d.extend(self.progress(*b, pos));
                normalize(d)
            }
            Node::Always(a) => product(&self.progress(*a, pos), &[vec![n as u32]]),
            Node::WeakUntil(a, b) => {
                let mut d = self.progress(*b, pos);
                d.extend(product(&self.progress(*a, pos), &[vec![n as u32]]));
                normalize(d)
            }
        }
    }

    /// Human-readable rendering of a state's pending obligations.
    pub fn describe(&self, state: usize) -> String {
        let dnf = &self.states[state];
        if dnf.is_empty() {
            return "violated".into();
        }
        dnf.iter()
            .map(|c| {
                if c.is_empty() {
                    "true".to_string()
                } else {
                    c.iter().map(|n| format!("n{n}")).collect::<Vec<_>>().join("&")
                }
            })
            .collect::<Vec<_>>()
            .join("|")
    }
}

fn product(a: &[Clause], b: &[Clause]) -> Dnf {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut c: Clause = x.iter().chain(y.iter()).copied().collect();
            c.sort_unstable();
            c.dedup();
            out.push(c);
        }
    }
    normalize(out)
}

/// Sorts clauses and drops those subsumed by a smaller one.
fn normalize(mut d: Dnf) -> Dnf {
    for c in &mut d {
        c.sort_unstable();
        c.dedup();
    }
    d.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    d.dedup();
    let mut out: Dnf = Vec::with_capacity(d.len());
    for c in d {
        if !out.iter().any(|k| k.iter().all(|n| c.binary_search(n).is_ok())) {
            out.push(c);
        }
    }
    out.sort();
    out
}

/// Exports the monitor of `f` as a deterministic DLTS over `alphabet`.
///
/// States pair a monitor state with the fluent valuation; all violating
/// states are merged into a single absorbing sink, whose index is returned
/// when reachable. Formulas that read state propositions cannot be decided
/// from actions alone and are rejected.
pub fn compile_safety_monitor(
    f: &Formula,
    fluents: &FluentSet,
    alphabet: &BTreeSet<ActionId>,
) -> Result<(Dlts, Option<usize>)> {
    let mut reads_props = false;
    f.walk(&mut |n| match n {
        Formula::Prop(_) => reads_props = true,
        Formula::Fluent(name) => {
            if matches!(fluents.by_name(name).map(|fl| &fl.kind), Some(FluentKind::Prop(_))) {
                reads_props = true;
            }
        }
        _ => {}
    });
    if reads_props {
        return usage("monitor export needs a formula over actions and transition fluents only");
    }
    let mut mon = Monitor::new(f, fluents)?;
    let none = BTreeSet::new();
    let mut b = DltsBuilder::new("monitor", Alphabet::new([], alphabet.iter().cloned())?);
    let v0 = fluents.initial_valuation(&none);
    let mut index = HashMap::new();
    let name = |mon: &Monitor, q: usize, v: u64| {
        if q == Monitor::VIOLATION {
            "violation".to_string()
        } else {
            format!("{}#{v:x}", mon.describe(q))
        }
    };
    let start = (mon.initial(), v0);
    let s0 = b.state(name(&mon, start.0, v0.bits()));
    b.initial(s0);
    index.insert(start, s0);
    let mut queue = VecDeque::from([start]);
    let mut sink = None;
    while let Some((q, v)) = queue.pop_front() {
        let src = index[&(q, v)];
        for a in alphabet {
            let (nq, nv) = if q == Monitor::VIOLATION {
                (q, v)
            } else {
                let nv = fluents.step_valuation(v, a, &none);
                let nq = mon.step(q, &Position { valuation: nv, action: Some(a), labels: &none });
                // the sink forgets the valuation
                if nq == Monitor::VIOLATION {
                    (nq, v0)
                } else {
                    (nq, nv)
                }
            };
            let dst = match index.get(&(nq, nv)) {
                Some(&d) => d,
                None => {
                    let d = b.state(name(&mon, nq, nv.bits()));
                    index.insert((nq, nv), d);
                    queue.push_back((nq, nv));
                    d
                }
            };
            if nq == Monitor::VIOLATION {
                sink = Some(dst);
            }
            b.transition(src, a.clone(), dst);
        }
    }
    Ok((b.build()?, sink))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fluent::Fluent;
    use crate::formula::urg_rsp;

    fn a(s: &str) -> ActionId {
        ActionId::new(s)
    }

    fn run(f: &Formula, fluents: &FluentSet, trace: &[&str]) -> bool {
        let mut m = Monitor::new(f, fluents).unwrap();
        let none = BTreeSet::new();
        let mut q = m.initial();
        let mut v = fluents.initial_valuation(&none);
        for s in trace {
            let act = a(s);
            v = fluents.step_valuation(v, &act, &none);
            q = m.step(q, &Position { valuation: v, action: Some(&act), labels: &none });
        }
        !m.is_violation(q)
    }

    #[test]
    fn landing_requires_picture_or_alert() {
        let fl = FluentSet::new([
            Fluent::transition("CritBat", [a("criticalBat")], [a("takeoff")], false).unwrap(),
            Fluent::transition("Sensed", [a("takePicture")], [a("takeoff")], false).unwrap(),
        ])
        .unwrap();
        let goal = Formula::action("land")
            .implies(Formula::fluent("CritBat").or(Formula::fluent("Sensed")))
            .always();
        assert!(!run(&goal, &fl, &["takeoff", "land"]));
        assert!(run(&goal, &fl, &["takeoff", "takePicture", "land"]));
        assert!(run(&goal, &fl, &["takeoff", "criticalBat", "land"]));
    }

    #[test]
    fn always_true_never_violates() {
        let fl = FluentSet::default();
        let alphabet: BTreeSet<ActionId> = [a("x"), a("y")].into();
        let (d, sink) = compile_safety_monitor(&Formula::Const(true).always(), &fl, &alphabet).unwrap();
        assert_eq!(d.num_states(), 1);
        assert!(sink.is_none());
        assert!(d.is_deterministic());
    }

    #[test]
    fn urgent_response_rejects_other_controlled_action_first() {
        let c = [a("econoMode"), a("go.1.2"), a("land")];
        let f = urg_rsp(Formula::action("lowBat"), Formula::action("econoMode"), &c);
        let fl = FluentSet::default();
        assert!(!run(&f, &fl, &["lowBat", "go.1.2", "arrive"]));
        assert!(run(&f, &fl, &["lowBat", "arrive", "econoMode", "go.1.2"]));
        // other controlled actions may precede the response within the same run
        assert!(run(&f, &fl, &["lowBat", "land", "econoMode", "arrive"]));
        assert!(run(&f, &fl, &["lowBat", "land"]));
    }

    #[test]
    fn false_response_blocks_controller_after_trigger() {
        let c = [a("c")];
        let f = urg_rsp(Formula::action("t"), Formula::Const(false), &c);
        let fl = FluentSet::default();
        assert!(run(&f, &fl, &["c", "t", "u", "u"]));
        assert!(!run(&f, &fl, &["t", "c", "u"]));
        // once the controller moves it must keep moving
        assert!(run(&f, &fl, &["t", "c", "c"]));
        let vacuous = urg_rsp(Formula::Const(false), Formula::action("c"), &c);
        let alphabet: BTreeSet<ActionId> = [a("c"), a("t")].into();
        let (d, sink) = compile_safety_monitor(&vacuous, &fl, &alphabet).unwrap();
        assert!(sink.is_none());
        assert_eq!(d.num_states(), 1);
    }

    #[test]
    fn weak_until_may_wait_forever() {
        let fl = FluentSet::default();
        let f = Formula::action("a").weak_until(Formula::action("b"));
        assert!(run(&f, &fl, &["a", "a", "a"]));
        assert!(run(&f, &fl, &["a", "b", "c"]));
        assert!(!run(&f, &fl, &["a", "c"]));
    }

    #[test]
    fn export_rejects_state_propositions() {
        let fl = FluentSet::default();
        let f = Formula::prop("p").always();
        assert!(compile_safety_monitor(&f, &fl, &BTreeSet::new()).is_err());
        let f = Formula::action("a").weak_until(Formula::Until(
            Box::new(Formula::action("a")),
            Box::new(Formula::action("b")),
        ));
        assert!(matches!(Monitor::new(&f, &fl), Err(crate::Error::Spec(_))));
    }
}
