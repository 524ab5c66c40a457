//! Run-to-completion control played directly on the environment, without the
//! yield machine.
//!
//! A controller vertex is a position of `E ∥ M`: the entered environment state,
//! the action that entered it, the fluent valuation and the safety-monitor
//! state. There the controller commits to what it enables next. A legal
//! choice enables either every available uncontrollable action or none of
//! them (after an uncontrollable step it must enable them all), plus at most
//! one controllable action; enabling more controllable actions only hands
//! the environment extra options. The environment then picks one enabled
//! action. Atoms of a position live on the choice vertex that follows it,
//! since whether the controller passes depends on that choice.
//!
//! The objective is the closed-loop goal `ψ_c ∧ (ψ_e -> φ)` as a Muller
//! condition: `u ∨ pass_E` is required, `c ∨ pass_M` joins the assumptions.
//! Deadlocks and safety violations lose.
//!
//! Legality only forces the controller to enable every uncontrollable action
//! after an uncontrollable step, so at the initial state it may keep the turn.
//! The yield reduction instead starts on the environment side; `env_first`
//! selects that convention.

use std::collections::{BTreeSet, HashMap};

use rtc_core::game::{brute_force_winning, Edge, GameArena, Owner, Vertex, VertexKind};
use rtc_core::monitor::Monitor;
use rtc_core::{ActionId, ControlProblem, FluentValuation, Formula, Position};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Config {
    state: usize,
    last: Option<ActionId>,
    valuation: FluentValuation,
    monitor: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Choice {
    all_u: bool,
    c: Option<ActionId>,
}

/// Builds the direct arena and solves it with the reference Muller solver.
pub fn rtc_realizable(p: &ControlProblem, env_first: bool) -> bool {
    let arena = direct_arena(p, env_first);
    brute_force_winning(&arena, usize::MAX).unwrap()[arena.initial()]
}

fn eval(f: &Formula, p: &ControlProblem, pos: &Position<'_>) -> bool {
    match f {
        Formula::Const(b) => *b,
        Formula::Fluent(n) => pos.valuation.get(p.fluents.index_of(n).unwrap()),
        Formula::Action(a) => pos.action == Some(a),
        Formula::Prop(q) => pos.labels.contains(q),
        Formula::Not(x) => !eval(x, p, pos),
        Formula::And(x, y) => eval(x, p, pos) && eval(y, p, pos),
        Formula::Or(x, y) => eval(x, p, pos) || eval(y, p, pos),
        Formula::Implies(x, y) => !eval(x, p, pos) || eval(y, p, pos),
        other => panic!("`{other}` is not propositional"),
    }
}

pub fn direct_arena(p: &ControlProblem, env_first: bool) -> GameArena {
    let e = &p.env;
    let ctrl: BTreeSet<ActionId> = p.controllable.iter().cloned().collect();
    let mut monitor = Monitor::new(&p.goal.safety_conjunction(), &p.fluents).unwrap();
    let g = &p.goal;
    assert!(g.require.is_empty());
    let (na, ng) = (1 + g.assumptions.len(), g.guarantees.len());

    let mut vertices: Vec<Vertex> = Vec::new();
    let mut edges: Vec<Vec<Edge>> = Vec::new();
    let mut index: HashMap<Config, usize> = HashMap::new();
    let mut queue: Vec<(usize, Config)> = Vec::new();
    let blank = |owner: Owner| Vertex { owner, kind: VertexKind::Plain, require: 0, assume: 0, guarantee: 0 };

    let sink = 0;
    vertices.push(blank(Owner::Env));
    edges.push(Vec::new());
    let c0 = Config {
        state: e.initial(),
        last: None,
        valuation: p.fluents.initial_valuation(e.labels(e.initial())),
        monitor: monitor.initial(),
    };
    index.insert(c0.clone(), 1);
    vertices.push(blank(Owner::Ctrl));
    edges.push(Vec::new());
    queue.push((1, c0));

    while let Some((v, x)) = queue.pop() {
        let s = x.state;
        let u_here: Vec<ActionId> = e.out(s).iter().map(|(a, _)| a).filter(|a| !ctrl.contains(*a)).cloned().collect();
        let c_here: BTreeSet<ActionId> = e.out(s).iter().map(|(a, _)| a).filter(|a| ctrl.contains(*a)).cloned().collect();
        let after_u = x.last.as_ref().map_or(env_first, |a| !ctrl.contains(a));
        let mut choices = vec![Choice { all_u: true, c: None }];
        for c in &c_here {
            choices.push(Choice { all_u: true, c: Some(c.clone()) });
            if !after_u {
                choices.push(Choice { all_u: false, c: Some(c.clone()) });
            }
        }
        let labels = e.labels(s);
        let pos = Position { valuation: x.valuation, action: x.last.as_ref(), labels };
        for ch in choices {
            let enabled: Vec<ActionId> =
                (if ch.all_u { u_here.clone() } else { Vec::new() }).into_iter().chain(ch.c.clone()).collect();
            if enabled.is_empty() {
                continue;
            }
            let mut cv = blank(Owner::Env);
            if x.last.is_some() {
                let u = x.last.as_ref().is_some_and(|a| !ctrl.contains(a));
                let c = x.last.as_ref().is_some_and(|a| ctrl.contains(a));
                let pass_e = u_here.is_empty();
                let pass_m = ch.c.is_none();
                cv.require = u64::from(u || pass_e);
                cv.assume = u64::from(c || pass_m);
                for (k, a) in g.assumptions.iter().enumerate() {
                    cv.assume |= u64::from(eval(a, p, &pos)) << (k + 1);
                }
                for (k, f) in g.guarantees.iter().enumerate() {
                    cv.guarantee |= u64::from(eval(f, p, &pos)) << k;
                }
            }
            let cid = vertices.len();
            vertices.push(cv);
            edges.push(Vec::new());
            edges[v].push(Edge { action: None, target: cid });
            for a in enabled {
                let t = e.successors(s, &a).next().unwrap();
                let valuation = p.fluents.step_valuation(x.valuation, &a, e.labels(t));
                let q = monitor.step(x.monitor, &Position { valuation, action: Some(&a), labels: e.labels(t) });
                let target = if monitor.is_violation(q) {
                    sink
                } else {
                    let y = Config { state: t, last: Some(a.clone()), valuation, monitor: q };
                    *index.entry(y.clone()).or_insert_with(|| {
                        let id = vertices.len();
                        vertices.push(blank(Owner::Ctrl));
                        edges.push(Vec::new());
                        queue.push((id, y));
                        id
                    })
                };
                edges[cid].push(Edge { action: Some(a), target });
            }
        }
    }
    GameArena::new(vertices, edges, 1, (1, na, ng)).unwrap()
}
