//! Seeded random instances.

use std::collections::BTreeSet;

use indexmap::IndexSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rtc_core::game::{Edge, GameArena, Owner, Vertex, VertexKind};
use rtc_core::{ActionId, Alphabet, ControlProblem, Dlts, DltsBuilder, Fluent, FluentSet, Formula, Goal, PropId};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `c0..` controllable and `u0..` uncontrollable action names.
pub fn actions(n_c: usize, n_u: usize) -> (Vec<ActionId>, Vec<ActionId>) {
    let c = (0..n_c).map(|i| ActionId::new(format!("c{i}"))).collect();
    let u = (0..n_u).map(|i| ActionId::new(format!("u{i}"))).collect();
    (c, u)
}

/// Splits `1..=max_actions` actions into at least one of each kind.
pub fn random_split(rng: &mut Rng8, max_actions: usize) -> (Vec<ActionId>, Vec<ActionId>) {
    let n = rng.gen_range(2..=max_actions.max(2));
    let n_c = rng.gen_range(1..n);
    actions(n_c, n - n_c)
}

pub fn props(n: usize) -> Vec<PropId> {
    (0..n).map(|i| PropId::new(format!("p{i}"))).collect()
}

/// A random DLTS on states `s0..`, each action present at a state with
/// probability `density`. Deterministic when asked.
pub fn random_dlts(
    rng: &mut Rng8,
    name: &str,
    n_states: usize,
    c: &[ActionId],
    u: &[ActionId],
    props: &[PropId],
    density: f64,
    deterministic: bool,
) -> Dlts {
    let mut b = DltsBuilder::new(name, Alphabet::new(c.iter().cloned(), u.iter().cloned()).unwrap());
    let states: Vec<usize> = (0..n_states).map(|i| b.state(format!("s{i}"))).collect();
    for p in props {
        b.prop(p.clone());
    }
    for &s in &states {
        for p in props {
            if rng.gen_bool(0.4) {
                b.label(s, p.clone());
            }
        }
        for a in c.iter().chain(u) {
            if rng.gen_bool(density) {
                b.transition(s, a.clone(), *states.choose(rng).unwrap());
                if !deterministic && rng.gen_bool(0.2) {
                    b.transition(s, a.clone(), *states.choose(rng).unwrap());
                }
            }
        }
    }
    b.build().unwrap()
}

/// Like [`random_dlts`] but every state keeps at least one outgoing transition.
pub fn random_live_dlts(
    rng: &mut Rng8,
    name: &str,
    n_states: usize,
    c: &[ActionId],
    u: &[ActionId],
    props: &[PropId],
    density: f64,
) -> Dlts {
    loop {
        let d = random_dlts(rng, name, n_states, c, u, props, density, true);
        if d.states().all(|s| !d.is_deadlock(s)) {
            return d;
        }
    }
}

pub fn random_fluents(rng: &mut Rng8, alphabet: &[ActionId], props: &[PropId], n: usize) -> FluentSet {
    let mut set = FluentSet::default();
    for i in 0..n {
        if !props.is_empty() && rng.gen_bool(0.2) {
            set.push(Fluent::prop(format!("F{i}"), props.choose(rng).unwrap().clone())).unwrap();
            continue;
        }
        let (mut init, mut term) = (Vec::new(), Vec::new());
        for a in alphabet {
            match rng.gen_range(0..3) {
                0 => init.push(a.clone()),
                1 => term.push(a.clone()),
                _ => {}
            }
        }
        set.push(Fluent::transition(format!("F{i}"), init, term, rng.gen_bool(0.5)).unwrap()).unwrap();
    }
    set
}

/// Vocabulary for random formulas.
pub struct Vocab<'a> {
    pub fluents: &'a FluentSet,
    pub actions: &'a [ActionId],
    pub props: &'a [PropId],
}

pub fn random_atom(rng: &mut Rng8, v: &Vocab<'_>, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        let k = rng.gen_range(0..10);
        return match k {
            0..=3 if !v.fluents.is_empty() => Formula::fluent(v.fluents.get(rng.gen_range(0..v.fluents.len())).name.clone()),
            4..=7 => Formula::Action(v.actions.choose(rng).unwrap().clone()),
            8 if !v.props.is_empty() => Formula::Prop(v.props.choose(rng).unwrap().clone()),
            _ => Formula::Const(rng.gen_bool(0.5)),
        };
    }
    match rng.gen_range(0..4) {
        0 => random_atom(rng, v, depth - 1).not(),
        1 => random_atom(rng, v, depth - 1).and(random_atom(rng, v, depth - 1)),
        2 => random_atom(rng, v, depth - 1).or(random_atom(rng, v, depth - 1)),
        _ => random_atom(rng, v, depth - 1).implies(random_atom(rng, v, depth - 1)),
    }
}

/// A formula of the safety fragment built from `G`, `W` and Boolean atoms.
pub fn random_safety(rng: &mut Rng8, v: &Vocab<'_>, depth: usize) -> Formula {
    if depth == 0 {
        return random_atom(rng, v, 2);
    }
    match rng.gen_range(0..6) {
        0 => random_safety(rng, v, depth - 1).always(),
        1 => random_safety(rng, v, depth - 1).weak_until(random_safety(rng, v, depth - 1)),
        2 => random_atom(rng, v, 1).implies(random_safety(rng, v, depth - 1)).always(),
        3 => random_safety(rng, v, depth - 1).and(random_safety(rng, v, depth - 1)),
        4 => random_safety(rng, v, depth - 1).or(random_safety(rng, v, depth - 1)),
        _ => random_atom(rng, v, 2),
    }
}

/// A response-style safety goal `G(β -> (γ W δ))` or an invariant `G β`.
pub fn random_goal_safety(rng: &mut Rng8, v: &Vocab<'_>) -> Formula {
    if rng.gen_bool(0.5) {
        random_atom(rng, v, 1).always()
    } else {
        random_atom(rng, v, 1)
            .implies(random_atom(rng, v, 1).weak_until(random_atom(rng, v, 1)))
            .always()
    }
}

pub struct ProblemShape {
    pub max_states: usize,
    pub max_actions: usize,
    pub max_atoms: usize,
    pub max_fluents: usize,
}

/// A random deterministic control problem with a well-formed goal.
pub fn random_problem(rng: &mut Rng8, shape: &ProblemShape) -> ControlProblem {
    let (c, u) = random_split(rng, shape.max_actions);
    let ps = props(rng.gen_range(0..=1));
    let n = rng.gen_range(1..=shape.max_states);
    let env = random_dlts(rng, "E", n, &c, &u, &ps, 0.5, true).reachable();
    let all: Vec<ActionId> = c.iter().chain(&u).cloned().collect();
    let nf = rng.gen_range(0..=shape.max_fluents);
    let fluents = random_fluents(rng, &all, &ps, nf);
    let v = Vocab { fluents: &fluents, actions: &all, props: &ps };
    let mut goal = Goal::default();
    if rng.gen_bool(0.5) {
        goal.safety.push(random_goal_safety(rng, &v));
    }
    for _ in 0..rng.gen_range(0..=shape.max_atoms) {
        goal.assumptions.push(random_atom(rng, &v, 1));
    }
    for _ in 0..rng.gen_range(1..=shape.max_atoms.max(1)) {
        goal.guarantees.push(random_atom(rng, &v, 1));
    }
    let controllable: IndexSet<ActionId> = c.into_iter().collect();
    ControlProblem { env, fluents, goal, controllable }
}

/// A random arena with optional sinks and random atom colours.
pub fn random_arena(rng: &mut Rng8, max_vertices: usize) -> GameArena {
    let n = rng.gen_range(1..=max_vertices);
    let counts = (rng.gen_range(0..=1), rng.gen_range(0..=2), rng.gen_range(0..=2));
    let mask = |rng: &mut Rng8, k: usize| (0..k).fold(0u64, |m, i| if rng.gen_bool(0.4) { m | 1 << i } else { m });
    let mut vertices = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n);
    for _ in 0..n {
        let owner = if rng.gen_bool(0.5) { Owner::Ctrl } else { Owner::Env };
        vertices.push(Vertex {
            owner,
            kind: VertexKind::Plain,
            require: mask(rng, counts.0),
            assume: mask(rng, counts.1),
            guarantee: mask(rng, counts.2),
        });
        let out: BTreeSet<usize> = if rng.gen_bool(0.08) {
            BTreeSet::new()
        } else {
            (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..n)).collect()
        };
        edges.push(out.into_iter().map(|target| Edge { action: None, target }).collect());
    }
    GameArena::new(vertices, edges, 0, counts).unwrap()
}
