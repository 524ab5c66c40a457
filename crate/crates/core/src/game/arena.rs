//! Turn-based game graph of a standard control problem.
//!
//! A vertex is reached by one step of the environment: it records the entered
//! environment state, the fluent valuation, the safety-monitor state and the
//! truth of every goal atom at that position. Vertices where only uncontrollable
//! actions are enabled belong to the environment, vertices with only
//! controllable ones to the controller. When both kinds are enabled the
//! controller first picks which controllable action (if any) to offer; the
//! environment then resolves the race in an intermediate "offer" vertex.

use std::collections::{BTreeSet, HashMap};

use crate::error::{spec, usage, Result};
use crate::fluent::FluentValuation;
use crate::formula::{Atom, Position};
use crate::monitor::Monitor;
use crate::problem::ControlProblem;
use crate::symbol::ActionId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Owner {
    Env,
    Ctrl,
}

impl Owner {
    pub fn opponent(self) -> Owner {
        match self {
            Owner::Env => Owner::Ctrl,
            Owner::Ctrl => Owner::Env,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexKind {
    /// A position of the run (or the initial configuration).
    Position { state: usize, valuation: FluentValuation, monitor: usize },
    /// The environment resolves the race between its actions and the offer.
    Offer { offered: Option<ActionId> },
    /// The safety monitor reached its rejecting sink.
    Violation,
    /// Abstract vertex, used by hand-built and random arenas.
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub owner: Owner,
    pub kind: VertexKind,
    /// Bit `k` set when the `k`-th required atom holds here.
    pub require: u64,
    pub assume: u64,
    pub guarantee: u64,
}

/// An edge; internal moves (controller choosing an offer) carry no action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub action: Option<ActionId>,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct GameArena {
    vertices: Vec<Vertex>,
    edges: Vec<Vec<Edge>>,
    initial: usize,
    n_require: usize,
    n_assume: usize,
    n_guarantee: usize,
}

impl GameArena {
    /// Assembles an arena from explicit parts. A vertex without edges is a
    /// deadlock and loses for the controller.
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<Vec<Edge>>,
        initial: usize,
        counts: (usize, usize, usize),
    ) -> Result<GameArena> {
        if vertices.len() != edges.len() || initial >= vertices.len() {
            return usage("arena needs one edge list per vertex and a valid initial vertex");
        }
        if edges.iter().flatten().any(|e| e.target >= vertices.len()) {
            return usage("arena edge points outside the vertex set");
        }
        let (n_require, n_assume, n_guarantee) = counts;
        if n_require > 64 || n_assume > 64 || n_guarantee > 64 {
            return spec("at most 64 atoms per recurrence list are supported");
        }
        Ok(GameArena { vertices, edges, initial, n_require, n_assume, n_guarantee })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self, v: usize) -> &[Edge] {
        &self.edges[v]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// `(required, assumptions, guarantees)` atom counts.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.n_require, self.n_assume, self.n_guarantee)
    }

    /// Safety violations and deadlocks: the controller loses on reaching them.
    pub fn is_sink(&self, v: usize) -> bool {
        self.edges[v].is_empty() || self.vertices[v].kind == VertexKind::Violation
    }

    pub fn state_of(&self, v: usize) -> Option<usize> {
        match self.vertices[v].kind {
            VertexKind::Position { state, .. } => Some(state),
            _ => None,
        }
    }
}

/// Compiles the goal atoms of a problem and checks the per-list bound.
fn compile_atoms(p: &ControlProblem) -> Result<[Vec<Atom>; 3]> {
    let compile = |list: &[crate::formula::Formula]| -> Result<Vec<Atom>> {
        if list.len() > 64 {
            return spec("at most 64 atoms per recurrence list are supported");
        }
        list.iter().map(|f| f.compile(&p.fluents)).collect()
    };
    Ok([compile(&p.goal.require)?, compile(&p.goal.assumptions)?, compile(&p.goal.guarantees)?])
}

fn bits(atoms: &[Atom], pos: &Position<'_>) -> u64 {
    atoms
        .iter()
        .enumerate()
        .fold(0, |acc, (k, a)| if a.eval(pos) { acc | 1 << k } else { acc })
}

type PosKey = (usize, FluentValuation, usize, u64, u64, u64);

/// Builds the arena of a standard control problem (deterministic environment).
pub fn build_arena(p: &ControlProblem) -> Result<GameArena> {
    let env = &p.env;
    if !env.is_deterministic() {
        return spec(format!("environment `{}` is not deterministic", env.name()));
    }
    let mut monitor = Monitor::new(&p.goal.safety_conjunction(), &p.fluents)?;
    let [req, asm, gar] = compile_atoms(p)?;
    let controllable: BTreeSet<ActionId> = p.controllable.iter().cloned().collect();
    // controllable actions in declaration order, then the rest in alphabet order
    let rank: HashMap<ActionId, usize> = p
        .controllable
        .iter()
        .chain(env.alphabet().iter().filter(|a| !controllable.contains(*a)))
        .enumerate()
        .map(|(i, a)| (a.clone(), i))
        .collect();

    let mut vertices: Vec<Vertex> = Vec::new();
    let mut edges: Vec<Vec<Edge>> = Vec::new();
    let mut index: HashMap<PosKey, usize> = HashMap::new();
    let mut violation: Option<usize> = None;
    let mut todo: Vec<usize> = Vec::new();

    let s0 = env.initial();
    let v0 = p.fluents.initial_valuation(env.labels(s0));
    vertices.push(Vertex {
        owner: Owner::Env,
        kind: VertexKind::Position { state: s0, valuation: v0, monitor: monitor.initial() },
        require: 0,
        assume: 0,
        guarantee: 0,
    });
    edges.push(Vec::new());
    todo.push(0);

    while let Some(v) = todo.pop() {
        let VertexKind::Position { state: s, valuation, monitor: q } = vertices[v].kind.clone() else {
            continue;
        };
        let mut out: Vec<(usize, &ActionId, usize)> =
            env.out(s).iter().map(|(a, t)| (rank[a], a, *t)).collect();
        out.sort();
        let mut succ_of = |a: &ActionId, t: usize, vertices: &mut Vec<Vertex>, edges: &mut Vec<Vec<Edge>>| -> usize {
            let nv = p.fluents.step_valuation(valuation, a, env.labels(t));
            let pos = Position { valuation: nv, action: Some(a), labels: env.labels(t) };
            let nq = monitor.step(q, &pos);
            if monitor.is_violation(nq) {
                return *violation.get_or_insert_with(|| {
                    vertices.push(Vertex {
                        owner: Owner::Env,
                        kind: VertexKind::Violation,
                        require: 0,
                        assume: 0,
                        guarantee: 0,
                    });
                    edges.push(Vec::new());
                    vertices.len() - 1
                });
            }
            let key = (t, nv, nq, bits(&req, &pos), bits(&asm, &pos), bits(&gar, &pos));
            *index.entry(key).or_insert_with(|| {
                vertices.push(Vertex {
                    owner: Owner::Env,
                    kind: VertexKind::Position { state: t, valuation: nv, monitor: nq },
                    require: key.3,
                    assume: key.4,
                    guarantee: key.5,
                });
                edges.push(Vec::new());
                todo.push(vertices.len() - 1);
                vertices.len() - 1
            })
        };
        let mut ctrl_moves = Vec::new();
        let mut env_moves = Vec::new();
        for &(_, a, t) in &out {
            let w = succ_of(a, t, &mut vertices, &mut edges);
            let e = Edge { action: Some(a.clone()), target: w };
            if controllable.contains(a) {
                ctrl_moves.push(e);
            } else {
                env_moves.push(e);
            }
        }
        if ctrl_moves.is_empty() {
            vertices[v].owner = Owner::Env;
            edges[v] = env_moves;
        } else if env_moves.is_empty() {
            vertices[v].owner = Owner::Ctrl;
            edges[v] = ctrl_moves;
        } else {
            vertices[v].owner = Owner::Ctrl;
            let mut offers = vec![(None, env_moves.clone())];
            for c in ctrl_moves {
                let mut moves = env_moves.clone();
                let offered = c.action.clone();
                moves.push(c);
                offers.push((offered, moves));
            }
            let mut choice = Vec::new();
            for (offered, moves) in offers {
                vertices.push(Vertex {
                    owner: Owner::Env,
                    kind: VertexKind::Offer { offered: offered.clone() },
                    require: 0,
                    assume: 0,
                    guarantee: 0,
                });
                edges.push(moves);
                choice.push(Edge { action: None, target: vertices.len() - 1 });
            }
            edges[v] = choice;
        }
    }
    GameArena::new(vertices, edges, 0, (req.len(), asm.len(), gar.len()))
}
