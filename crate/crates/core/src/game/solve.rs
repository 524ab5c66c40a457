//! Solving pipeline: safety preprocessing, gadget product, parity solving and
//! read-back of both players' strategies as transition systems.

use std::collections::{HashMap, VecDeque};

use super::arena::{GameArena, Owner, VertexKind};
use super::attractor::{attractor, attractor_strategy, Graph};
use super::gadget::{build_product, events, Memory, ProductGame};
use super::parity::{zielonka, ParitySolution};
use crate::dlts::{Alphabet, Dlts, DltsBuilder};
use crate::error::{usage, Result};
use crate::problem::ControlProblem;
use crate::symbol::ActionId;

/// Sizes reported alongside a solution.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct SolveStats {
    pub arena_vertices: usize,
    pub arena_edges: usize,
    /// Vertices from which the environment forces a violation or deadlock.
    pub unsafe_vertices: usize,
    pub product_vertices: usize,
    pub winning_product_vertices: usize,
}

#[derive(Clone, Debug)]
pub struct Solution {
    /// Arena vertices outside the environment's attractor to the sinks.
    pub alive: Vec<bool>,
    /// Environment moves (edge indices) driving towards a sink on the unsafe part.
    pub env_safety_strategy: Vec<Option<usize>>,
    pub product: ProductGame,
    pub parity: ParitySolution,
    pub stats: SolveStats,
}

impl Solution {
    pub fn root(&self, v: usize) -> Option<usize> {
        self.product.index.get(&(v, Memory::default())).copied()
    }

    /// Whether the controller wins from arena vertex `v` (with fresh memory).
    pub fn wins_from(&self, v: usize) -> bool {
        self.root(v).is_some_and(|i| self.parity.wins(i, Owner::Ctrl))
    }

    /// The arena edge index the controller plays at product vertex `i`.
    pub fn controller_choice(&self, i: usize) -> Option<usize> {
        if self.product.game.graph.owner[i] != Owner::Ctrl || !self.parity.wins(i, Owner::Ctrl) {
            return None;
        }
        self.parity.strategy[i].map(|k| self.product.edge_of[i][k])
    }
}

/// Solves the game from the arena's initial vertex.
pub fn solve(arena: &GameArena) -> Solution {
    solve_from(arena, &[arena.initial()])
}

/// Controller winning region over all arena vertices.
pub fn winning_region(arena: &GameArena) -> Vec<bool> {
    let roots: Vec<usize> = (0..arena.len()).collect();
    let sol = solve_from(arena, &roots);
    (0..arena.len()).map(|v| sol.wins_from(v)).collect()
}

fn arena_graph(arena: &GameArena) -> Graph {
    Graph::new(
        arena.vertices().iter().map(|x| x.owner).collect(),
        (0..arena.len()).map(|v| arena.edges(v).iter().map(|e| e.target).collect()).collect(),
    )
}

pub fn solve_from(arena: &GameArena, roots: &[usize]) -> Solution {
    let g = arena_graph(arena);
    let everywhere = vec![true; arena.len()];
    let sinks: Vec<usize> = (0..arena.len()).filter(|&v| arena.is_sink(v)).collect();
    let bad = attractor(&g, &everywhere, &sinks, Owner::Env);
    let mut env_safety_strategy = vec![None; arena.len()];
    attractor_strategy(&g, &everywhere, &bad, Owner::Env, &mut env_safety_strategy);
    let mut alive = vec![true; arena.len()];
    for &v in &bad.members {
        alive[v] = false;
    }
    let product = build_product(arena, &alive, roots);
    let parity = zielonka(&product.game);
    let stats = SolveStats {
        arena_vertices: arena.len(),
        arena_edges: arena.num_edges(),
        unsafe_vertices: bad.members.len(),
        product_vertices: product.nodes.len(),
        winning_product_vertices: parity.winner.iter().filter(|&&w| w == Owner::Ctrl).count(),
    };
    Solution { alive, env_safety_strategy, product, parity, stats }
}

fn state_label(p: &ControlProblem, arena: &GameArena, v: usize) -> String {
    match &arena.vertex(v).kind {
        VertexKind::Position { state, .. } => p.env.state_name(*state).to_string(),
        VertexKind::Offer { offered: Some(a) } => format!("offer:{a}"),
        VertexKind::Offer { offered: None } => "offer:none".into(),
        VertexKind::Violation => "violation".into(),
        VertexKind::Plain => format!("v{v}"),
    }
}

fn controller_alphabet(p: &ControlProblem) -> Result<Alphabet> {
    Alphabet::new(p.controllable.iter().cloned(), p.uncontrollable())
}

/// Packages the controller's winning strategy as a DLTS over the problem's
/// alphabet: environment positions keep every move, controller positions keep
/// the chosen one (an offer contributes the moves it lets the environment race).
pub fn package_controller(arena: &GameArena, sol: &Solution, p: &ControlProblem) -> Result<Dlts> {
    let Some(root) = sol.root(arena.initial()).filter(|&i| sol.parity.wins(i, Owner::Ctrl)) else {
        return usage("the controller does not win from the initial vertex");
    };
    let graph = &sol.product.game.graph;
    let mut b = DltsBuilder::new("M", controller_alphabet(p)?);
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([root]);
    let name = |i: usize| {
        let v = sol.product.nodes[i].0;
        format!("{}@{i}", state_label(p, arena, v))
    };
    ids.insert(root, b.state(name(root)));
    while let Some(i) = queue.pop_front() {
        let v = sol.product.nodes[i].0;
        let src = ids[&i];
        if let Some(s) = arena.state_of(v) {
            if let Some(side) = p.env.side(s) {
                b.side(src, side);
            }
        }
        // (action, product target) pairs of the packaged state
        let mut moves: Vec<(ActionId, usize)> = Vec::new();
        let all_moves = |i: usize, moves: &mut Vec<(ActionId, usize)>| {
            let v = sol.product.nodes[i].0;
            for (k, &j) in graph.succ[i].iter().enumerate() {
                let e = &arena.edges(v)[sol.product.edge_of[i][k]];
                if let Some(a) = &e.action {
                    moves.push((a.clone(), j));
                }
            }
        };
        match graph.owner[i] {
            Owner::Env => all_moves(i, &mut moves),
            Owner::Ctrl => {
                let k = sol.parity.strategy[i].expect("winning controller vertex without a move");
                let j = graph.succ[i][k];
                match &arena.edges(v)[sol.product.edge_of[i][k]].action {
                    Some(a) => moves.push((a.clone(), j)),
                    None => all_moves(j, &mut moves),
                }
            }
        }
        for (a, j) in moves {
            let dst = match ids.get(&j) {
                Some(&d) => d,
                None => {
                    let d = b.state(name(j));
                    ids.insert(j, d);
                    queue.push_back(j);
                    d
                }
            };
            b.transition(src, a, dst);
        }
    }
    b.build()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum CexNode {
    Product(usize),
    Arena(usize),
}

/// Packages the environment's winning strategy from the initial vertex: the
/// environment fixes its moves, the controller keeps every option.
pub fn package_counterexample(arena: &GameArena, sol: &Solution, p: &ControlProblem) -> Result<Dlts> {
    let init = arena.initial();
    let root = match sol.root(init) {
        Some(i) if sol.parity.wins(i, Owner::Ctrl) => {
            return usage("the environment does not win from the initial vertex");
        }
        Some(i) => CexNode::Product(i),
        None => CexNode::Arena(init),
    };
    let mut b = DltsBuilder::new("counterexample", controller_alphabet(p)?);
    let mut ids: HashMap<CexNode, usize> = HashMap::new();
    let name = |n: CexNode| match n {
        CexNode::Product(i) => format!("{}@{i}", state_label(p, arena, sol.product.nodes[i].0)),
        CexNode::Arena(v) => format!("{}!{v}", state_label(p, arena, v)),
    };
    ids.insert(root, b.state(name(root)));
    let mut queue = VecDeque::from([root]);
    // successor node of arena edge `e` taken from `n`
    let step = |n: CexNode, target: usize| -> CexNode {
        match n {
            CexNode::Product(i) if sol.alive[target] => {
                let (v, m) = sol.product.nodes[i];
                let next = events(arena, v, m).3;
                CexNode::Product(sol.product.index[&(target, next)])
            }
            _ => CexNode::Arena(target),
        }
    };
    // the environment's single move at an environment-owned node
    let env_move = |n: CexNode| -> Option<(ActionId, CexNode)> {
        let (v, k) = match n {
            CexNode::Product(i) => {
                let k = sol.parity.strategy[i]?;
                (sol.product.nodes[i].0, sol.product.edge_of[i][k])
            }
            CexNode::Arena(v) => (v, sol.env_safety_strategy[v]?),
        };
        let e = &arena.edges(v)[k];
        Some((e.action.clone()?, step(n, e.target)))
    };
    while let Some(n) = queue.pop_front() {
        let v = match n {
            CexNode::Product(i) => sol.product.nodes[i].0,
            CexNode::Arena(v) => v,
        };
        let src = ids[&n];
        if let Some(side) = arena.state_of(v).and_then(|s| p.env.side(s)) {
            b.side(src, side);
        }
        let mut moves = Vec::new();
        match arena.vertex(v).owner {
            Owner::Env => moves.extend(env_move(n)),
            Owner::Ctrl => {
                for e in arena.edges(v) {
                    let t = step(n, e.target);
                    match &e.action {
                        Some(a) => moves.push((a.clone(), t)),
                        None => moves.extend(env_move(t)),
                    }
                }
            }
        }
        for (a, t) in moves {
            let dst = match ids.get(&t) {
                Some(&d) => d,
                None => {
                    let d = b.state(name(t));
                    ids.insert(t, d);
                    queue.push_back(t);
                    d
                }
            };
            b.transition(src, a, dst);
        }
    }
    b.build()
}
