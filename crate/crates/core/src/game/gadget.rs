//! Counter gadget and index-appearance record: turns the recurrence part of
//! the goal into a parity condition with priorities `0..=4`.
//!
//! Counters cycle through the assumption, guarantee and required atoms, moving
//! on when the atom they wait for holds. A counter completing a round emits an
//! event (an empty list emits it at every vertex). The objective then reads
//! "infinitely many required rounds, and infinitely many assumption rounds
//! imply infinitely many guarantee rounds": two Streett pairs, which the
//! record of most recently granted pairs turns into a parity condition.

use std::collections::HashMap;

use super::arena::GameArena;
use super::attractor::Graph;
use super::parity::ParityGame;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Memory {
    pub assume: u8,
    pub guarantee: u8,
    pub require: u8,
    /// `false`: the assumption/guarantee pair was granted least recently.
    pub swapped: bool,
}

/// Events of one counter at a vertex: `(round completed, next counter)`.
fn advance(count: usize, at: u8, bits: u64) -> (bool, u8) {
    if count == 0 {
        return (true, 0);
    }
    if bits >> at & 1 == 1 {
        let next = (at as usize + 1) % count;
        (next == 0, next as u8)
    } else {
        (false, at)
    }
}

/// Round-completion events at arena vertex `v` under memory `m`, and the
/// counters after it: `(assumptions, guarantees, required, next memory)`.
pub fn events(arena: &GameArena, v: usize, m: Memory) -> (bool, bool, bool, Memory) {
    let (nr, na, ng) = arena.counts();
    let x = arena.vertex(v);
    let (ac, a) = advance(na, m.assume, x.assume);
    let (gc, g) = advance(ng, m.guarantee, x.guarantee);
    let (fc, r) = advance(nr, m.require, x.require);
    // pairs: 0 = (assumption round, guarantee round), 1 = (always, required round)
    let swapped = match (gc, fc) {
        (true, false) => true,
        (false, true) => false,
        _ => m.swapped,
    };
    (ac, gc, fc, Memory { assume: a, guarantee: g, require: r, swapped })
}

/// Max-parity priority of a product vertex: even wins for the controller.
pub fn priority(ac: bool, gc: bool, fc: bool, m: Memory) -> u8 {
    let (pos0, pos1) = if m.swapped { (1u8, 0u8) } else { (0, 1) };
    let mut p = 4u8;
    if gc {
        p = p.min(2 * pos0);
    }
    if ac {
        p = p.min(2 * pos0 + 1);
    }
    if fc {
        p = p.min(2 * pos1);
    }
    p = p.min(2 * pos1 + 1);
    4 - p
}

#[derive(Clone, Debug)]
pub struct ProductGame {
    pub game: ParityGame,
    /// Arena vertex and memory of each product vertex.
    pub nodes: Vec<(usize, Memory)>,
    pub index: HashMap<(usize, Memory), usize>,
    /// Arena edge index behind each product successor.
    pub edge_of: Vec<Vec<usize>>,
}

/// Product of the arena restricted to `alive` with the gadget memory, built
/// from `(root, Memory::default())` for every root.
pub fn build_product(arena: &GameArena, alive: &[bool], roots: &[usize]) -> ProductGame {
    let mut nodes: Vec<(usize, Memory)> = Vec::new();
    let mut index: HashMap<(usize, Memory), usize> = HashMap::new();
    let mut queue = std::collections::VecDeque::new();
    for &r in roots {
        if alive[r] && !index.contains_key(&(r, Memory::default())) {
            index.insert((r, Memory::default()), nodes.len());
            nodes.push((r, Memory::default()));
            queue.push_back(nodes.len() - 1);
        }
    }
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut edge_of: Vec<Vec<usize>> = Vec::new();
    let mut priority_of: Vec<u8> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let (v, m) = nodes[i];
        let (ac, gc, fc, next) = events(arena, v, m);
        if succ.len() <= i {
            succ.resize(i + 1, Vec::new());
            edge_of.resize(i + 1, Vec::new());
            priority_of.resize(i + 1, 0);
        }
        priority_of[i] = priority(ac, gc, fc, m);
        for (k, e) in arena.edges(v).iter().enumerate() {
            if !alive[e.target] {
                continue;
            }
            let key = (e.target, next);
            let j = *index.entry(key).or_insert_with(|| {
                nodes.push(key);
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            succ[i].push(j);
            edge_of[i].push(k);
        }
    }
    succ.resize(nodes.len(), Vec::new());
    edge_of.resize(nodes.len(), Vec::new());
    priority_of.resize(nodes.len(), 0);
    let owner = nodes.iter().map(|&(v, _)| arena.vertex(v).owner).collect();
    ProductGame {
        game: ParityGame { graph: Graph::new(owner, succ), priority: priority_of },
        nodes,
        index,
        edge_of,
    }
}
