//! Parity games (max-parity, even priorities favour the controller) and
//! Zielonka's recursive algorithm.

use super::arena::Owner;
use super::attractor::{attractor, attractor_strategy, Graph};

#[derive(Clone, Debug)]
pub struct ParityGame {
    pub graph: Graph,
    pub priority: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParitySolution {
    pub winner: Vec<Owner>,
    /// For each vertex, the successor index its owner plays when it wins there.
    pub strategy: Vec<Option<usize>>,
}

impl ParitySolution {
    pub fn wins(&self, v: usize, player: Owner) -> bool {
        self.winner[v] == player
    }
}

fn favoured(priority: u8) -> Owner {
    if priority % 2 == 0 {
        Owner::Ctrl
    } else {
        Owner::Env
    }
}

/// Solves a parity game in which every vertex has at least one successor.
pub fn zielonka(game: &ParityGame) -> ParitySolution {
    let n = game.graph.len();
    let mut winner = vec![Owner::Env; n];
    let mut strategy = vec![None; n];
    solve(game, vec![true; n], &mut winner, &mut strategy);
    ParitySolution { winner, strategy }
}

fn solve(game: &ParityGame, mut within: Vec<bool>, winner: &mut [Owner], strategy: &mut [Option<usize>]) {
    let g = &game.graph;
    loop {
        let verts: Vec<usize> = (0..g.len()).filter(|&v| within[v]).collect();
        let Some(d) = verts.iter().map(|&v| game.priority[v]).max() else {
            return;
        };
        let alpha = favoured(d);
        let top: Vec<usize> = verts.iter().copied().filter(|&v| game.priority[v] == d).collect();
        for &t in &top {
            if g.owner[t] == alpha {
                strategy[t] = g.succ[t].iter().position(|&w| within[w]);
            }
        }
        let a = attractor(g, &within, &top, alpha);
        attractor_strategy(g, &within, &a, alpha, strategy);
        let mut sub = within.clone();
        for &v in &a.members {
            sub[v] = false;
        }
        solve(game, sub.clone(), winner, strategy);
        let lost: Vec<usize> = verts
            .iter()
            .copied()
            .filter(|&v| sub[v] && winner[v] == alpha.opponent())
            .collect();
        if lost.is_empty() {
            for &v in &verts {
                winner[v] = alpha;
            }
            return;
        }
        let b = attractor(g, &within, &lost, alpha.opponent());
        attractor_strategy(g, &within, &b, alpha.opponent(), strategy);
        for &v in &b.members {
            winner[v] = alpha.opponent();
            within[v] = false;
        }
    }
}
