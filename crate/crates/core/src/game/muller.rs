//! Reference solver: the goal read as a Muller condition over atom colours,
//! solved with McNaughton's recursive algorithm directly on the arena.
//!
//! No counters, no appearance record and no parity conversion are involved,
//! which makes it a useful cross-check of the main pipeline on small arenas.

use super::arena::{GameArena, Owner};
use super::attractor::{attractor, Graph};
use crate::error::{usage, Result};

/// Default vertex bound for [`brute_force_winning`].
pub const DEFAULT_BOUND: usize = 12;

struct Colours {
    require: u64,
    assume: u64,
    guarantee: u64,
    lose: u64,
}

impl Colours {
    fn wins(&self, set: u64) -> bool {
        set & self.lose == 0
            && set & self.require == self.require
            && (set & self.assume != self.assume || set & self.guarantee == self.guarantee)
    }
}

/// Arena vertices from which the controller wins. Sinks lose.
pub fn brute_force_winning(arena: &GameArena, bound: usize) -> Result<Vec<bool>> {
    if arena.len() > bound {
        return usage(format!("arena has {} vertices, above the bound {bound}", arena.len()));
    }
    let (nr, na, ng) = arena.counts();
    if nr + na + ng + 1 > 16 {
        return usage("too many atoms for the reference solver");
    }
    let mask = |n: usize, shift: usize| ((1u64 << n) - 1) << shift;
    let colours = Colours {
        require: mask(nr, 0),
        assume: mask(na, nr),
        guarantee: mask(ng, nr + na),
        lose: 1 << (nr + na + ng),
    };
    let mut colour = Vec::with_capacity(arena.len());
    let mut succ = Vec::with_capacity(arena.len());
    for v in 0..arena.len() {
        let x = arena.vertex(v);
        if arena.is_sink(v) {
            colour.push(colours.lose);
            succ.push(vec![v]);
        } else {
            colour.push(x.require | x.assume << nr | x.guarantee << (nr + na));
            succ.push(arena.edges(v).iter().map(|e| e.target).collect());
        }
    }
    let g = Graph::new(arena.vertices().iter().map(|x| x.owner).collect(), succ);
    let mut winner = vec![Owner::Env; arena.len()];
    solve(&g, &colour, &colours, vec![true; arena.len()], &mut winner);
    Ok(winner.into_iter().map(|w| w == Owner::Ctrl).collect())
}

fn solve(g: &Graph, colour: &[u64], colours: &Colours, within: Vec<bool>, winner: &mut [Owner]) {
    let verts: Vec<usize> = (0..g.len()).filter(|&v| within[v]).collect();
    if verts.is_empty() {
        return;
    }
    let all = verts.iter().fold(0, |acc, &v| acc | colour[v]);
    let sigma = if colours.wins(all) { Owner::Ctrl } else { Owner::Env };
    // maximal proper subsets of `all` won by the other player
    let subsets: Vec<u64> = submasks(all).filter(|&d| d != all && colours.wins(d) != colours.wins(all)).collect();
    let children: Vec<u64> = subsets
        .iter()
        .copied()
        .filter(|&d| !subsets.iter().any(|&e| e != d && e & d == d))
        .collect();
    for d in children {
        let outside: Vec<usize> = verts.iter().copied().filter(|&v| colour[v] & !d != 0).collect();
        let a = attractor(g, &within, &outside, sigma);
        let mut sub = within.clone();
        for &v in &a.members {
            sub[v] = false;
        }
        solve(g, colour, colours, sub.clone(), winner);
        let lost: Vec<usize> = verts
            .iter()
            .copied()
            .filter(|&v| sub[v] && winner[v] == sigma.opponent())
            .collect();
        if !lost.is_empty() {
            let b = attractor(g, &within, &lost, sigma.opponent());
            let mut rest = within.clone();
            for &v in &b.members {
                winner[v] = sigma.opponent();
                rest[v] = false;
            }
            solve(g, colour, colours, rest, winner);
            return;
        }
    }
    for v in verts {
        winner[v] = sigma;
    }
}

fn submasks(m: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}
