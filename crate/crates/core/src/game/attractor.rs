//! Attractors on explicit game graphs.

use super::arena::Owner;

/// Plain adjacency view of a two-player game.
#[derive(Clone, Debug)]
pub struct Graph {
    pub owner: Vec<Owner>,
    pub succ: Vec<Vec<usize>>,
    pub pred: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(owner: Vec<Owner>, succ: Vec<Vec<usize>>) -> Graph {
        let mut pred = vec![Vec::new(); succ.len()];
        for (v, out) in succ.iter().enumerate() {
            for &w in out {
                pred[w].push(v);
            }
        }
        Graph { owner, succ, pred }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }
}

/// Result of an attractor computation inside a subgame.
#[derive(Clone, Debug)]
pub struct Attractor {
    pub members: Vec<usize>,
    /// Distance to the target (0 for target vertices), `usize::MAX` outside.
    pub rank: Vec<usize>,
}

/// Vertices of `within` from which `player` can force a visit to `target`.
///
/// A vertex of the opponent with no successor inside `within` is stuck and
/// counts as attracted.
pub fn attractor(g: &Graph, within: &[bool], target: &[usize], player: Owner) -> Attractor {
    let n = g.len();
    let mut rank = vec![usize::MAX; n];
    let mut remaining: Vec<usize> = vec![0; n];
    let mut queue = std::collections::VecDeque::new();
    for &t in target {
        if within[t] && rank[t] == usize::MAX {
            rank[t] = 0;
            queue.push_back(t);
        }
    }
    for v in 0..n {
        if within[v] && rank[v] == usize::MAX && g.owner[v] != player {
            remaining[v] = g.succ[v].iter().filter(|&&w| within[w]).count();
            if remaining[v] == 0 {
                rank[v] = 0;
                queue.push_back(v);
            }
        }
    }
    let mut members = Vec::new();
    while let Some(w) = queue.pop_front() {
        members.push(w);
        for &u in &g.pred[w] {
            if !within[u] || rank[u] != usize::MAX {
                continue;
            }
            if g.owner[u] == player {
                rank[u] = rank[w] + 1;
                queue.push_back(u);
            } else {
                // `pred` holds one entry per edge, matching the edge count in `remaining`
                remaining[u] -= 1;
                if remaining[u] == 0 {
                    rank[u] = rank[w] + 1;
                    queue.push_back(u);
                }
            }
        }
    }
    Attractor { members, rank }
}

/// For every `player` vertex of the attractor outside the target, the index of
/// the successor with the smallest rank (ties: lowest index).
pub fn attractor_strategy(g: &Graph, within: &[bool], attr: &Attractor, player: Owner, strategy: &mut [Option<usize>]) {
    for &v in &attr.members {
        if g.owner[v] != player || attr.rank[v] == 0 {
            continue;
        }
        let best = g.succ[v]
            .iter()
            .enumerate()
            .filter(|(_, &w)| within[w] && attr.rank[w] < attr.rank[v])
            .min_by_key(|(i, &w)| (attr.rank[w], *i))
            .map(|(i, _)| i);
        strategy[v] = best;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn controller_reaches_target_through_own_choice() {
        // 0(ctrl) -> 1, 2 ; 1(env) -> 3, 0 ; 2(env) -> 3 ; 3 target
        let g = Graph::new(
            vec![Owner::Ctrl, Owner::Env, Owner::Env, Owner::Env],
            vec![vec![1, 2], vec![3, 0], vec![3], vec![3]],
        );
        let within = vec![true; 4];
        let attr = attractor(&g, &within, &[3], Owner::Ctrl);
        let mut m = attr.members.clone();
        m.sort();
        assert_eq!(m, vec![0, 1, 2, 3]);
        let mut strat = vec![None; 4];
        attractor_strategy(&g, &within, &attr, Owner::Ctrl, &mut strat);
        assert_eq!(strat[0], Some(1));
    }

    #[test]
    fn stuck_opponent_vertices_are_attracted() {
        let g = Graph::new(vec![Owner::Env, Owner::Ctrl], vec![vec![1], vec![]]);
        let attr = attractor(&g, &[true, true], &[], Owner::Env);
        assert_eq!(attr.members.len(), 2);
    }

    #[test]
    fn parallel_edges_do_not_overcount() {
        // env vertex 0 with two edges to target 1 and one to 2 (ctrl, loops)
        let g = Graph::new(vec![Owner::Env, Owner::Ctrl, Owner::Ctrl], vec![vec![1, 1, 2], vec![1], vec![2]]);
        let attr = attractor(&g, &[true; 3], &[1], Owner::Ctrl);
        assert!(!attr.members.contains(&0));
    }
}
