//! Strongly connected components (iterative Tarjan).

use crate::dlts::Dlts;
use crate::symbol::ActionId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scc {
    /// Member vertices, ascending.
    pub vertices: Vec<usize>,
    /// True when the component contains at least one edge (a self-loop counts).
    pub cyclic: bool,
}

/// SCCs of the subgraph induced by vertices with `active[v]`, in reverse
/// topological order (sinks first).
pub fn tarjan(adj: &[Vec<usize>], active: &[bool]) -> Vec<Scc> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    // (vertex, position in its adjacency list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if !active[root] || index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if !active[w] {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut vertices = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    vertices.push(w);
                    if w == v {
                        break;
                    }
                }
                vertices.sort_unstable();
                let cyclic = vertices.len() > 1 || adj[v].contains(&v);
                out.push(Scc { vertices, cyclic });
            }
        }
    }
    out
}

impl Dlts {
    /// SCCs of the subgraph keeping states accepted by `state` and transitions
    /// accepted by `trans`.
    pub fn scc_decompose(
        &self,
        state: impl Fn(usize) -> bool,
        trans: impl Fn(usize, &ActionId, usize) -> bool,
    ) -> Vec<Scc> {
        let active: Vec<bool> = self.states().map(&state).collect();
        let adj: Vec<Vec<usize>> = self
            .states()
            .map(|s| {
                self.out(s)
                    .iter()
                    .filter(|(a, t)| active[*t] && trans(s, a, *t))
                    .map(|(_, t)| *t)
                    .collect()
            })
            .collect();
        tarjan(&adj, &active)
    }
}
