use std::collections::BTreeSet;

use crate::{Alphabet, Letter};

/// A graph whose edges are labelled by alphabet symbols or ε.
#[derive(Debug, Clone)]
pub struct LabelledGraph {
    pub alphabet: Alphabet,
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, Letter, usize)>,
    pub initial: Option<usize>,
}

impl LabelledGraph {
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &(usize, Letter, usize)> {
        self.edges.iter().filter(move |e| e.0 == v)
    }

    /// Vertices with no outgoing edge.
    pub fn dead_ends(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.vertices.len()];
        for &(s, _, _) in &self.edges {
            has_out[s] = true;
        }
        (0..self.vertices.len()).filter(|&v| !has_out[v]).collect()
    }

    /// True if the ε-edges form no cycle, i.e. every infinite path reads
    /// infinitely many proper symbols.
    pub fn is_well_founded(&self) -> bool {
        let eps_adj = adjacency(
            self.vertices.len(),
            self.edges.iter().filter(|e| e.1.is_eps()).map(|&(s, _, d)| (s, d)),
        );
        !has_cycle(&eps_adj)
    }

    /// Restricts to the largest subgraph in which every vertex has an
    /// outgoing edge (vertices outside it have no infinite continuation).
    pub fn live_part(&self) -> BTreeSet<usize> {
        let mut alive: BTreeSet<usize> = (0..self.vertices.len()).collect();
        loop {
            let dead: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&v| !self.edges.iter().any(|e| e.0 == v && alive.contains(&e.2)))
                .collect();
            if dead.is_empty() {
                return alive;
            }
            for v in dead {
                alive.remove(&v);
            }
        }
    }
}

/// A graph whose edges are labelled by priorities; the shape cascaded onto
/// automata and the carrier of signature graphs.
#[derive(Debug, Clone)]
pub struct DGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, u32, usize)>,
    pub initial: Option<usize>,
}

impl DGraph {
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &(usize, u32, usize)> {
        self.edges.iter().filter(move |e| e.0 == v)
    }
}

pub(crate) fn adjacency<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (s, d) in edges {
        adj[s].push(d);
    }
    adj
}

pub(crate) fn has_cycle(adj: &[Vec<usize>]) -> bool {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; adj.len()];
    for start in 0..adj.len() {
        if state[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        state[start] = 1;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    false
}

/// Tarjan's strongly connected components; returns the component id of each
/// vertex, numbered in reverse topological order.
pub(crate) fn scc(adj: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0usize;
    let mut n_comps = 0usize;

    struct Frame {
        v: usize,
        child: usize,
    }

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call = vec![Frame { v: root, child: 0 }];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(frame) = call.last_mut() {
            let v = frame.v;
            if frame.child < adj[v].len() {
                let w = adj[v][frame.child];
                frame.child += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push(Frame { v: w, child: 0 });
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = n_comps;
                        if w == v {
                            break;
                        }
                    }
                    n_comps += 1;
                }
                let done = v;
                call.pop();
                if let Some(parent) = call.last() {
                    low[parent.v] = low[parent.v].min(low[done]);
                }
            }
        }
    }
    (n_comps, comp)
}

/// Vertices reachable from `start` along `adj`.
pub(crate) fn reachable(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    seen[start] = true;
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}
