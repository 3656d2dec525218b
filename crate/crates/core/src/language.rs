//! Language-level decision procedures: emptiness of conjunctions of parity
//! conditions by lasso search, and inclusion/equivalence built on top of it.

use std::collections::VecDeque;

use crate::graph::{adjacency, reachable, scc};
use crate::{Automaton, Error, Letter, Result, UltimatelyPeriodicWord};

/// An edge carrying one priority per coordinate, and optionally the symbol
/// that produced it (used to read words off witnesses).
#[derive(Debug, Clone)]
pub struct VEdge {
    pub src: usize,
    pub dst: usize,
    pub prios: Vec<u32>,
    pub symbol: Option<usize>,
}

/// A pointed graph whose edges carry `r` priority coordinates.
#[derive(Debug, Clone)]
pub struct VectorGraph {
    pub n: usize,
    pub r: usize,
    pub edges: Vec<VEdge>,
    pub initial: usize,
}

/// A reachable lasso, as indices into the edge list.
#[derive(Debug, Clone)]
pub struct LassoWitness {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

/// Searches for a reachable lasso whose cycle has an even minimum priority on
/// every coordinate. For each vector of even thresholds the edge set is
/// restricted coordinate-wise and strongly connected components are scanned
/// for anchor edges attaining the thresholds exactly.
pub fn conjunctive_empty(g: &VectorGraph) -> Result<Option<LassoWitness>> {
    if g.r == 0 {
        return Err(Error::Invalid("need at least one priority coordinate".into()));
    }
    if g.edges.iter().any(|e| e.prios.len() != g.r) {
        return Err(Error::Invalid("edge priority arity mismatch".into()));
    }
    let mut maxima = vec![0u32; g.r];
    for e in &g.edges {
        for (m, &p) in maxima.iter_mut().zip(&e.prios) {
            *m = (*m).max(p);
        }
    }
    let full_adj = adjacency(g.n, g.edges.iter().map(|e| (e.src, e.dst)));
    let reach = reachable(&full_adj, g.initial);

    let mut thresholds = vec![0u32; g.r];
    loop {
        if let Some(w) = lasso_at_thresholds(g, &thresholds, &reach) {
            return Ok(Some(w));
        }
        // advance the even-threshold odometer
        let mut i = 0;
        loop {
            if i == g.r {
                return Ok(None);
            }
            thresholds[i] += 2;
            if thresholds[i] <= maxima[i] {
                break;
            }
            thresholds[i] = 0;
            i += 1;
        }
    }
}

fn lasso_at_thresholds(g: &VectorGraph, thresholds: &[u32], reach: &[bool]) -> Option<LassoWitness> {
    let keep: Vec<usize> = g
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| {
            reach[e.src]
                && reach[e.dst]
                && e.prios.iter().zip(thresholds).all(|(&p, &x)| p >= x)
        })
        .map(|(i, _)| i)
        .collect();
    let adj = adjacency(g.n, keep.iter().map(|&i| (g.edges[i].src, g.edges[i].dst)));
    let (n_comps, comp) = scc(&adj);
    // a component qualifies if, for each coordinate, it contains an edge
    // whose priority equals the threshold there
    let mut hit = vec![vec![None; thresholds.len()]; n_comps];
    for &i in &keep {
        let e = &g.edges[i];
        if comp[e.src] != comp[e.dst] {
            continue;
        }
        // self-component edge only counts if the component has a cycle,
        // which an intra-component edge always witnesses
        for (c, &x) in thresholds.iter().enumerate() {
            if e.prios[c] == x && hit[comp[e.src]][c].is_none() {
                hit[comp[e.src]][c] = Some(i);
            }
        }
    }
    let target = (0..n_comps).find(|&c| hit[c].iter().all(Option::is_some))?;
    let anchors: Vec<usize> = hit[target].iter().map(|o| o.unwrap()).collect();

    // stem: BFS from the initial vertex to the first anchor's source
    let all_adj: Vec<Vec<(usize, usize)>> = {
        let mut adj = vec![Vec::new(); g.n];
        for (i, e) in g.edges.iter().enumerate() {
            adj[e.src].push((e.dst, i));
        }
        adj
    };
    let start = g.edges[anchors[0]].src;
    let stem = bfs_edge_path(&all_adj, g.initial, start, None)?;

    // cycle: thread the anchors inside the component, then return to start
    let comp_adj: Vec<Vec<(usize, usize)>> = {
        let mut adj = vec![Vec::new(); g.n];
        for &i in &keep {
            let e = &g.edges[i];
            if comp[e.src] == target && comp[e.dst] == target {
                adj[e.src].push((e.dst, i));
            }
        }
        adj
    };
    let mut cycle = Vec::new();
    let mut at = start;
    for &a in &anchors {
        let e = &g.edges[a];
        cycle.extend(bfs_edge_path(&comp_adj, at, e.src, None)?);
        cycle.push(a);
        at = e.dst;
    }
    cycle.extend(bfs_edge_path(&comp_adj, at, start, None)?);
    debug_assert!(!cycle.is_empty());
    Some(LassoWitness { stem, cycle })
}

fn bfs_edge_path(
    adj: &[Vec<(usize, usize)>],
    from: usize,
    to: usize,
    forbidden: Option<usize>,
) -> Option<Vec<usize>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adj[v] {
            if Some(e) == forbidden || seen[w] {
                continue;
            }
            seen[w] = true;
            prev[w] = Some((v, e));
            if w == to {
                let mut path = Vec::new();
                let mut cur = to;
                while cur != from {
                    let (p, e) = prev[cur].unwrap();
                    path.push(e);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

/// Outcome of an inclusion check.
#[derive(Debug, Clone)]
pub struct InclusionReport {
    pub holds: bool,
    pub counterexample: Option<UltimatelyPeriodicWord>,
}

fn check_same_alphabet(a: &Automaton, b: &Automaton) -> Result<()> {
    let sa: Vec<&str> = a.alphabet.symbols().collect();
    let sb: Vec<&str> = b.alphabet.symbols().collect();
    if sa != sb {
        return Err(Error::AlphabetMismatch(sa.join(" "), sb.join(" ")));
    }
    Ok(())
}

/// `L(a) ⊆ L(b)`, with `b` deterministic (completed on the fly). On failure
/// the returned word is accepted by `a` and rejected by `b`; lassos are kept
/// short by breadth-first search on the thresholded product.
pub fn included(a: &Automaton, b: &Automaton) -> Result<InclusionReport> {
    check_same_alphabet(a, b)?;
    if !b.is_deterministic() {
        return Err(Error::Invalid("inclusion needs a deterministic right-hand side".into()));
    }
    let a_free = a.eps_eliminate()?;
    let b_comp = b.complement_det()?;
    let g = product_vector_graph(&a_free, &b_comp);
    match conjunctive_empty(&g)? {
        None => Ok(InclusionReport { holds: true, counterexample: None }),
        Some(w) => {
            let word = witness_word(&g, &w, &a_free)?;
            Ok(InclusionReport { holds: false, counterexample: Some(word) })
        }
    }
}

fn product_vector_graph(a: &Automaton, b: &Automaton) -> VectorGraph {
    let nb = b.n_states();
    let id = |qa: usize, qb: usize| qa * nb + qb;
    let mut edges = Vec::new();
    for t in &a.transitions {
        let sym = match t.letter {
            Letter::Sym(s) => s,
            Letter::Eps => continue,
        };
        for qb in 0..nb {
            if let Some((z, qb2)) = b.det_successor(qb, sym) {
                edges.push(VEdge {
                    src: id(t.src, qb),
                    dst: id(t.dst, qb2),
                    prios: vec![t.priority, z],
                    symbol: Some(sym),
                });
            }
        }
    }
    VectorGraph { n: a.n_states() * nb, r: 2, edges, initial: id(a.initial, b.initial) }
}

fn witness_word(g: &VectorGraph, w: &LassoWitness, a: &Automaton) -> Result<UltimatelyPeriodicWord> {
    let sym_name = |i: &usize| -> Result<String> {
        let e = &g.edges[*i];
        let s = e.symbol.ok_or_else(|| Error::Invalid("witness edge without symbol".into()))?;
        Ok(a.alphabet.symbol(s).to_string())
    };
    let prefix: Vec<String> = w.stem.iter().map(sym_name).collect::<Result<_>>()?;
    let period: Vec<String> = w.cycle.iter().map(sym_name).collect::<Result<_>>()?;
    UltimatelyPeriodicWord::new(prefix, period)
}

/// Outcome of an equivalence check; the counterexample (if any) separates
/// the two languages.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub holds: bool,
    pub counterexample: Option<UltimatelyPeriodicWord>,
}

/// `L(a) = L(b)` via two inclusion checks; both automata must be
/// deterministic (the left-to-right check tolerates nondeterminism in `a`).
pub fn equivalent(a: &Automaton, b: &Automaton) -> Result<EquivalenceReport> {
    let ab = included(a, b)?;
    if !ab.holds {
        return Ok(EquivalenceReport { holds: false, counterexample: ab.counterexample });
    }
    let ba = included(b, a)?;
    Ok(EquivalenceReport { holds: ba.holds, counterexample: ba.counterexample })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn conjunctive_single_loops() {
        let mk = |prios: Vec<u32>| VectorGraph {
            n: 1,
            r: prios.len(),
            edges: vec![VEdge { src: 0, dst: 0, prios, symbol: None }],
            initial: 0,
        };
        assert!(conjunctive_empty(&mk(vec![0, 0])).unwrap().is_some());
        assert!(conjunctive_empty(&mk(vec![0, 1])).unwrap().is_none());
    }

    #[test]
    fn conjunctive_two_cycle() {
        // two-vertex cycle with edges (0,3) and (2,0): mins are 0 and 0
        let g = VectorGraph {
            n: 2,
            r: 2,
            edges: vec![
                VEdge { src: 0, dst: 1, prios: vec![0, 3], symbol: None },
                VEdge { src: 1, dst: 0, prios: vec![2, 0], symbol: None },
            ],
            initial: 0,
        };
        let w = conjunctive_empty(&g).unwrap().expect("cycle over both edges");
        assert_eq!(w.cycle.len(), 2);
    }

    /// Oracle: a qualifying lasso exists iff some reachable strongly
    /// connected edge subset has an even minimum on every coordinate.
    fn exhaustive_oracle(g: &VectorGraph) -> bool {
        let full = adjacency(g.n, g.edges.iter().map(|e| (e.src, e.dst)));
        let reach = reachable(&full, g.initial);
        let m = g.edges.len();
        'subset: for mask in 1u32..(1 << m) {
            let chosen: Vec<&VEdge> =
                (0..m).filter(|i| mask >> i & 1 == 1).map(|i| &g.edges[i]).collect();
            if chosen.iter().any(|e| !reach[e.src]) {
                continue;
            }
            // strongly connected over the touched vertices
            let verts: std::collections::BTreeSet<usize> =
                chosen.iter().flat_map(|e| [e.src, e.dst]).collect();
            let adj = adjacency(g.n, chosen.iter().map(|e| (e.src, e.dst)));
            let (_, comp) = scc(&adj);
            let c0 = comp[*verts.iter().next().unwrap()];
            if !verts.iter().all(|&v| comp[v] == c0) {
                continue 'subset;
            }
            // every vertex needs an outgoing chosen edge to support a closed walk
            if !verts.iter().all(|&v| chosen.iter().any(|e| e.src == v)) {
                continue 'subset;
            }
            for c in 0..g.r {
                let min = chosen.iter().map(|e| e.prios[c]).min().unwrap();
                if min % 2 == 1 {
                    continue 'subset;
                }
            }
            return true;
        }
        false
    }

    #[test]
    fn conjunctive_agrees_with_exhaustive_enumeration() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=10);
            let r = rng.gen_range(1..=2);
            let edges: Vec<VEdge> = (0..m)
                .map(|_| VEdge {
                    src: rng.gen_range(0..n),
                    dst: rng.gen_range(0..n),
                    prios: (0..r).map(|_| rng.gen_range(0..4)).collect(),
                    symbol: None,
                })
                .collect();
            let g = VectorGraph { n, r, edges, initial: 0 };
            let got = conjunctive_empty(&g).unwrap();
            assert_eq!(got.is_some(), exhaustive_oracle(&g));
            if let Some(w) = got {
                // witness sanity: every coordinate's cycle minimum is even
                for c in 0..g.r {
                    let min = w.cycle.iter().map(|&i| g.edges[i].prios[c]).min().unwrap();
                    assert_eq!(min % 2, 0);
                }
            }
        }
    }

    #[test]
    fn inclusion_spec_cases() {
        let a1 = zoo::inf_a();
        let full = zoo::sigma_omega(&["a", "b"]);
        assert!(included(&a1, &full).unwrap().holds);

        let rep = included(&full, &a1).unwrap();
        assert!(!rep.holds);
        let w = rep.counterexample.unwrap();
        assert!(full.accepts(&w).unwrap());
        assert!(!a1.accepts(&w).unwrap());

        assert!(included(&a1, &a1).unwrap().holds);
    }

    #[test]
    fn equivalence_spec_cases() {
        let a1 = zoo::inf_a();
        assert!(equivalent(&a1, &a1).unwrap().holds);
        let cc = a1.complement_det().unwrap().complement_det().unwrap();
        assert!(equivalent(&a1, &cc).unwrap().holds);
        let full = zoo::sigma_omega(&["a", "b"]);
        let rep = equivalent(&a1, &full).unwrap();
        assert!(!rep.holds);
        let w = rep.counterexample.unwrap();
        assert_ne!(a1.accepts(&w).unwrap(), full.accepts(&w).unwrap());
    }

    #[test]
    fn inclusion_counterexamples_validate() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let pool = [zoo::inf_a(), zoo::aa_then_any(), zoo::aabb_then_any(), zoo::sigma_omega(&["a", "b"])];
        for _ in 0..40 {
            let a = &pool[rng.gen_range(0..pool.len())];
            let b = &pool[rng.gen_range(0..pool.len())];
            let rep = included(a, b).unwrap();
            if let Some(w) = rep.counterexample {
                assert!(a.accepts(&w).unwrap());
                assert!(!b.accepts(&w).unwrap());
            }
        }
    }

    use crate::graph::{adjacency, reachable, scc};
}
