//! Structuration of well-founded graphs: blowing a graph satisfying an
//! objective into a k-wise ε-complete k-blowup, by solving the choice arena
//! (Adam may hide the current vertex inside any subset containing it; Eve
//! must pick a member without touching her memory) and reading the blowup
//! off the winning strategy. Also the two-state strategy for "two distinct
//! letters infinitely often" on arenas fully controlled by Eve.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::prelude::*;

use super::memory::{wins_with_memory, MemorySearchOptions};
use super::{solve_game, validate_strategy, FiniteMemoryStrategy, GEdge, GameArena, Owner};
use crate::graph::{adjacency, scc};
use crate::language::{conjunctive_empty, VEdge, VectorGraph};
use crate::{Automaton, Error, LabelledGraph, Letter, Result, UltimatelyPeriodicWord};

/// Every infinite path of the pointed graph has a Σ-projection in `L(b)`;
/// exact product check (ε-steps are neutral and cannot dominate a cycle).
pub fn graph_satisfies(g: &LabelledGraph, b: &Automaton) -> Result<bool> {
    let init = g.initial.ok_or_else(|| Error::Invalid("graph must be pointed".into()))?;
    if !g.dead_ends().is_empty() {
        return Err(Error::DeadEnd("graph has a dead end".into()));
    }
    if !g.is_well_founded() {
        return Ok(false);
    }
    let bc = b.complement_det()?;
    let n2 = bc.n_states();
    let id = |v: usize, q: usize| v * n2 + q;
    let mut edges = Vec::new();
    for &(u, l, v) in &g.edges {
        match l {
            Letter::Sym(s) => {
                for q in 0..n2 {
                    if let Some((z, q2)) = bc.det_successor(q, s) {
                        edges.push(VEdge { src: id(u, q), dst: id(v, q2), prios: vec![z], symbol: Some(s) });
                    }
                }
            }
            Letter::Eps => {
                for q in 0..n2 {
                    edges.push(VEdge {
                        src: id(u, q),
                        dst: id(v, q),
                        prios: vec![bc.index + 1],
                        symbol: None,
                    });
                }
            }
        }
    }
    let vg = VectorGraph { n: g.vertices.len() * n2, r: 1, edges, initial: id(init, bc.initial) };
    Ok(conjunctive_empty(&vg)?.is_none())
}

/// The choice arena of a pointed graph: original vertices belong to Adam,
/// every nonempty subset is an Eve vertex, and `v ↔ε X` for `v ∈ X`.
pub fn choice_arena(g: &LabelledGraph) -> Result<GameArena> {
    let init = g.initial.ok_or_else(|| Error::Invalid("graph must be pointed".into()))?;
    let nb = g.vertices.len();
    if nb > 10 {
        return Err(Error::SizeGuard(format!("{nb} vertices gives a 2^{nb} arena")));
    }
    let mut vertices = g.vertices.clone();
    let mut owner = vec![Owner::Adam; nb];
    let mut edges: Vec<GEdge> =
        g.edges.iter().map(|&(s, l, d)| GEdge { src: s, letter: l, dst: d }).collect();
    for mask in 1u64..(1 << nb) {
        let x = vertices.len();
        let members: Vec<usize> = (0..nb).filter(|&v| mask >> v & 1 == 1).collect();
        vertices.push(format!(
            "{{{}}}",
            members.iter().map(|&v| g.vertices[v].as_str()).collect::<Vec<_>>().join(",")
        ));
        owner.push(Owner::Eve);
        for &v in &members {
            edges.push(GEdge { src: v, letter: Letter::Eps, dst: x });
            edges.push(GEdge { src: x, letter: Letter::Eps, dst: v });
        }
    }
    Ok(GameArena { alphabet: g.alphabet.clone(), vertices, owner, edges, initial: init })
}

/// Result of a structuration run: the blowup with its vertex classes and the
/// outcome of the four postcondition checks.
#[derive(Debug, Clone)]
pub struct Structuration {
    pub graph: LabelledGraph,
    /// (original vertex, memory class) per blowup vertex.
    pub classes: Vec<(usize, u32)>,
    pub k: u32,
    pub blowup_ok: bool,
    pub eps_total: bool,
    pub well_founded: bool,
    pub satisfies: bool,
    pub sampled_lassos_ok: usize,
    pub sampled_lassos: usize,
}

impl Structuration {
    pub fn holds(&self) -> bool {
        self.blowup_ok
            && self.eps_total
            && self.well_founded
            && self.satisfies
            && self.sampled_lassos_ok == self.sampled_lassos
    }
}

/// Blows `g` (well-founded, pointed, satisfying `L(b)`) into a k-blowup that
/// is well-founded, ε-total within every memory class, and still satisfies
/// the objective. The blowup is extracted from a winning k-memory strategy
/// on the choice arena (its reachable part only: unreached strategy entries
/// carry no guarantee) and its ε-classes are rewired to a strict order
/// extending the ε-edges `g` already had.
pub fn structuration(
    g: &LabelledGraph,
    b: &Automaton,
    k: u32,
    opts: &MemorySearchOptions,
) -> Result<Structuration> {
    if !graph_satisfies(g, b)? {
        return Err(Error::Invalid("the input graph does not satisfy the objective".into()));
    }
    let arena = choice_arena(g)?;
    // chromatic tables are a small complete subfamily and usually enough;
    // fall back to the general search when they are not
    let chromatic_first =
        MemorySearchOptions { chromatic: true, budget: opts.budget.min(2_000_000) };
    let strategy = match wins_with_memory(&arena, b, k, &chromatic_first) {
        Ok(Some(s)) => Some(s),
        Ok(None) | Err(Error::BudgetExceeded(_)) => wins_with_memory(&arena, b, k, opts)?,
        Err(e) => return Err(e),
    }
    .ok_or_else(|| Error::Invalid(format!("no winning {k}-memory strategy on the choice arena")))?;

    // reachable strategy pairs (arena vertex, memory), ignoring the
    // automaton coordinate
    let nb = g.vertices.len();
    let mut reach: BTreeSet<(usize, u32)> = BTreeSet::new();
    let mut queue = VecDeque::new();
    reach.insert((arena.initial, 0));
    queue.push_back((arena.initial, 0u32));
    while let Some((v, m)) = queue.pop_front() {
        let outs: Vec<(usize, GEdge)> = match arena.owner[v] {
            Owner::Eve => {
                let e = *strategy.moves.get(&(v, m)).expect("total move map");
                vec![(e, arena.edges[e])]
            }
            Owner::Adam => arena.out_edges(v).map(|(i, e)| (i, *e)).collect(),
        };
        for (e_idx, e) in outs {
            let m2 = strategy.update(e_idx, m);
            if reach.insert((e.dst, m2)) {
                queue.push_back((e.dst, m2));
            }
        }
    }

    // blowup vertices: reachable (original vertex, memory)
    let classes: Vec<(usize, u32)> =
        reach.iter().copied().filter(|&(v, _)| v < nb).collect();
    let index_of: BTreeMap<(usize, u32), usize> =
        classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut edges: BTreeSet<(usize, Letter, usize)> = BTreeSet::new();
    // lifted edges of g, with memory driven by the strategy updates
    for &(v, m) in &classes {
        for (e_idx, e) in arena.out_edges(v) {
            if e.dst >= nb {
                continue; // hiding moves handled below
            }
            let m2 = strategy.update(e_idx, m);
            if let (Some(&a), Some(&bi)) = (index_of.get(&(v, m)), index_of.get(&(e.dst, m2))) {
                edges.insert((a, e.letter, bi));
            }
        }
    }
    // ε-edges from Eve's subset choices
    for &(x, m) in reach.iter().filter(|&&(x, _)| x >= nb) {
        let e_idx = *strategy.moves.get(&(x, m)).expect("total move map");
        let target = arena.edges[e_idx].dst;
        debug_assert!(target < nb);
        let mask = (x - nb + 1) as u64;
        for v in 0..nb {
            if mask >> v & 1 == 1 {
                if let (Some(&a), Some(&bi)) = (index_of.get(&(v, m)), index_of.get(&(target, m))) {
                    edges.insert((a, Letter::Eps, bi));
                }
            }
        }
    }

    // rewire ε-classes: within each memory class, replace the ε-relation on
    // each strongly connected component by a strict total order extending
    // the ε-edges g already had there
    let n = classes.len();
    let eps_adj = adjacency(
        n,
        edges.iter().filter(|e| e.1.is_eps()).map(|&(a, _, b2)| (a, b2)),
    );
    let (_, comp) = scc(&eps_adj);
    let mut by_comp: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        by_comp.entry(comp[v]).or_default().push(v);
    }
    for members in by_comp.values() {
        let internal_eps: Vec<(usize, usize)> = edges
            .iter()
            .filter(|e| e.1.is_eps() && members.contains(&e.0) && members.contains(&e.2))
            .map(|&(a, _, b2)| (a, b2))
            .collect();
        if internal_eps.is_empty() {
            continue;
        }
        // order: topological on g's own ε-edges among the originals, then by
        // vertex index; ε flows from later to earlier
        let mut order = members.clone();
        order.sort_by_key(|&v| {
            let (orig, _) = classes[v];
            (g_eps_depth(g, orig), orig)
        });
        for e in internal_eps {
            edges.remove(&(e.0, Letter::Eps, e.1));
        }
        for i in 0..order.len() {
            for j in 0..i {
                edges.insert((order[i], Letter::Eps, order[j]));
            }
        }
    }

    let out = LabelledGraph {
        alphabet: g.alphabet.clone(),
        vertices: classes
            .iter()
            .map(|&(v, m)| crate::automaton::tuple_name(&[&g.vertices[v], &m.to_string()]))
            .collect(),
        edges: edges.into_iter().collect(),
        initial: index_of.get(&(g.initial.unwrap(), 0)).copied(),
    };

    // postconditions
    let blowup_ok = check_graph_blowup(g, &out, &classes);
    let eps_total = check_eps_total(&out, &classes);
    let well_founded = out.is_well_founded();
    let satisfies = well_founded && graph_satisfies(&out, b)?;
    let (sampled_lassos_ok, sampled_lassos) = sample_lassos(&out, b, 100, 0xB10F)?;
    Ok(Structuration {
        graph: out,
        classes,
        k,
        blowup_ok,
        eps_total,
        well_founded,
        satisfies,
        sampled_lassos_ok,
        sampled_lassos,
    })
}

/// Depth of a vertex in the (acyclic) ε-relation of `g`: sinks first. The
/// rewiring keeps g's ε-edges pointing from deeper to shallower vertices.
fn g_eps_depth(g: &LabelledGraph, v: usize) -> usize {
    fn rec(adj: &[Vec<usize>], v: usize, fuel: usize) -> usize {
        if fuel == 0 {
            return 0;
        }
        adj[v].iter().map(|&w| 1 + rec(adj, w, fuel - 1)).max().unwrap_or(0)
    }
    let adj = adjacency(
        g.vertices.len(),
        g.edges.iter().filter(|e| e.1.is_eps()).map(|&(a, _, b)| (a, b)),
    );
    rec(&adj, v, g.vertices.len() + 1)
}

fn check_graph_blowup(g: &LabelledGraph, out: &LabelledGraph, classes: &[(usize, u32)]) -> bool {
    if out.initial.map(|i| classes[i].0) != g.initial {
        return false;
    }
    for (i, &(v, m)) in classes.iter().enumerate() {
        for &(s, l, d) in g.edges.iter().filter(|e| e.0 == v) {
            debug_assert_eq!(s, v);
            let lifted = out.edges.iter().any(|&(a, l2, b)| {
                a == i && l2 == l && classes[b].0 == d && (!l.is_eps() || classes[b].1 == m)
            });
            if !lifted {
                return false;
            }
        }
    }
    // ε-edges stay within their class
    out.edges
        .iter()
        .filter(|e| e.1.is_eps())
        .all(|&(a, _, b)| classes[a].1 == classes[b].1)
}

fn check_eps_total(out: &LabelledGraph, classes: &[(usize, u32)]) -> bool {
    let eps: BTreeSet<(usize, usize)> =
        out.edges.iter().filter(|e| e.1.is_eps()).map(|&(a, _, b)| (a, b)).collect();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if classes[i].1 != classes[j].1 {
                continue;
            }
            if !eps.contains(&(i, j)) && !eps.contains(&(j, i)) {
                return false;
            }
        }
    }
    true
}

/// Samples random lassos in the live part and checks their projections.
fn sample_lassos(
    g: &LabelledGraph,
    b: &Automaton,
    trials: usize,
    seed: u64,
) -> Result<(usize, usize)> {
    let Some(init) = g.initial else {
        return Ok((0, 0));
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut ok = 0;
    let mut total = 0;
    for _ in 0..trials {
        let Some(word) = random_lasso_word(g, init, &mut rng) else {
            continue;
        };
        total += 1;
        if b.accepts(&word)? {
            ok += 1;
        }
    }
    Ok((ok, total))
}

/// A random walk from `init` until a vertex repeats; the Σ-projection of the
/// loop becomes the period. `None` when the period projects to ε only.
fn random_lasso_word(
    g: &LabelledGraph,
    init: usize,
    rng: &mut impl Rng,
) -> Option<UltimatelyPeriodicWord> {
    let mut path: Vec<(usize, Option<String>)> = vec![(init, None)];
    loop {
        let (v, _) = *path.last().unwrap();
        let outs: Vec<&(usize, Letter, usize)> = g.out_edges(v).collect();
        if outs.is_empty() {
            return None;
        }
        let &&(_, l, d) = outs.get(rng.gen_range(0..outs.len()))?;
        let lab = match l {
            Letter::Sym(s) => Some(g.alphabet.symbol(s).to_string()),
            Letter::Eps => None,
        };
        if let Some(pos) = path.iter().position(|&(w, _)| w == d) {
            let mut prefix: Vec<String> = Vec::new();
            let mut period: Vec<String> = Vec::new();
            for (i, (_, lab2)) in path.iter().enumerate().skip(1) {
                if i <= pos {
                    prefix.extend(lab2.clone());
                } else {
                    period.extend(lab2.clone());
                }
            }
            period.extend(lab);
            if period.is_empty() {
                return None;
            }
            return UltimatelyPeriodicWord::new(prefix, period).ok();
        }
        path.push((d, lab));
    }
}

/// The two-state strategy for the objective "at least two distinct letters
/// infinitely often" on arenas where Eve controls every vertex: memory 0
/// chases the smallest letter producible from the current vertex, memory 1
/// the second smallest, switching whenever the chased letter is produced.
pub fn wn_two_memory_strategy(g: &GameArena) -> Result<FiniteMemoryStrategy> {
    g.validate()?;
    if g.owner.iter().any(|&o| o != Owner::Eve) {
        return Err(Error::Invalid("every vertex must belong to Eve".into()));
    }
    if g.alphabet.len() < 2 {
        return Err(Error::Invalid("need at least two letters".into()));
    }
    let b = crate::zoo::two_letters_io_over(&g.alphabet);
    let sol = solve_game(g, &b)?;
    for v in 0..g.vertices.len() {
        if !sol.eve_region[v * sol.nq + sol.automaton_initial] {
            return Err(Error::Invalid(format!("vertex `{}` loses", g.vertices[v])));
        }
    }
    let mut moves = BTreeMap::new();
    let mut updates = BTreeMap::new();
    for v in 0..g.vertices.len() {
        let targets = producible_letters(g, v);
        if targets.len() < 2 {
            return Err(Error::Invalid(format!(
                "vertex `{}` can only ever produce one letter",
                g.vertices[v]
            )));
        }
        for (m, &chased) in [targets[0], targets[1]].iter().enumerate() {
            let first = first_edge_towards(g, v, chased)
                .ok_or_else(|| Error::Invalid("no witness path".into()))?;
            moves.insert((v, m as u32), first);
            let e = g.edges[first];
            let switches = e.letter == Letter::Sym(chased);
            let m2 = if switches { 1 - m as u32 } else { m as u32 };
            updates.insert((first, m as u32), m2);
        }
    }
    let s = FiniteMemoryStrategy { k: 2, moves, updates };
    if !validate_strategy(g, &b, &s)? {
        return Err(Error::Invalid("assembled two-state strategy does not win".into()));
    }
    Ok(s)
}

/// Letters producible from `v`, smallest first.
fn producible_letters(g: &GameArena, v: usize) -> Vec<usize> {
    let adj = adjacency(g.vertices.len(), g.edges.iter().map(|e| (e.src, e.dst)));
    let reach = crate::graph::reachable(&adj, v);
    let mut out: Vec<usize> = (0..g.alphabet.len())
        .filter(|&s| g.edges.iter().any(|e| reach[e.src] && e.letter == Letter::Sym(s)))
        .collect();
    out.sort_unstable();
    out
}

/// First edge of a shortest path from `v` whose final edge produces `letter`.
fn first_edge_towards(g: &GameArena, v: usize, letter: usize) -> Option<usize> {
    // BFS over vertices; distance to "producing the letter" counted in edges
    let n = g.vertices.len();
    let mut dist = vec![usize::MAX; n];
    let mut first: Vec<Option<usize>> = vec![None; n];
    let mut queue = VecDeque::new();
    dist[v] = 0;
    queue.push_back(v);
    let mut best: Option<(usize, usize)> = None; // (total length, first edge)
    while let Some(u) = queue.pop_front() {
        for (e_idx, e) in g.out_edges(u) {
            let f = if u == v { Some(e_idx) } else { first[u] };
            if e.letter == Letter::Sym(letter) {
                let total = dist[u] + 1;
                if best.map(|(l, _)| total < l).unwrap_or(true) {
                    best = Some((total, f.unwrap()));
                }
            }
            if dist[e.dst] == usize::MAX {
                dist[e.dst] = dist[u] + 1;
                first[e.dst] = f;
                queue.push_back(e.dst);
            }
        }
    }
    best.map(|(_, e)| e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn graph(
        symbols: &[&str],
        vertices: &[&str],
        edges: &[(usize, &str, usize)],
        initial: usize,
    ) -> LabelledGraph {
        let alphabet = crate::Alphabet::new(symbols.iter().copied()).unwrap();
        LabelledGraph {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|&(s, l, d)| (s, alphabet.letter(l).unwrap(), d))
                .collect(),
            alphabet,
            initial: Some(initial),
        }
    }

    #[test]
    fn single_vertex_trivial_structuration() {
        let g = graph(&["a", "b"], &["v"], &[(0, "a", 0)], 0);
        let b = zoo::sigma_omega(&["a", "b"]);
        let s = structuration(&g, &b, 1, &MemorySearchOptions::default()).unwrap();
        assert!(s.holds(), "{s:?}");
    }

    #[test]
    fn bisimilar_vertices_get_an_eps_order() {
        let g = graph(&["a", "b"], &["u", "v"], &[(0, "a", 1), (1, "a", 0)], 0);
        let b = zoo::sigma_omega(&["a", "b"]);
        let s = structuration(&g, &b, 1, &MemorySearchOptions::default()).unwrap();
        assert!(s.holds(), "{s:?}");
        // ε-completeness forces an edge between the two copies in some direction
        let eps: Vec<_> = s.graph.edges.iter().filter(|e| e.1.is_eps()).collect();
        assert!(!eps.is_empty());
    }

    #[test]
    fn branch_graph_structures_at_three() {
        // both branches of (aa+bb)(a+b)^ω in one graph
        let g = graph(
            &["a", "b"],
            &["g0", "ga", "gb", "gt"],
            &[(0, "a", 1), (0, "b", 2), (1, "a", 3), (2, "b", 3), (3, "a", 3), (3, "b", 3)],
            0,
        );
        let b = zoo::aabb_then_any();
        assert!(graph_satisfies(&g, &b).unwrap());
        let s = structuration(&g, &b, 3, &MemorySearchOptions::default()).unwrap();
        assert!(s.holds(), "{s:?}");
    }

    #[test]
    fn unsatisfying_graph_rejected() {
        let g = graph(&["a", "b"], &["v"], &[(0, "a", 0), (0, "b", 0)], 0);
        let b = zoo::inf_a();
        assert!(!graph_satisfies(&g, &b).unwrap());
        assert!(structuration(&g, &b, 1, &MemorySearchOptions::default()).is_err());
    }

    #[test]
    fn wn_single_vertex_alternates() {
        let g = super::super::arena_for_tests(
            &["1", "2", "3"],
            &[("v", Owner::Eve)],
            &[(0, "1", 0), (0, "2", 0)],
            0,
        );
        let s = wn_two_memory_strategy(&g).unwrap();
        assert_eq!(s.k, 2);
    }

    #[test]
    fn wn_rejects_losing_vertex() {
        // w can only ever produce letter 1; v alternates happily on its own
        let g = super::super::arena_for_tests(
            &["1", "2"],
            &[("v", Owner::Eve), ("w", Owner::Eve)],
            &[(0, "1", 0), (0, "2", 0), (1, "1", 1)],
            0,
        );
        let err = wn_two_memory_strategy(&g).unwrap_err();
        assert!(format!("{err}").contains('w'));
    }

    #[test]
    fn wn_distant_colours() {
        // a cycle where letters 1 and 2 are far apart
        let g = super::super::arena_for_tests(
            &["1", "2", "3"],
            &[("u", Owner::Eve), ("v", Owner::Eve), ("w", Owner::Eve), ("x", Owner::Eve)],
            &[(0, "3", 1), (1, "1", 2), (2, "3", 3), (3, "2", 0)],
            0,
        );
        let s = wn_two_memory_strategy(&g).unwrap();
        let b = zoo::two_letters_io_over(&g.alphabet);
        assert!(validate_strategy(&g, &b, &s).unwrap());
    }
}
