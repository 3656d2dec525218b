//! Finite games on (Σ∪{ε})-labelled arenas, solved against deterministic
//! parity automata, plus the brute-force memory oracles that ground every
//! memory claim in this crate.
//!
//! Convention: ε-steps leave the automaton state unchanged and contribute a
//! neutral priority `index + 2` (even, above every automaton priority), so a
//! play whose Σ-projection is finite counts for Eve; plays with infinitely
//! many proper letters are judged by the automaton alone.

pub mod memory;
pub mod muller;
pub mod structuration;

use std::collections::BTreeMap;

use crate::graph::adjacency;
use crate::{Alphabet, Automaton, Error, Letter, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Owner {
    Eve,
    Adam,
}

/// One labelled game edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GEdge {
    pub src: usize,
    pub letter: Letter,
    pub dst: usize,
}

/// A finite two-player pointed arena with Σ∪{ε} edge labels.
#[derive(Debug, Clone)]
pub struct GameArena {
    pub alphabet: Alphabet,
    pub vertices: Vec<String>,
    pub owner: Vec<Owner>,
    pub edges: Vec<GEdge>,
    pub initial: usize,
}

impl GameArena {
    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() || self.initial >= self.vertices.len() {
            return Err(Error::Invalid("bad vertex set or initial vertex".into()));
        }
        if self.owner.len() != self.vertices.len() {
            return Err(Error::Invalid("owner map must cover all vertices".into()));
        }
        for e in &self.edges {
            if e.src >= self.vertices.len() || e.dst >= self.vertices.len() {
                return Err(Error::Invalid("edge endpoint out of range".into()));
            }
            if let Letter::Sym(s) = e.letter {
                if s >= self.alphabet.len() {
                    return Err(Error::Invalid("edge letter out of range".into()));
                }
            }
        }
        if let Some(v) = (0..self.vertices.len()).find(|&v| !self.edges.iter().any(|e| e.src == v)) {
            return Err(Error::DeadEnd(self.vertices[v].clone()));
        }
        Ok(())
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = (usize, &GEdge)> {
        self.edges.iter().enumerate().filter(move |(_, e)| e.src == v)
    }
}

/// The product of an arena with a deterministic automaton, in vertex-priority
/// form: base nodes `(v, q)` plus one midpoint per (game edge, q) carrying
/// the transition priority (or the neutral priority for ε).
#[derive(Debug, Clone)]
pub struct ProductGame {
    pub n: usize,
    pub owner: Vec<Owner>,
    pub prio: Vec<u32>,
    pub adj: Vec<Vec<usize>>,
    pub initial: usize,
    pub n_base: usize,
    pub nq: usize,
    /// For midpoints: the arena edge index it came from.
    pub midpoint_edge: Vec<Option<usize>>,
}

impl ProductGame {
    pub fn base(&self, v: usize, q: usize) -> usize {
        v * self.nq + q
    }
}

pub fn neutral_priority(b: &Automaton) -> u32 {
    b.index + 2
}

/// Builds the product parity game of `g` against deterministic `b`
/// (completed on the fly).
pub fn product_game(g: &GameArena, b: &Automaton) -> Result<ProductGame> {
    g.validate()?;
    if !b.is_deterministic() {
        return Err(Error::Invalid("game solving needs a deterministic automaton".into()));
    }
    let b = b.completed();
    let same: Vec<&str> = g.alphabet.symbols().collect();
    let bsyms: Vec<&str> = b.alphabet.symbols().collect();
    if same != bsyms {
        return Err(Error::AlphabetMismatch(same.join(" "), bsyms.join(" ")));
    }
    let nq = b.n_states();
    let n_base = g.vertices.len() * nq;
    let neutral = neutral_priority(&b);
    let mut owner = Vec::new();
    let mut prio = Vec::new();
    let mut adj: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.vertices.len() {
        for _q in 0..nq {
            owner.push(g.owner[v]);
            prio.push(neutral);
            adj.push(Vec::new());
        }
    }
    let mut midpoint_edge = vec![None; n_base];
    let mut next = n_base;
    for (e_idx, e) in g.edges.iter().enumerate() {
        for q in 0..nq {
            let (y, q2) = match e.letter {
                Letter::Sym(s) => b.det_successor(q, s).expect("complete"),
                Letter::Eps => (neutral, q),
            };
            let mid = next;
            next += 1;
            owner.push(g.owner[e.src]); // midpoints have out-degree 1; owner is moot
            prio.push(y);
            adj.push(vec![e.dst * nq + q2]);
            midpoint_edge.push(Some(e_idx));
            adj[e.src * nq + q].push(mid);
        }
    }
    Ok(ProductGame {
        n: next,
        owner,
        prio,
        adj,
        initial: g.initial * nq + b.initial,
        n_base,
        nq,
        midpoint_edge,
    })
}

/// Winner regions and positional strategies of a min-parity game.
#[derive(Debug, Clone)]
pub struct ParitySolution {
    pub eve_wins: Vec<bool>,
    /// Chosen successor for each vertex owned by its winner.
    pub strategy: Vec<Option<usize>>,
}

/// Attractor of `targets` for `side` within `active`; fills `strategy` with
/// a move towards the target set for side-owned attracted vertices.
fn attractor(
    adj: &[Vec<usize>],
    radj: &[Vec<usize>],
    owner: &[Owner],
    active: &[bool],
    side: Owner,
    targets: &[usize],
    strategy: &mut [Option<usize>],
) -> Vec<bool> {
    let n = adj.len();
    let mut inset = vec![false; n];
    let mut out_count = vec![0usize; n];
    for v in 0..n {
        if active[v] {
            out_count[v] = adj[v].iter().filter(|&&w| active[w]).count();
        }
    }
    let mut queue: Vec<usize> = Vec::new();
    for &t in targets {
        if active[t] && !inset[t] {
            inset[t] = true;
            queue.push(t);
        }
    }
    let mut i = 0;
    while i < queue.len() {
        let w = queue[i];
        i += 1;
        for &v in &radj[w] {
            if !active[v] || inset[v] {
                continue;
            }
            if owner[v] == side {
                inset[v] = true;
                if strategy[v].is_none() {
                    strategy[v] = Some(w);
                }
                queue.push(v);
            } else {
                out_count[v] -= 1;
                if out_count[v] == 0 {
                    inset[v] = true;
                    queue.push(v);
                }
            }
        }
    }
    inset
}

/// Attractor-based recursive solver (min-parity: the relevant priority of a
/// subgame is its minimum) with positional strategy extraction for both
/// players. Exponential worst case; fine at desk scale.
pub fn solve_parity(n: usize, owner: &[Owner], prio: &[u32], adj: &[Vec<usize>]) -> ParitySolution {
    let mut radj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, outs) in adj.iter().enumerate() {
        for &w in outs {
            radj[w].push(v);
        }
    }
    let mut eve_wins = vec![false; n];
    let mut strategy = vec![None; n];
    let active = vec![true; n];
    solve_rec(adj, &radj, owner, prio, &active, &mut eve_wins, &mut strategy);
    ParitySolution { eve_wins, strategy }
}

fn solve_rec(
    adj: &[Vec<usize>],
    radj: &[Vec<usize>],
    owner: &[Owner],
    prio: &[u32],
    active: &[bool],
    eve_wins: &mut [bool],
    strategy: &mut [Option<usize>],
) {
    let verts: Vec<usize> = (0..adj.len()).filter(|&v| active[v]).collect();
    if verts.is_empty() {
        return;
    }
    let p = verts.iter().map(|&v| prio[v]).min().unwrap();
    let side = if p % 2 == 0 { Owner::Eve } else { Owner::Adam };
    let targets: Vec<usize> = verts.iter().copied().filter(|&v| prio[v] == p).collect();
    let mut attr_strat = vec![None; adj.len()];
    let a = attractor(adj, radj, owner, active, side, &targets, &mut attr_strat);
    let mut rest = active.to_vec();
    for v in 0..adj.len() {
        if a[v] {
            rest[v] = false;
        }
    }
    let mut sub_wins = vec![false; adj.len()];
    let mut sub_strat = vec![None; adj.len()];
    solve_rec(adj, radj, owner, prio, &rest, &mut sub_wins, &mut sub_strat);
    let opponent_region: Vec<usize> = (0..adj.len())
        .filter(|&v| rest[v] && (sub_wins[v] == (side == Owner::Adam)))
        .collect();
    if opponent_region.is_empty() {
        // `side` wins everywhere in `active`
        for &v in &verts {
            eve_wins[v] = side == Owner::Eve;
            if owner[v] == side {
                strategy[v] = if a[v] {
                    if prio[v] == p {
                        // on the target set: any move staying in the game
                        adj[v].iter().copied().find(|&w| active[w])
                    } else {
                        attr_strat[v]
                    }
                } else {
                    sub_strat[v]
                };
            } else {
                strategy[v] = None;
            }
        }
        return;
    }
    // the opponent keeps their subgame region plus its attractor
    let opp = match side {
        Owner::Eve => Owner::Adam,
        Owner::Adam => Owner::Eve,
    };
    let mut opp_attr_strat = vec![None; adj.len()];
    let b = attractor(adj, radj, owner, active, opp, &opponent_region, &mut opp_attr_strat);
    for v in 0..adj.len() {
        if !active[v] || !b[v] {
            continue;
        }
        eve_wins[v] = opp == Owner::Eve;
        if owner[v] == opp {
            strategy[v] =
                if opponent_region.contains(&v) { sub_strat[v] } else { opp_attr_strat[v] };
        } else {
            strategy[v] = None;
        }
    }
    let mut remaining = active.to_vec();
    for v in 0..adj.len() {
        if b[v] {
            remaining[v] = false;
        }
    }
    solve_rec(adj, radj, owner, prio, &remaining, eve_wins, strategy);
}

/// Progress-measure solver for the Eve region of the same games; used as an
/// independent cross-check of the attractor recursion. Eve wins a vertex iff
/// its measure stays below the overflow sentinel.
pub fn progress_measure_region(
    n: usize,
    owner: &[Owner],
    prio: &[u32],
    adj: &[Vec<usize>],
) -> Vec<bool> {
    let d = prio.iter().copied().max().unwrap_or(0) + 1;
    let d = d + d % 2;
    let arity = (d / 2) as usize;
    // per odd priority p, counters range up to the number of p-vertices
    let mut limits = vec![0u32; arity];
    for v in 0..n {
        if prio[v] % 2 == 1 {
            limits[(prio[v] / 2) as usize] += 1;
        }
    }
    let mut meas: Vec<Option<Vec<u32>>> = vec![Some(vec![0; arity]); n];
    let prog = |m: &Option<Vec<u32>>, p: u32| -> Option<Vec<u32>> {
        let m = m.as_ref()?;
        let keep = ((p as usize) + 1) / 2;
        let mut out = vec![0u32; arity];
        out[..keep.min(arity)].copy_from_slice(&m[..keep.min(arity)]);
        if p % 2 == 1 {
            // strictly increase within the prefix through p
            let mut pos = keep.min(arity);
            loop {
                if pos == 0 {
                    return None;
                }
                pos -= 1;
                if out[pos] < limits[pos] {
                    out[pos] += 1;
                    for x in out.iter_mut().take(keep.min(arity)).skip(pos + 1) {
                        *x = 0;
                    }
                    return Some(out);
                }
                out[pos] = 0;
            }
        } else {
            Some(out)
        }
    };
    loop {
        let mut changed = false;
        for v in 0..n {
            let candidates: Vec<Option<Vec<u32>>> =
                adj[v].iter().map(|&w| prog(&meas[w], prio[v])).collect();
            let pick = match owner[v] {
                Owner::Eve => candidates.into_iter().min_by(cmp_measure),
                Owner::Adam => candidates.into_iter().max_by(cmp_measure),
            }
            .flatten();
            let new = match (&meas[v], &pick) {
                (None, _) | (_, None) => None,
                (Some(cur), Some(p)) => Some(cur.clone().max(p.clone())),
            };
            if new != meas[v] {
                meas[v] = new;
                changed = true;
            }
        }
        if !changed {
            return meas.iter().map(Option::is_some).collect();
        }
    }
}

fn cmp_measure(a: &Option<Vec<u32>>, b: &Option<Vec<u32>>) -> std::cmp::Ordering {
    match (a, b) {
        (None, None) => std::cmp::Ordering::Equal,
        (None, Some(_)) => std::cmp::Ordering::Greater, // overflow is largest
        (Some(_), None) => std::cmp::Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

/// Outcome of solving a game against an automaton.
#[derive(Debug, Clone)]
pub struct GameSolution {
    pub eve_wins_initial: bool,
    /// Eve's winning region over product base nodes `(v, q)`.
    pub eve_region: Vec<bool>,
    /// Positional (in the product) choice of arena edge for Eve's winning
    /// base nodes.
    pub eve_strategy: BTreeMap<(usize, usize), usize>,
    pub nq: usize,
    pub automaton_initial: usize,
}

/// Solves the game `g` with objective `L(b)`: the winner from the initial
/// vertex and, when Eve wins, a strategy positional in the product (hence of
/// memory at most |b| in the arena).
pub fn solve_game(g: &GameArena, b: &Automaton) -> Result<GameSolution> {
    let p = product_game(g, b)?;
    let sol = solve_parity(p.n, &p.owner, &p.prio, &p.adj);
    debug_assert_eq!(
        sol.eve_wins[..p.n_base],
        progress_measure_region(p.n, &p.owner, &p.prio, &p.adj)[..p.n_base],
        "attractor recursion and progress measures disagree"
    );
    let mut eve_strategy = BTreeMap::new();
    for v in 0..g.vertices.len() {
        for q in 0..p.nq {
            let node = p.base(v, q);
            if sol.eve_wins[node] && g.owner[v] == Owner::Eve {
                if let Some(mid) = sol.strategy[node] {
                    if let Some(e) = p.midpoint_edge.get(mid).copied().flatten() {
                        eve_strategy.insert((v, q), e);
                    }
                }
            }
        }
    }
    let bc = b.completed();
    Ok(GameSolution {
        eve_wins_initial: sol.eve_wins[p.initial],
        eve_region: sol.eve_wins[..p.n_base].to_vec(),
        eve_strategy,
        nq: p.nq,
        automaton_initial: bc.initial,
    })
}

/// A finite-memory strategy for Eve: a move per (Eve vertex, memory state)
/// and a memory update per (arena edge, memory state); updates fix the
/// memory on ε-labelled edges.
#[derive(Debug, Clone)]
pub struct FiniteMemoryStrategy {
    pub k: u32,
    pub moves: BTreeMap<(usize, u32), usize>,
    pub updates: BTreeMap<(usize, u32), u32>,
}

impl FiniteMemoryStrategy {
    /// The memory after traversing `edge` with memory `m`; defaults to `m`.
    pub fn update(&self, edge: usize, m: u32) -> u32 {
        *self.updates.get(&(edge, m)).unwrap_or(&m)
    }
}

/// Verifies a strategy by lasso analysis: every reachable cycle of the fixed
/// strategy graph in product with `b` must have an even minimum priority,
/// every reachable Eve pair must have a move, and ε-edges must not change
/// the memory.
pub fn validate_strategy(g: &GameArena, b: &Automaton, s: &FiniteMemoryStrategy) -> Result<bool> {
    g.validate()?;
    let b = b.completed();
    for (&(e, m), &m2) in &s.updates {
        if e >= g.edges.len() {
            return Err(Error::Invalid("update on unknown edge".into()));
        }
        if g.edges[e].letter.is_eps() && m != m2 {
            return Ok(false);
        }
    }
    let nq = b.n_states();
    let k = s.k;
    let neutral = neutral_priority(&b);
    let id = |v: usize, m: u32, q: usize| (v * k as usize + m as usize) * nq + q;
    let n = g.vertices.len() * k as usize * nq;
    let mut edges: Vec<(usize, u32, usize)> = Vec::new();
    let mut queue = vec![(g.initial, 0u32, b.initial)];
    let mut seen = vec![false; n];
    seen[id(g.initial, 0, b.initial)] = true;
    while let Some((v, m, q)) = queue.pop() {
        let arena_edges: Vec<usize> = match g.owner[v] {
            Owner::Eve => match s.moves.get(&(v, m)) {
                None => return Ok(false),
                Some(&e) => vec![e],
            },
            Owner::Adam => g.out_edges(v).map(|(i, _)| i).collect(),
        };
        for e_idx in arena_edges {
            let e = g.edges[e_idx];
            debug_assert_eq!(e.src, v);
            let m2 = s.update(e_idx, m);
            if m2 >= k || (e.letter.is_eps() && m2 != m) {
                return Ok(false);
            }
            let (y, q2) = match e.letter {
                Letter::Sym(sym) => b.det_successor(q, sym).expect("complete"),
                Letter::Eps => (neutral, q),
            };
            let from = id(v, m, q);
            let to = id(e.dst, m2, q2);
            edges.push((from, y, to));
            if !seen[to] {
                seen[to] = true;
                queue.push((e.dst, m2, q2));
            }
        }
    }
    Ok(!has_odd_dominated_cycle(n, &edges))
}

/// Is there a cycle whose minimum priority is odd?
pub(crate) fn has_odd_dominated_cycle(n: usize, edges: &[(usize, u32, usize)]) -> bool {
    let maxp = edges.iter().map(|&(_, p, _)| p).max().unwrap_or(0);
    for p in (1..=maxp).step_by(2) {
        let kept: Vec<&(usize, u32, usize)> = edges.iter().filter(|&&(_, y, _)| y >= p).collect();
        let adj = adjacency(n, kept.iter().map(|&&(a, _, b)| (a, b)));
        let (_, comp) = crate::graph::scc(&adj);
        if kept.iter().any(|&&(a, y, b)| y == p && comp[a] == comp[b]) {
            return true;
        }
    }
    false
}

#[cfg(test)]
pub(crate) fn arena_for_tests(
    symbols: &[&str],
    vertices: &[(&str, Owner)],
    edges: &[(usize, &str, usize)],
    initial: usize,
) -> GameArena {
    let alphabet = Alphabet::new(symbols.iter().copied()).unwrap();
    let g = GameArena {
        vertices: vertices.iter().map(|(n, _)| n.to_string()).collect(),
        owner: vertices.iter().map(|&(_, o)| o).collect(),
        edges: edges
            .iter()
            .map(|&(s, l, d)| GEdge { src: s, letter: alphabet.letter(l).unwrap(), dst: d })
            .collect(),
        alphabet,
        initial,
    };
    g.validate().unwrap();
    g
}
