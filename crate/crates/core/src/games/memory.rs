//! Brute-force oracles for bounded-memory strategies: an exact backtracking
//! search over move and update tables, and a witness search for games where
//! a given memory does not suffice.

use std::collections::BTreeMap;

use rand::prelude::*;

use super::{
    has_odd_dominated_cycle, neutral_priority, solve_game, validate_strategy,
    FiniteMemoryStrategy, GEdge, GameArena, Owner,
};
use crate::{Automaton, Error, Letter, Result};

#[derive(Debug, Clone)]
pub struct MemorySearchOptions {
    /// Restrict updates to a chromatic table χ(m, letter).
    pub chromatic: bool,
    /// Cap on visited search nodes (candidate guard).
    pub budget: u64,
}

impl Default for MemorySearchOptions {
    fn default() -> Self {
        MemorySearchOptions { chromatic: false, budget: 10_000_000 }
    }
}

/// Decision points discovered while exploring the partial strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Obligation {
    /// Choose an edge and a successor memory for an Eve pair (vertex, m).
    EveMove(usize, u32),
    /// Choose a successor memory for an Adam edge under memory m.
    Update(usize, u32),
}

struct Search<'a> {
    g: &'a GameArena,
    b: &'a Automaton,
    k: u32,
    chromatic_updates: Option<Vec<Vec<u32>>>,
    budget: u64,
    visits: u64,
    moves: BTreeMap<(usize, u32), (usize, u32)>,
    updates: BTreeMap<(usize, u32), u32>,
}

enum Analysis {
    Losing,
    Complete,
    Undecided(Obligation),
}

impl<'a> Search<'a> {
    /// Explores the product of the partial strategy with the automaton:
    /// reports a losing cycle, the first undecided obligation (in discovery
    /// order), or completeness.
    fn analyze(&self) -> Analysis {
        let nq = self.b.n_states();
        let k = self.k as usize;
        let nv = self.g.vertices.len();
        let idx = |v: usize, m: u32, q: usize| (v * k + m as usize) * nq + q;
        let n = nv * k * nq;
        let neutral = neutral_priority(self.b);
        let mut seen = vec![false; n];
        let mut queue = vec![(self.g.initial, 0u32, self.b.initial)];
        seen[idx(self.g.initial, 0, self.b.initial)] = true;
        let mut edges: Vec<(usize, u32, usize)> = Vec::new();
        let mut pending: Option<Obligation> = None;
        while let Some((v, m, q)) = queue.pop() {
            let mut step = |e_idx: usize,
                            m2: u32,
                            edges: &mut Vec<(usize, u32, usize)>,
                            seen: &mut Vec<bool>,
                            queue: &mut Vec<(usize, u32, usize)>| {
                let e = self.g.edges[e_idx];
                let (y, q2) = match e.letter {
                    Letter::Sym(s) => self.b.det_successor(q, s).expect("complete"),
                    Letter::Eps => (neutral, q),
                };
                edges.push((idx(v, m, q), y, idx(e.dst, m2, q2)));
                if !seen[idx(e.dst, m2, q2)] {
                    seen[idx(e.dst, m2, q2)] = true;
                    queue.push((e.dst, m2, q2));
                }
            };
            match self.g.owner[v] {
                Owner::Eve => match self.moves.get(&(v, m)) {
                    Some(&(e_idx, m2)) => step(e_idx, m2, &mut edges, &mut seen, &mut queue),
                    None => {
                        pending.get_or_insert(Obligation::EveMove(v, m));
                    }
                },
                Owner::Adam => {
                    for (e_idx, e) in self.g.out_edges(v) {
                        if e.letter.is_eps() {
                            step(e_idx, m, &mut edges, &mut seen, &mut queue);
                            continue;
                        }
                        match self.lookup_update(e_idx, *e, m) {
                            Some(m2) => step(e_idx, m2, &mut edges, &mut seen, &mut queue),
                            None => {
                                pending.get_or_insert(Obligation::Update(e_idx, m));
                            }
                        }
                    }
                }
            }
        }
        if has_odd_dominated_cycle(n, &edges) {
            return Analysis::Losing;
        }
        match pending {
            Some(o) => Analysis::Undecided(o),
            None => Analysis::Complete,
        }
    }

    fn lookup_update(&self, e_idx: usize, e: GEdge, m: u32) -> Option<u32> {
        if let Some(chi) = &self.chromatic_updates {
            let col = match e.letter {
                Letter::Sym(s) => s,
                Letter::Eps => return Some(m),
            };
            return Some(chi[m as usize][col]);
        }
        self.updates.get(&(e_idx, m)).copied()
    }

    fn dfs(&mut self, max_used: u32) -> Result<bool> {
        self.visits += 1;
        if self.visits > self.budget {
            return Err(Error::BudgetExceeded(self.visits));
        }
        match self.analyze() {
            Analysis::Losing => Ok(false),
            Analysis::Complete => Ok(true),
            Analysis::Undecided(ob) => {
                // canonical memory naming: a fresh state may only be the
                // next unused one
                let mem_limit = (max_used + 1).min(self.k - 1);
                match ob {
                    Obligation::EveMove(v, m) => {
                        let out: Vec<(usize, GEdge)> =
                            self.g.out_edges(v).map(|(i, e)| (i, *e)).collect();
                        for (e_idx, e) in out {
                            let targets: Vec<u32> = if e.letter.is_eps() {
                                vec![m]
                            } else if self.chromatic_updates.is_some() {
                                let chi = self.chromatic_updates.as_ref().unwrap();
                                let col = match e.letter {
                                    Letter::Sym(s) => s,
                                    Letter::Eps => unreachable!(),
                                };
                                vec![chi[m as usize][col]]
                            } else {
                                (0..=mem_limit).collect()
                            };
                            for m2 in targets {
                                self.moves.insert((v, m), (e_idx, m2));
                                if self.dfs(max_used.max(m2))? {
                                    return Ok(true);
                                }
                                self.moves.remove(&(v, m));
                            }
                        }
                        Ok(false)
                    }
                    Obligation::Update(e_idx, m) => {
                        for m2 in 0..=mem_limit {
                            self.updates.insert((e_idx, m), m2);
                            if self.dfs(max_used.max(m2))? {
                                return Ok(true);
                            }
                            self.updates.remove(&(e_idx, m));
                        }
                        Ok(false)
                    }
                }
            }
        }
    }
}

/// Searches for a winning k-memory strategy by exhaustive backtracking over
/// Eve's moves and the memory updates (or chromatic tables in chromatic
/// mode), pruning partial strategies that already contain an odd-dominated
/// reachable cycle. Returns a verified strategy, `None` if no strategy
/// exists, or a budget error.
pub fn wins_with_memory(
    g: &GameArena,
    b: &Automaton,
    k: u32,
    opts: &MemorySearchOptions,
) -> Result<Option<FiniteMemoryStrategy>> {
    g.validate()?;
    if k == 0 {
        return Err(Error::Invalid("memory must be positive".into()));
    }
    let b = b.completed();
    if opts.chromatic {
        let sigma = g.alphabet.len();
        let mut odo = crate::solver::table_odometer(k, k as usize * sigma);
        let mut visits = 0u64;
        while let Some(flat) = odo.next_canonical() {
            let chi: Vec<Vec<u32>> = flat.chunks(sigma).map(|r| r.to_vec()).collect();
            let mut search = Search {
                g,
                b: &b,
                k,
                chromatic_updates: Some(chi.clone()),
                budget: opts.budget.saturating_sub(visits),
                visits: 0,
                moves: BTreeMap::new(),
                updates: BTreeMap::new(),
            };
            let found = search.dfs(k - 1)?; // table values are not renamable here
            visits += search.visits;
            if found {
                let s = assemble(g, k, &search.moves, Some(&chi));
                debug_assert!(validate_strategy(g, &b, &s)?);
                return Ok(Some(s));
            }
        }
        return Ok(None);
    }
    let mut search = Search {
        g,
        b: &b,
        k,
        chromatic_updates: None,
        budget: opts.budget,
        visits: 0,
        moves: BTreeMap::new(),
        updates: BTreeMap::new(),
    };
    if search.dfs(0)? {
        let mut s = assemble(g, k, &search.moves, None);
        for (&key, &v) in &search.updates {
            s.updates.insert(key, v);
        }
        // Eve's chosen edges carry their updates too
        for (&(_, m), &(e_idx, m2)) in &search.moves {
            s.updates.insert((e_idx, m), m2);
        }
        debug_assert!(validate_strategy(g, &b, &s)?);
        return Ok(Some(s));
    }
    Ok(None)
}

fn assemble(
    g: &GameArena,
    k: u32,
    moves: &BTreeMap<(usize, u32), (usize, u32)>,
    chi: Option<&[Vec<u32>]>,
) -> FiniteMemoryStrategy {
    let mut s = FiniteMemoryStrategy { k, moves: BTreeMap::new(), updates: BTreeMap::new() };
    for (&(v, m), &(e_idx, _)) in moves {
        s.moves.insert((v, m), e_idx);
    }
    // total move map: default to the first edge for unreached pairs
    for v in 0..g.vertices.len() {
        if g.owner[v] == Owner::Eve {
            let first = g.out_edges(v).map(|(i, _)| i).next().unwrap();
            for m in 0..k {
                s.moves.entry((v, m)).or_insert(first);
            }
        }
    }
    if let Some(chi) = chi {
        for (e_idx, e) in g.edges.iter().enumerate() {
            for m in 0..k {
                let m2 = match e.letter {
                    Letter::Sym(sym) => chi[m as usize][sym],
                    Letter::Eps => m,
                };
                s.updates.insert((e_idx, m), m2);
            }
        }
    }
    s
}

/// Options for the lower-bound witness search.
#[derive(Debug, Clone)]
pub struct LowerBoundOptions {
    pub seed: u64,
    pub random_trials: usize,
    pub budget_per_game: u64,
    pub max_vertices: usize,
}

impl Default for LowerBoundOptions {
    fn default() -> Self {
        LowerBoundOptions { seed: 1, random_trials: 150, budget_per_game: 2_000_000, max_vertices: 6 }
    }
}

/// Searches structured families (letter-menu hub games, first-letter games,
/// choice arenas of sampled graphs satisfying the objective) and random
/// arenas for a game that Eve wins but not with `k` memory states. `None`
/// is inconclusive (budget or exhaustion).
pub fn memory_lower_bound(
    b: &Automaton,
    k: u32,
    opts: &LowerBoundOptions,
) -> Result<Option<GameArena>> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
    for g in structured_candidates(b) {
        if let Some(w) = check_witness(&g, b, k, opts.budget_per_game)? {
            return Ok(Some(w));
        }
    }
    // choice arenas of graphs satisfying the objective: Adam hides the
    // current vertex behind subsets, which is where ε-frozen memory hurts
    for _ in 0..opts.random_trials.min(40) {
        let Ok(tree) = crate::universal::sample_satisfying_tree(b, 4, &mut rng) else {
            break;
        };
        let g = tree.as_graph(b);
        let Ok(arena) = super::structuration::choice_arena(&g) else {
            continue;
        };
        if let Some(w) = check_witness(&arena, b, k, opts.budget_per_game)? {
            return Ok(Some(w));
        }
    }
    for _ in 0..opts.random_trials {
        let g = random_arena(b, opts.max_vertices, &mut rng);
        if g.validate().is_err() {
            continue;
        }
        if let Some(w) = check_witness(&g, b, k, opts.budget_per_game)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn check_witness(g: &GameArena, b: &Automaton, k: u32, budget: u64) -> Result<Option<GameArena>> {
    let sol = solve_game(g, b)?;
    if !sol.eve_wins_initial {
        return Ok(None);
    }
    match wins_with_memory(g, b, k, &MemorySearchOptions { chromatic: false, budget }) {
        Ok(None) => Ok(Some(g.clone())),
        Ok(Some(_)) => Ok(None),
        Err(Error::BudgetExceeded(_)) => Ok(None), // inconclusive on this game
        Err(e) => Err(e),
    }
}

/// Structured candidates: letter-menu hub games (Adam hides behind ε and
/// offers a menu of letters; Eve picks one) and small letter-turn games.
pub fn structured_candidates(b: &Automaton) -> Vec<GameArena> {
    let sigma = b.alphabet.len();
    let mut out = Vec::new();
    for menu_size in 2..=sigma {
        let menus: Vec<Vec<usize>> = subsets_of_size(sigma, menu_size);
        out.push(menu_game(b, &menus));
    }
    if sigma >= 3 {
        let mut menus = subsets_of_size(sigma, 2);
        menus.push((0..sigma).collect());
        out.push(menu_game(b, &menus));
    }
    // first-letter game: Adam plays one letter, Eve plays the rest
    {
        let alphabet = b.alphabet.clone();
        let mut edges = Vec::new();
        for s in 0..sigma {
            edges.push(GEdge { src: 0, letter: Letter::Sym(s), dst: 1 });
            edges.push(GEdge { src: 1, letter: Letter::Sym(s), dst: 1 });
        }
        out.push(GameArena {
            alphabet,
            vertices: vec!["h".into(), "v".into()],
            owner: vec![Owner::Adam, Owner::Eve],
            edges,
            initial: 0,
        });
    }
    // two-round game: Adam opens, Eve answers, Adam continues
    {
        let alphabet = b.alphabet.clone();
        let mut edges = Vec::new();
        for s in 0..sigma {
            edges.push(GEdge { src: 0, letter: Letter::Sym(s), dst: 1 });
            edges.push(GEdge { src: 1, letter: Letter::Sym(s), dst: 2 });
            edges.push(GEdge { src: 2, letter: Letter::Sym(s), dst: 2 });
        }
        out.push(GameArena {
            alphabet,
            vertices: vec!["h".into(), "v".into(), "t".into()],
            owner: vec![Owner::Adam, Owner::Eve, Owner::Adam],
            edges,
            initial: 0,
        });
    }
    out
}

fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, size: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in from..n {
            cur.push(i);
            rec(n, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Adam hub with ε-moves to menu vertices; Eve plays a letter from the menu
/// back to the hub.
pub fn menu_game(b: &Automaton, menus: &[Vec<usize>]) -> GameArena {
    let mut vertices = vec!["hub".to_string()];
    let mut owner = vec![Owner::Adam];
    let mut edges = Vec::new();
    for (i, menu) in menus.iter().enumerate() {
        let v = vertices.len();
        vertices.push(format!("menu{i}"));
        owner.push(Owner::Eve);
        edges.push(GEdge { src: 0, letter: Letter::Eps, dst: v });
        for &s in menu {
            edges.push(GEdge { src: v, letter: Letter::Sym(s), dst: 0 });
        }
    }
    GameArena { alphabet: b.alphabet.clone(), vertices, owner, edges, initial: 0 }
}

fn random_arena(b: &Automaton, max_vertices: usize, rng: &mut impl Rng) -> GameArena {
    let nv = rng.gen_range(2..=max_vertices.max(2));
    let sigma = b.alphabet.len();
    let mut vertices = Vec::new();
    let mut owner = Vec::new();
    for i in 0..nv {
        vertices.push(format!("v{i}"));
        owner.push(if rng.gen_bool(0.5) { Owner::Eve } else { Owner::Adam });
    }
    let mut edges = Vec::new();
    for v in 0..nv {
        let deg = rng.gen_range(1..=3);
        for _ in 0..deg {
            let letter = if rng.gen_bool(0.85) {
                Letter::Sym(rng.gen_range(0..sigma))
            } else {
                Letter::Eps
            };
            edges.push(GEdge { src: v, letter, dst: rng.gen_range(0..nv) });
        }
    }
    GameArena { alphabet: b.alphabet.clone(), vertices, owner, edges, initial: 0 }
}

#[cfg(test)]
mod tests {
    use super::super::arena_for_tests;
    use super::*;
    use crate::zoo;

    #[test]
    fn positional_game_found_at_one() {
        let g = arena_for_tests(&["a", "b"], &[("v", Owner::Eve)], &[(0, "a", 0), (0, "b", 0)], 0);
        let s = wins_with_memory(&g, &zoo::inf_a(), 1, &MemorySearchOptions::default())
            .unwrap()
            .expect("positional strategy");
        assert!(validate_strategy(&g, &zoo::inf_a(), &s).unwrap());
    }

    #[test]
    fn first_letter_game_needs_two() {
        // Adam opens with a or b; Eve must repeat it, so one memory state
        // cannot win but two can
        let g = arena_for_tests(
            &["a", "b"],
            &[("h", Owner::Adam), ("v", Owner::Eve)],
            &[(0, "a", 1), (0, "b", 1), (1, "a", 1), (1, "b", 1)],
            0,
        );
        let b = zoo::aabb_then_any();
        assert!(solve_game(&g, &b).unwrap().eve_wins_initial);
        assert!(wins_with_memory(&g, &b, 1, &MemorySearchOptions::default()).unwrap().is_none());
        let s = wins_with_memory(&g, &b, 2, &MemorySearchOptions::default())
            .unwrap()
            .expect("two memory states suffice");
        assert!(validate_strategy(&g, &b, &s).unwrap());
    }

    #[test]
    fn chromatic_mode_finds_table_strategies() {
        let g = arena_for_tests(
            &["a", "b"],
            &[("h", Owner::Adam), ("v", Owner::Eve)],
            &[(0, "a", 1), (0, "b", 1), (1, "a", 1), (1, "b", 1)],
            0,
        );
        let b = zoo::aabb_then_any();
        let s = wins_with_memory(
            &g,
            &b,
            2,
            &MemorySearchOptions { chromatic: true, budget: 1_000_000 },
        )
        .unwrap()
        .expect("the letter itself is a chromatic memory");
        assert!(validate_strategy(&g, &b, &s).unwrap());
    }

    #[test]
    fn monotone_in_memory() {
        let g = arena_for_tests(
            &["a", "b"],
            &[("h", Owner::Adam), ("v", Owner::Eve)],
            &[(0, "a", 1), (0, "b", 1), (1, "a", 1), (1, "b", 1)],
            0,
        );
        let b = zoo::aabb_then_any();
        for k in 2..=3 {
            assert!(wins_with_memory(&g, &b, k, &MemorySearchOptions::default())
                .unwrap()
                .is_some());
        }
    }

    #[test]
    fn lower_bound_witness_for_first_letter_objective() {
        // a witness that one memory state is not enough exists within the
        // structured family, and it is small
        let b = zoo::aabb_then_any();
        let w = memory_lower_bound(
            &b,
            1,
            &LowerBoundOptions { random_trials: 0, ..Default::default() },
        )
        .unwrap()
        .expect("structured witness");
        assert!(w.vertices.len() <= 4);
        // for the full language no witness exists at any k
        let full = zoo::sigma_omega(&["a", "b"]);
        assert!(memory_lower_bound(
            &full,
            1,
            &LowerBoundOptions { random_trials: 40, ..Default::default() }
        )
        .unwrap()
        .is_none());
    }

    #[test]
    fn budget_is_reported() {
        let g = arena_for_tests(
            &["a", "b"],
            &[("h", Owner::Adam), ("v", Owner::Eve)],
            &[(0, "a", 1), (0, "b", 1), (1, "a", 1), (1, "b", 1)],
            0,
        );
        let b = zoo::aabb_then_any();
        let r = wins_with_memory(&g, &b, 3, &MemorySearchOptions { chromatic: false, budget: 2 });
        assert!(matches!(r, Err(Error::BudgetExceeded(_))));
    }
}
