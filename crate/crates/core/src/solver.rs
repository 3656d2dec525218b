//! Memory computation for deterministic parity automata.
//!
//! A memory certificate for `k` consists of a deterministic k-blowup of the
//! input automaton (its transitions re-routed through memory classes) plus a
//! signature assignment whose canonical completion is k-wise ε-complete and
//! keeps the language. A passing certificate bounds the memory of the
//! language by `k`; lower bounds come from the game oracles.

use std::collections::{BTreeMap, BTreeSet};

use crate::automaton::tuple_name;
use crate::completeness::is_k_wise_eps_complete;
use crate::language::{conjunctive_empty, included, VEdge, VectorGraph};
use crate::universal::SignatureTuple;
use crate::{
    Automaton, Error, Letter, MemoryPartition, Result, Transition, UltimatelyPeriodicWord,
};

/// How the blowup routes each transition through the memory classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Routing {
    /// `table[m][sym] = m'`; ε is implicitly the identity.
    Chromatic(Vec<Vec<u32>>),
    /// `choice[t * k + m] = m'` for the t-th transition of the base automaton.
    Free(Vec<u32>),
}

impl Routing {
    fn target(&self, t_idx: usize, letter: Letter, m: u32, k: u32) -> u32 {
        match self {
            Routing::Chromatic(table) => match letter {
                Letter::Sym(s) => table[m as usize][s],
                Letter::Eps => m,
            },
            Routing::Free(choice) => choice[t_idx * k as usize + m as usize],
        }
    }
}

/// A certificate that the language of the base automaton has memory ≤ k.
#[derive(Debug, Clone)]
pub struct MemoryCertificate {
    pub k: u32,
    pub routing: Routing,
    /// One signature per blowup state `(q, m)`, indexed `m * n + q`.
    pub signatures: Vec<SignatureTuple>,
}

/// Builds the deterministic k-blowup of `b` under `routing`: states `(q,m)`
/// (memory-major), every transition lifted into each class with its target
/// class chosen by the routing. Returns the blowup, the state projection and
/// the induced partition.
pub fn build_blowup(
    b: &Automaton,
    k: u32,
    routing: &Routing,
) -> Result<(Automaton, Vec<(usize, u32)>, MemoryPartition)> {
    if !b.is_deterministic() {
        return Err(Error::Invalid("blowups are built over deterministic automata".into()));
    }
    let n = b.n_states();
    let mut states = Vec::with_capacity(n * k as usize);
    let mut proj = Vec::with_capacity(n * k as usize);
    for m in 0..k {
        for (q, name) in b.states.iter().enumerate() {
            states.push(tuple_name(&[name, &m.to_string()]));
            proj.push((q, m));
        }
    }
    let id = |q: usize, m: u32| m as usize * n + q;
    let mut transitions = Vec::new();
    for (t_idx, t) in b.transitions.iter().enumerate() {
        for m in 0..k {
            let m2 = routing.target(t_idx, t.letter, m, k);
            if m2 >= k {
                return Err(Error::Invalid("routing target out of range".into()));
            }
            transitions.push(Transition {
                src: id(t.src, m),
                letter: t.letter,
                priority: t.priority,
                dst: id(t.dst, m2),
            });
        }
    }
    let blowup = Automaton::new(b.alphabet.clone(), b.index, states, id(b.initial, 0), transitions)?;
    let part: Vec<u32> = proj.iter().map(|&(_, m)| m).collect();
    let chromatic = match routing {
        Routing::Chromatic(table) => {
            let mut rows = table.clone();
            for (m, row) in rows.iter_mut().enumerate() {
                row.push(m as u32); // ε column
            }
            Some(rows)
        }
        Routing::Free(_) => None,
    };
    Ok((blowup, proj, MemoryPartition { k, part, chromatic }))
}

/// Adds the canonical ε-edges induced by a signature assignment: within each
/// part, `q --ε:y--> q'` for odd y iff `sig(q)_{≤y} ≥ sig(q')_{≤y}` and for
/// even x iff `sig(q)_{≤x+1} > sig(q')_{≤x+1}`. The result is k-wise
/// ε-complete and has no even-minimum ε-cycle, for every assignment: even
/// edges strictly decrease a prefix that all coarser edges keep non-increasing.
pub fn canonical_completion(
    a: &Automaton,
    p: &MemoryPartition,
    sig: &[SignatureTuple],
) -> Result<Automaton> {
    if sig.len() != a.n_states() {
        return Err(Error::Invalid("signature assignment must cover all states".into()));
    }
    let arity = (a.index / 2) as usize;
    if let Some(s) = sig.iter().find(|s| s.arity() != arity) {
        return Err(Error::ArityMismatch { expected: arity, got: s.arity() });
    }
    if p.part.len() != a.n_states() {
        return Err(Error::Invalid("partition must cover all states".into()));
    }
    let mut out = a.clone();
    let mut extra: BTreeSet<Transition> = BTreeSet::new();
    for q in 0..a.n_states() {
        for q2 in 0..a.n_states() {
            if p.part[q] != p.part[q2] {
                continue;
            }
            for y in 0..a.index {
                let add = if y % 2 == 1 {
                    prefix_through(&sig[q], y) >= prefix_through(&sig[q2], y)
                } else {
                    prefix_through(&sig[q], y + 1) > prefix_through(&sig[q2], y + 1)
                };
                if add {
                    extra.insert(Transition { src: q, letter: Letter::Eps, priority: y, dst: q2 });
                }
            }
        }
    }
    for t in extra {
        if !out.transitions.contains(&t) {
            out.transitions.push(t);
        }
    }
    Ok(out)
}

fn prefix_through(s: &SignatureTuple, y: u32) -> &[u32] {
    debug_assert!(y % 2 == 1);
    &s.0[..((y as usize + 1) / 2).min(s.0.len())]
}

/// Everything `check_certificate` looked at.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub blowup_ok: bool,
    pub base_included: bool,
    pub completion_included: bool,
    pub complete: bool,
    pub no_eps_cycle: bool,
    pub counterexample: Option<UltimatelyPeriodicWord>,
}

impl CertificateReport {
    pub fn holds(&self) -> bool {
        self.blowup_ok
            && self.base_included
            && self.completion_included
            && self.complete
            && self.no_eps_cycle
    }
}

/// Rebuilds the blowup and completion described by `cert` and checks all the
/// facts a certificate stands for: the blowup conditions, `L(b) ⊆ L(blowup)`,
/// completeness and acyclicity of the completion, and `L(completion) ⊆ L(b)`.
/// A passing report certifies that the memory of `L(b)` is at most `cert.k`.
pub fn check_certificate(b: &Automaton, cert: &MemoryCertificate) -> Result<CertificateReport> {
    let (blowup, proj, partition) = build_blowup(b, cert.k, &cert.routing)?;
    let blowup_report = crate::automaton::is_blowup(&blowup, &proj, b, cert.k)?;
    let base_included = included(b, &blowup)?;
    let completion = canonical_completion(&blowup, &partition, &cert.signatures)?;
    let completeness = is_k_wise_eps_complete(&completion, &partition)?;
    let no_eps_cycle = completion.check_no_eps_omega();
    let inclusion = if no_eps_cycle {
        included(&completion, b)?
    } else {
        crate::language::InclusionReport { holds: false, counterexample: None }
    };
    Ok(CertificateReport {
        blowup_ok: blowup_report.holds(),
        base_included: base_included.holds,
        completion_included: inclusion.holds,
        complete: completeness.holds,
        no_eps_cycle,
        counterexample: inclusion.counterexample,
    })
}

/// Extends a certificate to `k+1` memory states with an unused class; the
/// padded certificate still passes.
pub fn pad_certificate(b: &Automaton, cert: &MemoryCertificate) -> MemoryCertificate {
    let k = cert.k;
    let n = b.n_states();
    let routing = match &cert.routing {
        Routing::Chromatic(table) => {
            let mut t = table.clone();
            t.push(vec![0; b.alphabet.len()]); // the fresh class defers to class 0
            Routing::Chromatic(t)
        }
        Routing::Free(choice) => {
            let mut c = Vec::with_capacity(b.transitions.len() * (k as usize + 1));
            for t in 0..b.transitions.len() {
                for m in 0..=k {
                    if m < k {
                        c.push(choice[t * k as usize + m as usize]);
                    } else {
                        c.push(0);
                    }
                }
            }
            Routing::Free(c)
        }
    };
    let mut signatures = cert.signatures.clone();
    signatures.extend((0..n).map(|_| SignatureTuple::zero((b.index / 2) as usize)));
    MemoryCertificate { k: k + 1, routing, signatures }
}

/// Options for [`compute_memory`].
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Search chromatic update tables only (chromatic memory).
    pub chromatic: bool,
    /// Largest k to try; 0 means the number of states of the input.
    pub k_max: u32,
    /// Maximum number of full inclusion checks across the whole search.
    pub budget: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { chromatic: false, k_max: 0, budget: 200_000 }
    }
}

/// Statistics of a solver run, for reporting.
#[derive(Debug, Clone, Default)]
pub struct SolverStats {
    pub candidates_checked: u64,
    pub pruned_by_cache: u64,
    pub cached_words: usize,
}

/// Smallest k ≤ k_max admitting a certificate, found by enumerating routings
/// (chromatic tables first, then feedback routings keyed on endpoint states,
/// then free ones) and, per routing, the signature assignments consistent
/// with a precomputed jump-safety relation. Failed inclusions feed a word
/// cache that prunes later candidates cheaply.
pub fn compute_memory(b: &Automaton, opts: &SolverOptions) -> Result<(u32, MemoryCertificate)> {
    compute_memory_with_stats(b, opts).map(|(k, c, _)| (k, c))
}

pub fn compute_memory_with_stats(
    b: &Automaton,
    opts: &SolverOptions,
) -> Result<(u32, MemoryCertificate, SolverStats)> {
    if !b.is_deterministic() {
        return Err(Error::Invalid("memory computation needs a deterministic automaton".into()));
    }
    let k_max = if opts.k_max == 0 { b.n_states() as u32 } else { opts.k_max };
    let mut stats = SolverStats::default();
    let mut cache: Vec<UltimatelyPeriodicWord> = Vec::new();
    for k in 1..=k_max {
        if let Some(cert) = search_k(b, k, opts, &mut cache, &mut stats)? {
            let report = check_certificate(b, &cert)?;
            debug_assert!(report.holds(), "found certificate must re-validate");
            return Ok((k, cert, stats));
        }
    }
    Err(Error::ExceedsKMax(k_max))
}

fn search_k(
    b: &Automaton,
    k: u32,
    opts: &SolverOptions,
    cache: &mut Vec<UltimatelyPeriodicWord>,
    stats: &mut SolverStats,
) -> Result<Option<MemoryCertificate>> {
    let n = b.n_states();
    if n > 7 {
        return Err(Error::SizeGuard(format!("{n} states is beyond the certificate search")));
    }
    let orders = weak_orders(n);
    // pairs whose copies can never share a part with both sides reachable,
    // whatever the routing: a cheap kill applied before any heavy analysis
    let base_mutual = base_mutual_unsafe(b)?;
    let mut stages = RoutingStages::new(b, k, opts.chromatic);
    while let Some(routing) = stages.next_routing() {
        if !routing_survives_coexistence(b, k, &routing, &base_mutual) {
            continue;
        }
        let (blowup, proj, partition) = build_blowup(b, k, &routing)?;
        let reachable = blowup.reachable_states();
        let unsafe_pairs = jump_unsafety(b, &blowup, &proj, &reachable)?;
        // a signature can only avoid an unsafe jump u -> v by putting u
        // strictly below v on the first coordinate
        let forced: Vec<(usize, usize)> = unsafe_pairs.iter().copied().collect();
        if has_forced_cycle(n * k as usize, &forced) {
            continue;
        }
        let arity = (b.index / 2) as usize;
        // enumerate level-1 orders per part consistent with the constraints,
        // and all orders on the remaining levels
        let mut level1_by_part: Vec<Vec<&Vec<u32>>> = Vec::new();
        for m in 0..k {
            let base = m as usize * n;
            let ok: Vec<&Vec<u32>> = orders
                .iter()
                .filter(|ord| {
                    forced
                        .iter()
                        .filter(|&&(u, _)| u / n == m as usize)
                        .all(|&(u, v)| ord[u - base] < ord[v - base])
                })
                .collect();
            if ok.is_empty() {
                break;
            }
            level1_by_part.push(ok);
        }
        if level1_by_part.len() != k as usize {
            continue;
        }
        // odometer over: level-1 choice per part, then free choices for the
        // other levels per part
        let mut idx = vec![0usize; k as usize * arity];
        let dims: Vec<usize> = (0..k as usize * arity)
            .map(|i| {
                let level = i % arity;
                let part = i / arity;
                if level == 0 {
                    level1_by_part[part].len()
                } else {
                    orders.len()
                }
            })
            .collect();
        if dims.iter().any(|&d| d == 0) {
            continue;
        }
        loop {
            // assemble the signature assignment
            let mut signatures = vec![SignatureTuple::zero(arity); n * k as usize];
            for part in 0..k as usize {
                for level in 0..arity {
                    let choice = idx[part * arity + level];
                    let ord: &Vec<u32> = if level == 0 {
                        level1_by_part[part][choice]
                    } else {
                        &orders[choice]
                    };
                    for q in 0..n {
                        signatures[part * n + q].0[level] = ord[q];
                    }
                }
            }
            let candidate = MemoryCertificate { k, routing: routing.clone(), signatures };
            match try_candidate(b, &blowup, &partition, &candidate, cache, opts, stats)? {
                Verdict::Pass => return Ok(Some(candidate)),
                Verdict::Fail => {}
            }
            // advance
            let mut i = 0;
            loop {
                if i == idx.len() {
                    break;
                }
                idx[i] += 1;
                if idx[i] < dims[i] {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == idx.len() {
                break;
            }
        }
    }
    Ok(None)
}

enum Verdict {
    Pass,
    Fail,
}

fn try_candidate(
    b: &Automaton,
    blowup: &Automaton,
    partition: &MemoryPartition,
    candidate: &MemoryCertificate,
    cache: &mut Vec<UltimatelyPeriodicWord>,
    opts: &SolverOptions,
    stats: &mut SolverStats,
) -> Result<Verdict> {
    let completion = canonical_completion(blowup, partition, &candidate.signatures)?;
    debug_assert!(completion.check_no_eps_omega());
    let eliminated = completion.eps_eliminate()?;
    for i in 0..cache.len() {
        if eliminated.accepts(&cache[i])? {
            stats.pruned_by_cache += 1;
            // replay a sample of pruned candidates: a cached word is outside
            // L(b), so accepting it must fail the inclusion
            if cfg!(debug_assertions) && stats.pruned_by_cache % 1024 == 1 {
                debug_assert!(
                    !included(&completion, b)?.holds,
                    "cache pruned a passing candidate ({i})"
                );
            }
            // keep killer words near the front
            cache[..=i].rotate_right(1);
            return Ok(Verdict::Fail);
        }
    }
    if stats.candidates_checked >= opts.budget {
        return Err(Error::BudgetExceeded(stats.candidates_checked));
    }
    stats.candidates_checked += 1;
    let inclusion = included(&eliminated, b)?;
    if inclusion.holds {
        return Ok(Verdict::Pass);
    }
    if let Some(w) = inclusion.counterexample {
        debug_assert!(!b.accepts(&w)?);
        cache.push(w);
        stats.cached_words = cache.len();
    }
    Ok(Verdict::Fail)
}

/// All dense vectors over `{0..n-1}`: the weak orders of n states with
/// monotone value labels. Dense monotone relabelling preserves every
/// pairwise comparison, so enumerating these loses no completion.
pub fn weak_orders(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut v = vec![0u32; n];
    loop {
        let max = *v.iter().max().unwrap();
        let dense = (0..=max).all(|x| v.contains(&x));
        if dense {
            out.push(v.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            v[i] += 1;
            if v[i] < n as u32 {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// Staged lazy enumeration of routings: chromatic tables, then feedback on
/// the destination state, then on the source state, then free routings.
/// Vectors are canonical in first-use order of the non-initial memory states.
struct RoutingStages<'a> {
    b: &'a Automaton,
    k: u32,
    chromatic_only: bool,
    stage: usize,
    odo: Odometer,
    seen_small: BTreeSet<Vec<u32>>,
}

impl<'a> RoutingStages<'a> {
    fn new(b: &'a Automaton, k: u32, chromatic_only: bool) -> Self {
        let odo = Odometer::new(k, k as usize * b.alphabet.len());
        RoutingStages { b, k, chromatic_only, stage: 0, odo, seen_small: BTreeSet::new() }
    }

    fn next_routing(&mut self) -> Option<Routing> {
        loop {
            match self.odo.next_canonical() {
                Some(flat) => match self.stage {
                    0 => {
                        let sigma = self.b.alphabet.len();
                        let table: Vec<Vec<u32>> =
                            flat.chunks(sigma).map(|row| row.to_vec()).collect();
                        let expanded = self.expand_chromatic(&table);
                        self.seen_small.insert(expanded);
                        return Some(Routing::Chromatic(table));
                    }
                    1 | 2 => {
                        let n = self.b.n_states();
                        let by_dst = self.stage == 1;
                        let mut choice = Vec::with_capacity(self.b.transitions.len() * self.k as usize);
                        for t in &self.b.transitions {
                            let key = if by_dst { t.dst } else { t.src };
                            for m in 0..self.k {
                                choice.push(flat[m as usize * n + key]);
                            }
                        }
                        if self.seen_small.insert(choice.clone()) {
                            return Some(Routing::Free(choice));
                        }
                    }
                    _ => {
                        return Some(Routing::Free(flat));
                    }
                },
                None => {
                    self.stage += 1;
                    if self.chromatic_only && self.stage > 0 {
                        return None;
                    }
                    let nt = self.b.transitions.len();
                    let n = self.b.n_states();
                    match self.stage {
                        1 | 2 => self.odo = Odometer::new(self.k, self.k as usize * n),
                        3 => {
                            let dims = nt * self.k as usize;
                            // the free stage is a last resort; skip it when
                            // the space is out of desk range
                            if (self.k as f64).powi(dims as i32) > 4e6 {
                                return None;
                            }
                            self.odo = Odometer::new(self.k, dims);
                        }
                        _ => return None,
                    }
                }
            }
        }
    }

    fn expand_chromatic(&self, table: &[Vec<u32>]) -> Vec<u32> {
        self.b
            .transitions
            .iter()
            .flat_map(|t| {
                (0..self.k).map(move |m| match t.letter {
                    Letter::Sym(s) => table[m as usize][s],
                    Letter::Eps => m,
                })
            })
            .collect()
    }
}

/// Lazy odometer over `{0..k-1}^len` filtered to first-use-canonical vectors.
pub(crate) struct Odometer {
    k: u32,
    len: usize,
    cur: Option<Vec<u32>>,
}

pub(crate) fn table_odometer(k: u32, len: usize) -> Odometer {
    Odometer::new(k, len)
}

impl Odometer {
    fn new(k: u32, len: usize) -> Self {
        Odometer { k, len, cur: None }
    }

    pub(crate) fn next_canonical(&mut self) -> Option<Vec<u32>> {
        loop {
            match &mut self.cur {
                None => {
                    self.cur = Some(vec![0; self.len]);
                }
                Some(v) => {
                    let mut i = 0;
                    loop {
                        if i == self.len {
                            return None;
                        }
                        v[i] += 1;
                        if v[i] < self.k {
                            break;
                        }
                        v[i] = 0;
                        i += 1;
                    }
                }
            }
            let v = self.cur.as_ref().unwrap();
            // canonical: value m+1 may appear only after m has (0 pre-used)
            let mut used = 1u32;
            let mut ok = true;
            for &x in v {
                if x > used {
                    ok = false;
                    break;
                }
                used = used.max(x + 1);
            }
            if ok {
                return Some(v.clone());
            }
        }
    }
}

/// Unordered base-state pairs `{q, q'}` such that a single ε-jump is unsafe
/// in both directions with memory-blind prefixes. Copies of such a pair can
/// never both be Σ-reachable within one part.
fn base_mutual_unsafe(b: &Automaton) -> Result<Vec<(usize, usize)>> {
    let n = b.n_states();
    let mut out = Vec::new();
    for q in 0..n {
        for q2 in q + 1..n {
            if jump_is_unsafe(b, b, q, q2)? && jump_is_unsafe(b, b, q2, q)? {
                out.push((q, q2));
            }
        }
    }
    Ok(out)
}

/// Cheap per-routing filter: BFS the blowup's reachable states without
/// constructing it and reject routings that put both sides of a base
/// mutually-unsafe pair into the same part.
fn routing_survives_coexistence(
    b: &Automaton,
    k: u32,
    routing: &Routing,
    base_mutual: &[(usize, usize)],
) -> bool {
    if base_mutual.is_empty() {
        return true;
    }
    let n = b.n_states();
    let mut seen = vec![false; n * k as usize];
    let mut queue = std::collections::VecDeque::new();
    let id = |q: usize, m: u32| m as usize * n + q;
    seen[id(b.initial, 0)] = true;
    queue.push_back((b.initial, 0u32));
    while let Some((q, m)) = queue.pop_front() {
        for (t_idx, t) in b.transitions.iter().enumerate() {
            if t.src != q {
                continue;
            }
            let m2 = routing.target(t_idx, t.letter, m, k);
            if !seen[id(t.dst, m2)] {
                seen[id(t.dst, m2)] = true;
                queue.push_back((t.dst, m2));
            }
        }
    }
    for m in 0..k {
        for &(q, q2) in base_mutual {
            if seen[id(q, m)] && seen[id(q2, m)] {
                return false;
            }
        }
    }
    true
}

/// Directed pairs `(u, v)` of same-part blowup states (u reachable) for
/// which adding any ε-edge `u -> v` provably breaks the language: some word
/// reaching u continued by some word accepted from v's base state falls
/// outside `L(b)`. Decided exactly by lasso search on a two-phase product.
fn jump_unsafety(
    b: &Automaton,
    blowup: &Automaton,
    proj: &[(usize, u32)],
    reachable: &[bool],
) -> Result<BTreeSet<(usize, usize)>> {
    let nb = blowup.n_states();
    let mut out = BTreeSet::new();
    let mut memo: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    for u in 0..nb {
        if !reachable[u] {
            continue;
        }
        for v in 0..nb {
            if u == v || proj[u].1 != proj[v].1 {
                continue;
            }
            let key = (u, proj[v].0);
            let bad = match memo.get(&key) {
                Some(&known) => known,
                None => {
                    let bad = jump_is_unsafe(b, blowup, u, proj[v].0)?;
                    memo.insert(key, bad);
                    bad
                }
            };
            if bad {
                out.insert((u, v));
            }
        }
    }
    Ok(out)
}

/// Is there a word reaching blowup state `u` whose continuation by some word
/// accepted from base state `qv` leaves the language?
fn jump_is_unsafe(b: &Automaton, blowup: &Automaton, u: usize, qv: usize) -> Result<bool> {
    let n = b.n_states();
    let nb = blowup.n_states();
    // phase 1: blowup states; phase 2: (state simulated from qv, real state)
    let id2 = |s: usize, r: usize| nb + s * n + r;
    let mut edges = Vec::new();
    for t in &blowup.transitions {
        edges.push(VEdge { src: t.src, dst: t.dst, prios: vec![1, 1], symbol: None });
    }
    let qu = u % n; // states are memory-major: id = m*n + q
    edges.push(VEdge { src: u, dst: id2(qv, qu), prios: vec![1, 1], symbol: None });
    for s in 0..n {
        for r in 0..n {
            for a in 0..b.alphabet.len() {
                if let (Some((ys, s2)), Some((yr, r2))) =
                    (b.det_successor(s, a), b.det_successor(r, a))
                {
                    edges.push(VEdge {
                        src: id2(s, r),
                        dst: id2(s2, r2),
                        prios: vec![ys, yr + 1],
                        symbol: Some(a),
                    });
                }
            }
        }
    }
    let g = VectorGraph { n: nb + n * n, r: 2, edges, initial: blowup.initial };
    Ok(conjunctive_empty(&g)?.is_some())
}

fn has_forced_cycle(n: usize, forced: &[(usize, usize)]) -> bool {
    let adj = crate::graph::adjacency(n, forced.iter().copied());
    crate::graph::has_cycle(&adj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn canonical_completion_equal_signatures() {
        let (b, _) = zoo::trivial_blowup(&zoo::inf_a(), 1);
        let p = MemoryPartition::uniform(b.n_states());
        let sig = vec![SignatureTuple(vec![0]); b.n_states()];
        let c = canonical_completion(&b, &p, &sig).unwrap();
        // mutual odd edges everywhere, no even ε-edges at all
        for q in 0..b.n_states() {
            for q2 in 0..b.n_states() {
                assert!(c
                    .transitions
                    .iter()
                    .any(|t| t.letter.is_eps() && t.priority == 1 && t.src == q && t.dst == q2));
            }
        }
        assert!(!c.transitions.iter().any(|t| t.letter.is_eps() && t.priority % 2 == 0));
    }

    #[test]
    fn canonical_completion_ordered_pair() {
        // d=2, sig(q)=1, sig(q')=0: one-way ε:1 and ε:0, nothing backwards
        let alphabet = crate::Alphabet::new(["a"]).unwrap();
        let a = Automaton::new(
            alphabet,
            2,
            vec!["q".into(), "r".into()],
            0,
            vec![
                Transition { src: 0, letter: Letter::Sym(0), priority: 0, dst: 1 },
                Transition { src: 1, letter: Letter::Sym(0), priority: 0, dst: 0 },
            ],
        )
        .unwrap();
        let p = MemoryPartition::uniform(2);
        let sig = vec![SignatureTuple(vec![1]), SignatureTuple(vec![0])];
        let c = canonical_completion(&a, &p, &sig).unwrap();
        let has = |src: usize, prio: u32, dst: usize| {
            c.transitions
                .iter()
                .any(|t| t.letter.is_eps() && t.src == src && t.priority == prio && t.dst == dst)
        };
        assert!(has(0, 1, 1));
        assert!(!has(1, 1, 0));
        assert!(has(0, 0, 1));
        assert!(!has(1, 0, 0));
        let rep = is_k_wise_eps_complete(&c, &p).unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn canonical_completion_always_complete_and_acyclic() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        // random signatures over 4 states at index 4: the completion must be
        // complete and have no even ε-cycle for every draw
        let alphabet = crate::Alphabet::new(["a"]).unwrap();
        let states: Vec<String> = (0..4).map(|i| format!("q{i}")).collect();
        let transitions: Vec<Transition> = (0..4)
            .map(|q| Transition { src: q, letter: Letter::Sym(0), priority: 0, dst: (q + 1) % 4 })
            .collect();
        let a = Automaton::new(alphabet, 4, states, 0, transitions).unwrap();
        let p = MemoryPartition::uniform(4);
        for _ in 0..200 {
            let sig: Vec<SignatureTuple> = (0..4)
                .map(|_| SignatureTuple((0..2).map(|_| rng.gen_range(0..4)).collect()))
                .collect();
            let c = canonical_completion(&a, &p, &sig).unwrap();
            assert!(is_k_wise_eps_complete(&c, &p).unwrap().holds);
            assert!(c.check_no_eps_omega());
        }
    }

    #[test]
    fn breakpoints_match_first_difference() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let alphabet = crate::Alphabet::new(["a"]).unwrap();
        let states: Vec<String> = (0..3).map(|i| format!("q{i}")).collect();
        let transitions: Vec<Transition> = (0..3)
            .map(|q| Transition { src: q, letter: Letter::Sym(0), priority: 0, dst: (q + 1) % 3 })
            .collect();
        let a = Automaton::new(alphabet, 6, states, 0, transitions).unwrap();
        let p = MemoryPartition::uniform(3);
        for _ in 0..100 {
            let sig: Vec<SignatureTuple> = (0..3)
                .map(|_| SignatureTuple((0..3).map(|_| rng.gen_range(0..2)).collect()))
                .collect();
            let c = canonical_completion(&a, &p, &sig).unwrap();
            let table = crate::completeness::breakpoints(&c, &p).unwrap();
            assert!(table.violations.is_empty(), "{:?}", table.violations);
            for e in &table.entries {
                let expected = match sig[e.q].0.iter().zip(&sig[e.q2].0).position(|(a, b)| a != b) {
                    None => 6,
                    Some(pos) => 2 * pos as u32,
                };
                assert_eq!(e.breakpoint, expected);
            }
        }
    }

    #[test]
    fn certificate_for_full_language() {
        let b = zoo::sigma_omega(&["a", "b"]);
        let cert = MemoryCertificate {
            k: 1,
            routing: Routing::Chromatic(vec![vec![0, 0]]),
            signatures: vec![SignatureTuple(vec![0])],
        };
        assert!(check_certificate(&b, &cert).unwrap().holds());
    }

    #[test]
    fn compute_memory_positional_cases() {
        let (k, _) =
            compute_memory(&zoo::sigma_omega(&["a", "b"]), &SolverOptions::default()).unwrap();
        assert_eq!(k, 1);
        let (k, _) = compute_memory(&zoo::inf_a(), &SolverOptions::default()).unwrap();
        assert_eq!(k, 1);
        let (k, cert) = compute_memory(&zoo::aa_then_any(), &SolverOptions::default()).unwrap();
        assert_eq!(k, 1);
        assert!(check_certificate(&zoo::aa_then_any(), &cert).unwrap().holds());
    }

    #[test]
    fn exceeds_k_max_is_reported() {
        let b = zoo::aabb_then_any();
        let opts = SolverOptions { k_max: 1, ..SolverOptions::default() };
        assert!(matches!(compute_memory(&b, &opts), Err(Error::ExceedsKMax(1))));
    }

    #[test]
    fn padded_certificate_still_passes() {
        let b = zoo::inf_a();
        let (k, cert) = compute_memory(&b, &SolverOptions::default()).unwrap();
        assert_eq!(k, 1);
        let padded = pad_certificate(&b, &cert);
        assert_eq!(padded.k, 2);
        assert!(check_certificate(&b, &padded).unwrap().holds());
    }

    #[test]
    fn weak_order_counts() {
        assert_eq!(weak_orders(1).len(), 1);
        assert_eq!(weak_orders(2).len(), 3);
        assert_eq!(weak_orders(3).len(), 13);
        assert_eq!(weak_orders(4).len(), 75);
    }
}
