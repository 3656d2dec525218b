use std::collections::BTreeMap;

use crate::graph::{adjacency, scc};
use crate::{Alphabet, DGraph, Error, LabelledGraph, Letter, Result, UltimatelyPeriodicWord};

/// One transition `src --letter:priority--> dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transition {
    pub src: usize,
    pub letter: Letter,
    pub priority: u32,
    pub dst: usize,
}

/// A finite transition-based min-parity automaton over Σ ∪ {ε}.
///
/// Priorities live on transitions and range over `[0, index]` with `index`
/// even. A run is accepting iff the liminf of its priority word is even; runs
/// whose label ends in ε^ω never count. ε-transitions carry priorities like
/// any other transition.
#[derive(Debug, Clone)]
pub struct Automaton {
    pub alphabet: Alphabet,
    pub index: u32,
    pub states: Vec<String>,
    pub initial: usize,
    pub transitions: Vec<Transition>,
}

/// Canonical name for product states, kept parseable as a single token.
pub fn tuple_name(parts: &[&str]) -> String {
    format!("({})", parts.join(","))
}

impl Automaton {
    pub fn new(
        alphabet: Alphabet,
        index: u32,
        states: Vec<String>,
        initial: usize,
        transitions: Vec<Transition>,
    ) -> Result<Self> {
        if index % 2 != 0 {
            return Err(Error::Invalid(format!("index {index} must be even")));
        }
        if states.is_empty() {
            return Err(Error::Invalid("automaton needs at least one state".into()));
        }
        if initial >= states.len() {
            return Err(Error::Invalid("initial state out of range".into()));
        }
        {
            let mut seen = BTreeMap::new();
            for (i, s) in states.iter().enumerate() {
                if seen.insert(s.clone(), i).is_some() {
                    return Err(Error::Invalid(format!("duplicate state name `{s}`")));
                }
            }
        }
        let a = Automaton { alphabet, index, states, initial, transitions };
        for t in &a.transitions {
            if t.src >= a.states.len() || t.dst >= a.states.len() {
                return Err(Error::Invalid("transition endpoint out of range".into()));
            }
            if t.priority > a.index {
                return Err(Error::PriorityOutOfRange { priority: t.priority, index: a.index });
            }
            if let Letter::Sym(s) = t.letter {
                if s >= a.alphabet.len() {
                    return Err(Error::Invalid("letter out of range".into()));
                }
            }
        }
        if let Some(q) = (0..a.states.len()).find(|&q| !a.transitions.iter().any(|t| t.src == q)) {
            return Err(Error::DeadEnd(a.states[q].clone()));
        }
        Ok(a)
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn out(&self, q: usize) -> impl Iterator<Item = &Transition> {
        self.transitions.iter().filter(move |t| t.src == q)
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn has_eps(&self) -> bool {
        self.transitions.iter().any(|t| t.letter.is_eps())
    }

    /// Deterministic: ε-free and at most one transition per state and letter.
    pub fn is_deterministic(&self) -> bool {
        if self.has_eps() {
            return false;
        }
        let mut seen = std::collections::BTreeSet::new();
        self.transitions.iter().all(|t| seen.insert((t.src, t.letter)))
    }

    /// Complete: at least one transition per state and proper letter.
    pub fn is_complete(&self) -> bool {
        (0..self.n_states()).all(|q| {
            (0..self.alphabet.len())
                .all(|a| self.transitions.iter().any(|t| t.src == q && t.letter == Letter::Sym(a)))
        })
    }

    pub fn det_successor(&self, q: usize, a: usize) -> Option<(u32, usize)> {
        self.out(q).find(|t| t.letter == Letter::Sym(a)).map(|t| (t.priority, t.dst))
    }

    /// Runs the automaton deterministically over a finite symbol word.
    pub fn det_run(&self, from: usize, word: &[usize]) -> Option<usize> {
        let mut q = from;
        for &a in word {
            q = self.det_successor(q, a)?.1;
        }
        Some(q)
    }

    /// Adds an all-rejecting sink for the missing (state, letter) pairs.
    /// The language is unchanged.
    pub fn completed(&self) -> Automaton {
        if self.is_complete() {
            return self.clone();
        }
        let mut out = self.clone();
        let sink = out.states.len();
        out.states.push(fresh_name(&out.states, "sink"));
        for a in 0..out.alphabet.len() {
            out.transitions.push(Transition { src: sink, letter: Letter::Sym(a), priority: 1, dst: sink });
        }
        for q in 0..sink {
            for a in 0..out.alphabet.len() {
                if !out.transitions.iter().any(|t| t.src == q && t.letter == Letter::Sym(a)) {
                    out.transitions.push(Transition { src: q, letter: Letter::Sym(a), priority: 1, dst: sink });
                }
            }
        }
        out
    }

    /// Re-roots the automaton at `q`.
    pub fn rerooted(&self, q: usize) -> Automaton {
        let mut out = self.clone();
        out.initial = q;
        out
    }

    /// Returns a reachable ε-cycle with even minimum priority, if any.
    /// `None` means the no-accepting-ε^ω invariant holds.
    pub fn eps_omega_violation(&self) -> Option<Vec<usize>> {
        let reach = self.reachable_states();
        for x in (0..=self.index).step_by(2) {
            // ε-edges with priority ≥ x, restricted to reachable states
            let edges: Vec<(usize, u32, usize)> = self
                .transitions
                .iter()
                .filter(|t| t.letter.is_eps() && t.priority >= x && reach[t.src] && reach[t.dst])
                .map(|t| (t.src, t.priority, t.dst))
                .collect();
            let adj = adjacency(self.n_states(), edges.iter().map(|&(s, _, d)| (s, d)));
            let (_, comp) = scc(&adj);
            for &(s, p, d) in &edges {
                if p == x && comp[s] == comp[d] {
                    return Some(cycle_through(&adj, s, d));
                }
            }
        }
        None
    }

    /// True iff no reachable ε-only cycle has an even minimum priority.
    pub fn check_no_eps_omega(&self) -> bool {
        self.eps_omega_violation().is_none()
    }

    pub fn reachable_states(&self) -> Vec<bool> {
        let adj = adjacency(self.n_states(), self.transitions.iter().map(|t| (t.src, t.dst)));
        crate::graph::reachable(&adj, self.initial)
    }

    /// Removes ε-transitions while preserving the language. For each pair of
    /// states and each letter, the result keeps one transition per value that
    /// is the minimum priority along some ε*·a·ε* path; nondeterministic
    /// inclusion checks need the whole achievable-minimum set.
    ///
    /// States whose behaviour was ε-only receive a rejecting self-loop so the
    /// result has no dead end; this does not change the language.
    pub fn eps_eliminate(&self) -> Result<Automaton> {
        if let Some(cycle) = self.eps_omega_violation() {
            return Err(Error::EpsOmega(cycle.into_iter().map(|q| self.states[q].clone()).collect()));
        }
        if !self.has_eps() {
            return Ok(self.clone());
        }
        let n = self.n_states();
        let top = (self.index + 1) as usize; // marker for "no priority seen"
        let width = top + 1;
        // eps_min[q][q'] = bitset of achievable minima of nonempty ε-paths q -> q'
        let mut eps_min = vec![vec![0u64; n]; n];
        loop {
            let mut changed = false;
            for t in self.transitions.iter().filter(|t| t.letter.is_eps()) {
                for q2 in 0..n {
                    let mut add: u64 = 0;
                    if t.dst == q2 {
                        add |= 1 << (t.priority as usize);
                    }
                    let follow = eps_min[t.dst][q2];
                    for v in 0..width {
                        if follow >> v & 1 == 1 {
                            add |= 1 << v.min(t.priority as usize);
                        }
                    }
                    let new = eps_min[t.src][q2] | add;
                    if new != eps_min[t.src][q2] {
                        eps_min[t.src][q2] = new;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // with_empty[q][q'] includes the empty path marker when q == q'
        let path_set = |q: usize, q2: usize| -> u64 {
            let mut s = eps_min[q][q2];
            if q == q2 {
                s |= 1 << top;
            }
            s
        };
        let mut out_trans: std::collections::BTreeSet<(usize, usize, u32, usize)> = Default::default();
        for t in self.transitions.iter().filter(|t| !t.letter.is_eps()) {
            let a = match t.letter {
                Letter::Sym(a) => a,
                Letter::Eps => unreachable!(),
            };
            for q in 0..n {
                let pre = path_set(q, t.src);
                if pre == 0 {
                    continue;
                }
                for q2 in 0..n {
                    let post = path_set(t.dst, q2);
                    if post == 0 {
                        continue;
                    }
                    for v1 in 0..width {
                        if pre >> v1 & 1 == 0 {
                            continue;
                        }
                        for v2 in 0..width {
                            if post >> v2 & 1 == 0 {
                                continue;
                            }
                            let m = (v1 as u32).min(t.priority).min(v2 as u32);
                            out_trans.insert((q, a, m, q2));
                        }
                    }
                }
            }
        }
        let mut transitions: Vec<Transition> = out_trans
            .into_iter()
            .map(|(src, a, priority, dst)| Transition { src, letter: Letter::Sym(a), priority, dst })
            .collect();
        for q in 0..n {
            if !transitions.iter().any(|t| t.src == q) {
                for a in 0..self.alphabet.len().max(1) {
                    if a < self.alphabet.len() {
                        transitions.push(Transition { src: q, letter: Letter::Sym(a), priority: 1, dst: q });
                    }
                }
            }
        }
        Automaton::new(self.alphabet.clone(), self.index, self.states.clone(), self.initial, transitions)
    }

    /// Membership of `u·v^ω`, by lasso analysis on the product with the word
    /// loop. Nondeterminism is resolved existentially.
    pub fn accepts(&self, w: &UltimatelyPeriodicWord) -> Result<bool> {
        let (prefix, period) = w.resolve(&self.alphabet)?;
        let a = if self.has_eps() { self.eps_eliminate()? } else { self.clone() };
        let len = prefix.len() + period.len();
        let letter_at = |i: usize| -> usize {
            if i < prefix.len() {
                prefix[i]
            } else {
                period[i - prefix.len()]
            }
        };
        let next_pos = |i: usize| -> usize {
            if i + 1 < len {
                i + 1
            } else {
                prefix.len()
            }
        };
        let n = a.n_states();
        let id = |q: usize, i: usize| q * len + i;
        let mut edges: Vec<(usize, u32, usize)> = Vec::new();
        for i in 0..len {
            let sym = letter_at(i);
            for t in a.transitions.iter().filter(|t| t.letter == Letter::Sym(sym)) {
                edges.push((id(t.src, i), t.priority, id(t.dst, next_pos(i))));
            }
        }
        let adj = adjacency(n * len, edges.iter().map(|&(s, _, d)| (s, d)));
        let reach = crate::graph::reachable(&adj, id(a.initial, 0));
        for x in (0..=a.index).step_by(2) {
            let sub: Vec<(usize, u32, usize)> =
                edges.iter().filter(|&&(s, p, d)| p >= x && reach[s] && reach[d]).copied().collect();
            let sub_adj = adjacency(n * len, sub.iter().map(|&(s, _, d)| (s, d)));
            let (_, comp) = scc(&sub_adj);
            if sub.iter().any(|&(s, p, d)| p == x && comp[s] == comp[d]) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Complement of a deterministic automaton: shift every priority by one.
    /// Incomplete automata are completed with a rejecting sink first.
    pub fn complement_det(&self) -> Result<Automaton> {
        if !self.is_deterministic() {
            return Err(Error::Invalid("complement needs a deterministic automaton".into()));
        }
        let mut a = self.completed();
        let max_p = a.transitions.iter().map(|t| t.priority).max().unwrap_or(0);
        if max_p + 1 > a.index {
            a.index += 2;
        }
        for t in &mut a.transitions {
            t.priority += 1;
        }
        Ok(a)
    }

    /// Cascade product with a priority-labelled graph: `(q,s) --c--> (q',s')`
    /// iff some transition `q --c:y--> q'` exists with `s --y--> s'`.
    /// The result may contain dead-end vertices; use
    /// [`LabelledGraph::live_part`] where infinite behaviour matters.
    pub fn cascade(&self, s: &DGraph) -> Result<LabelledGraph> {
        if let Some(&(_, p, _)) = s.edges.iter().find(|&&(_, p, _)| p > self.index) {
            return Err(Error::PriorityOutOfRange { priority: p, index: self.index });
        }
        let ns = s.vertices.len();
        let mut vertices = Vec::with_capacity(self.n_states() * ns);
        for q in 0..self.n_states() {
            for v in 0..ns {
                vertices.push(tuple_name(&[&self.states[q], &s.vertices[v]]));
            }
        }
        let id = |q: usize, v: usize| q * ns + v;
        let mut edges = Vec::new();
        for t in &self.transitions {
            for &(sv, _, sw) in s.edges.iter().filter(|&&(_, y, _)| y == t.priority) {
                edges.push((id(t.src, sv), t.letter, id(t.dst, sw)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(LabelledGraph {
            alphabet: self.alphabet.clone(),
            vertices,
            edges,
            initial: s.initial.map(|s0| id(self.initial, s0)),
        })
    }
}

/// Assignment of each state of a k-automaton to a memory class, with an
/// optional chromatic update table `χ: k × (Σ∪{ε}) → k`, stored with the
/// ε column last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryPartition {
    pub k: u32,
    pub part: Vec<u32>,
    pub chromatic: Option<Vec<Vec<u32>>>,
}

impl MemoryPartition {
    pub fn uniform(n_states: usize) -> Self {
        MemoryPartition { k: 1, part: vec![0; n_states], chromatic: None }
    }

    /// Checks the partition against an automaton: parts in range and, when a
    /// chromatic table is present, that it fixes ε and drives every
    /// transition. ε-transitions crossing parts are legal in general (they
    /// arise from the 0-freeing transform); blowups forbid them separately.
    pub fn validate(&self, a: &Automaton) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Invalid("k must be positive".into()));
        }
        if self.part.len() != a.n_states() {
            return Err(Error::Invalid("partition must cover all states".into()));
        }
        if let Some(m) = self.part.iter().find(|&&m| m >= self.k) {
            return Err(Error::Invalid(format!("part id {m} out of range")));
        }
        if let Some(chi) = &self.chromatic {
            let cols = a.alphabet.len() + 1;
            if chi.len() != self.k as usize || chi.iter().any(|row| row.len() != cols) {
                return Err(Error::Invalid("chromatic table has wrong shape".into()));
            }
            for (m, row) in chi.iter().enumerate() {
                if row[cols - 1] != m as u32 {
                    return Err(Error::Invalid("chromatic update must fix ε".into()));
                }
                if row.iter().any(|&m2| m2 >= self.k) {
                    return Err(Error::Invalid("chromatic target out of range".into()));
                }
            }
            for t in &a.transitions {
                let col = match t.letter {
                    Letter::Sym(s) => s,
                    Letter::Eps => cols - 1,
                };
                if self.part[t.dst] != chi[self.part[t.src] as usize][col] {
                    return Err(Error::Invalid(format!(
                        "transition {} -> {} does not follow the chromatic update",
                        a.states[t.src], a.states[t.dst]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Outcome of the blowup check: either everything holds or the violations
/// are listed.
#[derive(Debug, Clone, Default)]
pub struct BlowupReport {
    pub missing: Vec<String>,
    pub eps_cross_part: Vec<String>,
    pub initial_mismatch: Option<String>,
}

impl BlowupReport {
    pub fn holds(&self) -> bool {
        self.missing.is_empty() && self.eps_cross_part.is_empty() && self.initial_mismatch.is_none()
    }
}

/// Checks that `b` is a k-blowup of `a` under the state projection `proj`
/// (mapping each `b` state to an `a` state and a memory class): every
/// transition of `a` lifts into every memory class, ε-transitions never leave
/// their class, and the initial state projects onto `a`'s initial state.
pub fn is_blowup(b: &Automaton, proj: &[(usize, u32)], a: &Automaton, k: u32) -> Result<BlowupReport> {
    if proj.len() != b.n_states() {
        return Err(Error::Invalid("projection must cover all states".into()));
    }
    let mut report = BlowupReport::default();
    for t in &a.transitions {
        for m in 0..k {
            let found = b.transitions.iter().any(|bt| {
                proj[bt.src] == (t.src, m)
                    && bt.letter == t.letter
                    && bt.priority == t.priority
                    && proj[bt.dst].0 == t.dst
                    && (!t.letter.is_eps() || proj[bt.dst].1 == m)
            });
            if !found {
                report.missing.push(format!(
                    "({}, {}, {}, m={})",
                    a.states[t.src],
                    a.alphabet.display(t.letter),
                    t.priority,
                    m
                ));
            }
        }
    }
    for bt in b.transitions.iter().filter(|t| t.letter.is_eps()) {
        if proj[bt.src].1 != proj[bt.dst].1 {
            report
                .eps_cross_part
                .push(format!("{} -> {}", b.states[bt.src], b.states[bt.dst]));
        }
    }
    if proj[b.initial].0 != a.initial {
        report.initial_mismatch = Some(b.states[b.initial].clone());
    }
    Ok(report)
}

/// Keeps one transition per (state, letter), searching prunings by
/// backtracking until one preserves the language of `reference`.
/// Returns `None` when the search exhausts every combination.
pub fn determinise_by_pruning(a: &Automaton, reference: &Automaton) -> Result<Option<Automaton>> {
    if a.has_eps() {
        return Err(Error::UnexpectedEpsilon);
    }
    let mut groups: BTreeMap<(usize, Letter), Vec<usize>> = BTreeMap::new();
    for (i, t) in a.transitions.iter().enumerate() {
        groups.entry((t.src, t.letter)).or_default().push(i);
    }
    let groups: Vec<Vec<usize>> = groups.into_values().collect();
    let combos: f64 = groups.iter().map(|g| g.len() as f64).product();
    if combos > 1e6 {
        return Err(Error::SizeGuard(format!("{combos:.0} prunings")));
    }
    let mut choice = vec![0usize; groups.len()];
    loop {
        let kept: Vec<Transition> = groups
            .iter()
            .zip(&choice)
            .map(|(g, &c)| a.transitions[g[c]])
            .collect();
        let candidate =
            Automaton::new(a.alphabet.clone(), a.index, a.states.clone(), a.initial, kept)?;
        if crate::language::equivalent(&candidate, reference)?.holds {
            return Ok(Some(candidate));
        }
        // next combination
        let mut i = 0;
        loop {
            if i == groups.len() {
                return Ok(None);
            }
            choice[i] += 1;
            if choice[i] < groups[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

pub(crate) fn fresh_name(existing: &[String], base: &str) -> String {
    if !existing.iter().any(|s| s == base) {
        return base.to_string();
    }
    let mut i = 0;
    loop {
        let cand = format!("{base}{i}");
        if !existing.iter().any(|s| s == &cand) {
            return cand;
        }
        i += 1;
    }
}

/// Shortest cycle through the edge `from -> to` inside `adj` (which must
/// connect them); used for counterexample reporting.
fn cycle_through(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    if from == to {
        return vec![from];
    }
    // BFS from `to` back to `from`
    let mut prev = vec![usize::MAX; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(to);
    prev[to] = to;
    while let Some(v) = queue.pop_front() {
        if v == from {
            break;
        }
        for &w in &adj[v] {
            if prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![from];
    let mut v = from;
    while v != to {
        v = prev[v];
        path.push(v);
    }
    path.pop();
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn upw(prefix: &str, period: &str) -> UltimatelyPeriodicWord {
        UltimatelyPeriodicWord::new(
            prefix.chars().map(|c| c.to_string()),
            period.chars().map(|c| c.to_string()),
        )
        .unwrap()
    }

    #[test]
    fn accepts_inf_a() {
        let a1 = zoo::inf_a();
        assert!(a1.accepts(&upw("", "a")).unwrap());
        assert!(!a1.accepts(&upw("a", "b")).unwrap());
        assert!(a1.accepts(&upw("b", "ab")).unwrap());
    }

    #[test]
    fn accepts_after_eps_step() {
        // q0 -ε:1-> q1, q1 loops a:0
        let alphabet = Alphabet::new(["a"]).unwrap();
        let a = Automaton::new(
            alphabet,
            2,
            vec!["q0".into(), "q1".into()],
            0,
            vec![
                Transition { src: 0, letter: Letter::Eps, priority: 1, dst: 1 },
                Transition { src: 1, letter: Letter::Sym(0), priority: 0, dst: 1 },
            ],
        )
        .unwrap();
        assert!(a.accepts(&upw("", "a")).unwrap());
    }

    #[test]
    fn accepts_rejects_unknown_symbol() {
        let a1 = zoo::inf_a();
        assert!(matches!(a1.accepts(&upw("", "c")), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn eps_omega_detection() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        let mk = |prio: u32| {
            Automaton::new(
                alphabet.clone(),
                2,
                vec!["q0".into()],
                0,
                vec![
                    Transition { src: 0, letter: Letter::Eps, priority: prio, dst: 0 },
                    Transition { src: 0, letter: Letter::Sym(0), priority: 0, dst: 0 },
                ],
            )
            .unwrap()
        };
        let even = mk(0);
        assert_eq!(even.eps_omega_violation(), Some(vec![0]));
        let odd = mk(1);
        assert!(odd.check_no_eps_omega());
        assert!(zoo::inf_a().check_no_eps_omega());
    }

    #[test]
    fn eps_eliminate_spec_cases() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        // q0 -ε:1-> q1 -a:0-> q1  adds  q0 -a:0-> q1
        let a = Automaton::new(
            alphabet.clone(),
            2,
            vec!["q0".into(), "q1".into()],
            0,
            vec![
                Transition { src: 0, letter: Letter::Eps, priority: 1, dst: 1 },
                Transition { src: 1, letter: Letter::Sym(0), priority: 0, dst: 1 },
            ],
        )
        .unwrap();
        let e = a.eps_eliminate().unwrap();
        assert!(e
            .transitions
            .iter()
            .any(|t| t.src == 0 && t.letter == Letter::Sym(0) && t.priority == 0 && t.dst == 1));
        assert!(!e.has_eps());

        // q0 -ε:0-> q1 -a:2-> q0  adds  q0 -a:0-> q0
        let b = Automaton::new(
            alphabet.clone(),
            2,
            vec!["q0".into(), "q1".into()],
            0,
            vec![
                Transition { src: 0, letter: Letter::Eps, priority: 0, dst: 1 },
                Transition { src: 1, letter: Letter::Sym(0), priority: 2, dst: 0 },
                Transition { src: 0, letter: Letter::Sym(0), priority: 2, dst: 0 },
            ],
        )
        .unwrap();
        let e = b.eps_eliminate().unwrap();
        assert!(e
            .transitions
            .iter()
            .any(|t| t.src == 0 && t.letter == Letter::Sym(0) && t.priority == 0 && t.dst == 0));

        // ε-free input is returned unchanged
        let c = zoo::inf_a();
        let e = c.eps_eliminate().unwrap();
        assert_eq!(e.transitions, c.transitions);
    }

    #[test]
    fn eps_eliminate_rejects_eps_omega() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        let a = Automaton::new(
            alphabet,
            2,
            vec!["q0".into()],
            0,
            vec![
                Transition { src: 0, letter: Letter::Eps, priority: 0, dst: 0 },
                Transition { src: 0, letter: Letter::Sym(0), priority: 0, dst: 0 },
            ],
        )
        .unwrap();
        assert!(matches!(a.eps_eliminate(), Err(Error::EpsOmega(_))));
    }

    #[test]
    fn eps_eliminate_preserves_acceptance_on_random_words() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let a = zoo::eps_mixed_example();
        let e = a.eps_eliminate().unwrap();
        for _ in 0..1000 {
            let letters = ["a", "b"];
            let prefix: Vec<String> =
                (0..rng.gen_range(0..4)).map(|_| letters[rng.gen_range(0..2)].to_string()).collect();
            let period: Vec<String> =
                (0..rng.gen_range(1..5)).map(|_| letters[rng.gen_range(0..2)].to_string()).collect();
            let w = UltimatelyPeriodicWord::new(prefix, period).unwrap();
            assert_eq!(a.accepts(&w).unwrap(), e.accepts(&w).unwrap(), "word {w}");
        }
    }

    #[test]
    fn complement_spec_cases() {
        let a1 = zoo::inf_a();
        let c = a1.complement_det().unwrap();
        // complement accepts exactly "finitely many a"
        assert!(!c.accepts(&upw("", "a")).unwrap());
        assert!(c.accepts(&upw("a", "b")).unwrap());
        // complement twice is language-equivalent to the original
        let cc = c.complement_det().unwrap();
        assert!(crate::language::equivalent(&a1, &cc).unwrap().holds);
        // full language complements to the empty one
        let full = zoo::sigma_omega(&["a", "b"]);
        let empty = full.complement_det().unwrap();
        assert!(!empty.accepts(&upw("", "a")).unwrap());
        assert!(!empty.accepts(&upw("", "ab")).unwrap());
    }

    #[test]
    fn complement_rejects_nondeterministic() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        let a = Automaton::new(
            alphabet,
            2,
            vec!["q0".into()],
            0,
            vec![
                Transition { src: 0, letter: Letter::Sym(0), priority: 0, dst: 0 },
                Transition { src: 0, letter: Letter::Sym(0), priority: 1, dst: 0 },
            ],
        )
        .unwrap();
        assert!(a.complement_det().is_err());
    }

    #[test]
    fn xor_with_complement_on_random_words() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for b in [zoo::inf_a(), zoo::aa_then_any(), zoo::nob_finaa_infcc()] {
            let c = b.complement_det().unwrap();
            let syms: Vec<String> = b.alphabet.symbols().map(str::to_string).collect();
            for _ in 0..300 {
                let prefix: Vec<String> =
                    (0..rng.gen_range(0..4)).map(|_| syms[rng.gen_range(0..syms.len())].clone()).collect();
                let period: Vec<String> =
                    (0..rng.gen_range(1..5)).map(|_| syms[rng.gen_range(0..syms.len())].clone()).collect();
                let w = UltimatelyPeriodicWord::new(prefix, period).unwrap();
                assert_ne!(b.accepts(&w).unwrap(), c.accepts(&w).unwrap(), "word {w}");
            }
        }
    }

    #[test]
    fn cascade_identity_shape() {
        let a1 = zoo::inf_a();
        // one-vertex companion with self-loops 0 and 1 reproduces the shape
        let s = DGraph {
            vertices: vec!["s".into()],
            edges: vec![(0, 0, 0), (0, 1, 0)],
            initial: Some(0),
        };
        let g = a1.cascade(&s).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.edges.len(), 2); // a-loop and b-loop survive
        // label-1-only companion keeps only the priority-1 transitions
        let s1 = DGraph { vertices: vec!["s".into()], edges: vec![(0, 1, 0)], initial: Some(0) };
        let g1 = a1.cascade(&s1).unwrap();
        assert_eq!(g1.edges.len(), 1);
        assert_eq!(g1.edges[0].1, Letter::Sym(1)); // only the b:1 loop
    }

    #[test]
    fn blowup_check_spec_cases() {
        let a = zoo::inf_a();
        let (b, proj) = zoo::trivial_blowup(&a, 1);
        assert!(is_blowup(&b, &proj, &a, 1).unwrap().holds());

        // dropping one lifted transition breaks the check
        let mut missing = b.clone();
        missing.transitions.remove(0);
        // keep no-dead-end: state still has the other loop
        let report = is_blowup(&missing, &proj, &a, 1).unwrap();
        assert!(!report.holds());
        assert_eq!(report.missing.len(), 1);
    }

    #[test]
    fn blowup_eps_cross_part_detected() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        let a = Automaton::new(
            alphabet.clone(),
            2,
            vec!["q".into()],
            0,
            vec![Transition { src: 0, letter: Letter::Sym(0), priority: 0, dst: 0 }],
        )
        .unwrap();
        let b = Automaton::new(
            alphabet,
            2,
            vec!["(q,0)".into(), "(q,1)".into()],
            0,
            vec![
                Transition { src: 0, letter: Letter::Sym(0), priority: 0, dst: 0 },
                Transition { src: 1, letter: Letter::Sym(0), priority: 0, dst: 1 },
                Transition { src: 0, letter: Letter::Eps, priority: 1, dst: 1 },
            ],
        )
        .unwrap();
        let report = is_blowup(&b, &[(0, 0), (0, 1)], &a, 2).unwrap();
        assert_eq!(report.eps_cross_part.len(), 1);
    }

    #[test]
    fn pruning_spec_cases() {
        // already deterministic: unchanged
        let a1 = zoo::inf_a();
        let pruned = determinise_by_pruning(&a1, &a1).unwrap().unwrap();
        assert_eq!(pruned.transitions.len(), a1.transitions.len());

        // duplicate parallel transitions: any one kept, equivalence holds
        let mut dup = a1.clone();
        dup.transitions.push(dup.transitions[0]);
        let pruned = determinise_by_pruning(&dup, &a1).unwrap().unwrap();
        assert!(pruned.is_deterministic());
        assert!(crate::language::equivalent(&pruned, &a1).unwrap().holds);

        // two a-successors where only one preserves the language
        let alphabet = Alphabet::new(["a", "b"]).unwrap();
        let bad_good = Automaton::new(
            alphabet,
            2,
            vec!["q0".into(), "good".into(), "bad".into()],
            0,
            vec![
                Transition { src: 0, letter: Letter::Sym(0), priority: 1, dst: 1 },
                Transition { src: 0, letter: Letter::Sym(0), priority: 1, dst: 2 },
                Transition { src: 0, letter: Letter::Sym(1), priority: 1, dst: 0 },
                Transition { src: 1, letter: Letter::Sym(0), priority: 0, dst: 1 },
                Transition { src: 1, letter: Letter::Sym(1), priority: 1, dst: 1 },
                Transition { src: 2, letter: Letter::Sym(0), priority: 1, dst: 2 },
                Transition { src: 2, letter: Letter::Sym(1), priority: 1, dst: 2 },
            ],
        )
        .unwrap();
        // the language: after one a, infinitely many a (via `good`)
        let reference = {
            let (a, _) = {
                let alphabet = Alphabet::new(["a", "b"]).unwrap();
                let a = Automaton::new(
                    alphabet,
                    2,
                    vec!["q0".into(), "good".into()],
                    0,
                    vec![
                        Transition { src: 0, letter: Letter::Sym(0), priority: 1, dst: 1 },
                        Transition { src: 0, letter: Letter::Sym(1), priority: 1, dst: 0 },
                        Transition { src: 1, letter: Letter::Sym(0), priority: 0, dst: 1 },
                        Transition { src: 1, letter: Letter::Sym(1), priority: 1, dst: 1 },
                    ],
                )
                .unwrap();
                (a, ())
            };
            a
        };
        let pruned = determinise_by_pruning(&bad_good, &reference).unwrap().unwrap();
        let kept = pruned
            .transitions
            .iter()
            .find(|t| t.src == 0 && t.letter == Letter::Sym(0))
            .unwrap();
        assert_eq!(kept.dst, 1, "only the language-preserving successor survives");
    }
}
