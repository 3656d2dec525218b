//! The explicit union construction for two parity languages: a deterministic
//! interleaving automaton T over pairs of priorities, its nondeterministic
//! relaxation T-bar recognising the same language, the 0-freeing transform
//! for prefix-increasing objectives, and the ε-completion of the product of
//! two completions, with k₁·k₂ memory classes.

use std::collections::BTreeMap;

use crate::automaton::tuple_name;
use crate::completeness::{validate_completion, CompletionReport};
use crate::language::{conjunctive_empty, included, VEdge, VectorGraph};
use crate::{Alphabet, Automaton, Error, Letter, MemoryPartition, Result, Transition};

/// One element of an interleaving: an odd priority of the first or second
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Elem {
    /// Odd priority of the first coordinate.
    Fst(u32),
    /// Odd priority of the second coordinate (the starred side).
    Snd(u32),
}

impl Elem {
    fn is_fst(self) -> bool {
        matches!(self, Elem::Fst(_))
    }
}

/// A state of the union automaton: an interleaving of the odd priorities
/// `1,3,…,d₁` and `1*,3*,…,d₂*`, each side in increasing order, indexed
/// from 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InterleavingState {
    pub seq: Vec<Elem>,
    pub d1: u32,
    pub d2: u32,
}

impl InterleavingState {
    pub fn validate(&self) -> Result<()> {
        if self.d1 % 2 == 0 || self.d2 % 2 == 0 {
            return Err(Error::Invalid("both priority bounds must be odd".into()));
        }
        let fst: Vec<u32> = self.seq.iter().filter_map(|e| match e {
            Elem::Fst(y) => Some(*y),
            _ => None,
        }).collect();
        let snd: Vec<u32> = self.seq.iter().filter_map(|e| match e {
            Elem::Snd(z) => Some(*z),
            _ => None,
        }).collect();
        let want1: Vec<u32> = (1..=self.d1).step_by(2).collect();
        let want2: Vec<u32> = (1..=self.d2).step_by(2).collect();
        if fst != want1 || snd != want2 {
            return Err(Error::Invalid("not an interleaving of the two odd sequences".into()));
        }
        Ok(())
    }

    /// 1-based position of the element governing input priority `y` on the
    /// given side: odd priorities sit at their own position, even ones at
    /// their predecessor's; 0 (first side only) maps to index 0.
    pub fn ind(&self, e: Side, y: u32) -> usize {
        match (e, y) {
            (Side::Fst, 0) => 0,
            (Side::Fst, y) => {
                let odd = if y % 2 == 1 { y } else { y - 1 };
                self.seq.iter().position(|&x| x == Elem::Fst(odd)).expect("present") + 1
            }
            (Side::Snd, z) => {
                assert!(z >= 1, "second coordinate has no 0");
                let odd = if z % 2 == 1 { z } else { z - 1 };
                self.seq.iter().position(|&x| x == Elem::Snd(odd)).expect("present") + 1
            }
        }
    }

    pub fn name(&self) -> String {
        let parts: Vec<String> = self
            .seq
            .iter()
            .map(|e| match e {
                Elem::Fst(y) => y.to_string(),
                Elem::Snd(z) => format!("{z}*"),
            })
            .collect();
        format!("<{}>", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Fst,
    Snd,
}

/// The lexicographic order on interleavings: τ < τ' iff at the first
/// differing position τ holds a first-coordinate element.
pub fn lex_less(a: &InterleavingState, b: &InterleavingState) -> Result<bool> {
    if a.d1 != b.d1 || a.d2 != b.d2 || a.seq.len() != b.seq.len() {
        return Err(Error::Invalid("interleavings of different shapes".into()));
    }
    for (x, y) in a.seq.iter().zip(&b.seq) {
        if x != y {
            return Ok(x.is_fst());
        }
    }
    Ok(false)
}

/// `τ <_i τ'` on prefixes up to and including position i (1-based).
fn lex_less_upto(a: &InterleavingState, b: &InterleavingState, i: usize) -> bool {
    for pos in 0..i.min(a.seq.len()) {
        if a.seq[pos] != b.seq[pos] {
            return a.seq[pos].is_fst();
        }
    }
    false
}

fn prefix_eq(a: &InterleavingState, b: &InterleavingState, i: usize) -> bool {
    a.seq[..i.min(a.seq.len())] == b.seq[..i.min(b.seq.len())]
}

/// The deterministic step: the more important input (smaller index in τ)
/// fires; even inputs leave τ unchanged, odd inputs pull the first opposite
/// element to their left.
pub fn t_step(tau: &InterleavingState, y: u32, z: u32) -> Result<(u32, InterleavingState)> {
    if y > tau.d1 + 1 {
        return Err(Error::Invalid(format!("first input {y} out of range")));
    }
    if z == 0 || z > tau.d2 + 1 {
        return Err(Error::Invalid(format!("second input {z} out of range")));
    }
    let iy = tau.ind(Side::Fst, y);
    let iz = tau.ind(Side::Snd, z);
    assert_ne!(iy, iz, "distinct elements occupy distinct positions");
    let (i, side, input) = if iy < iz { (iy, Side::Fst, y) } else { (iz, Side::Snd, z) };
    let odd = input % 2 == 1;
    let t = if odd { 2 * i as u32 - 1 } else { 2 * i as u32 };
    if !odd {
        return Ok((t, tau.clone()));
    }
    // insert the first later element of the opposite side to the left of τ[i]
    let opposite = |e: &Elem| match side {
        Side::Fst => !e.is_fst(),
        Side::Snd => e.is_fst(),
    };
    let mut seq = tau.seq.clone();
    if let Some(ip) = (i..seq.len()).find(|&p| opposite(&seq[p])) {
        let moved = seq.remove(ip);
        seq.insert(i - 1, moved);
    }
    Ok((t, InterleavingState { seq, d1: tau.d1, d2: tau.d2 }))
}

fn all_interleavings(d1: u32, d2: u32) -> Vec<InterleavingState> {
    let a: Vec<Elem> = (1..=d1).step_by(2).map(Elem::Fst).collect();
    let b: Vec<Elem> = (1..=d2).step_by(2).map(Elem::Snd).collect();
    let mut out = Vec::new();
    fn rec(a: &[Elem], b: &[Elem], cur: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
        if a.is_empty() && b.is_empty() {
            out.push(cur.clone());
            return;
        }
        if let Some((&x, rest)) = a.split_first() {
            cur.push(x);
            rec(rest, b, cur, out);
            cur.pop();
        }
        if let Some((&x, rest)) = b.split_first() {
            cur.push(x);
            rec(a, rest, cur, out);
            cur.pop();
        }
    }
    let mut seqs = Vec::new();
    rec(&a, &b, &mut Vec::new(), &mut seqs);
    for seq in seqs {
        out.push(InterleavingState { seq, d1, d2 });
    }
    out.sort();
    out
}

/// Alphabet symbol for the input pair `(y, z)`.
fn pair_symbol(y: u32, z: u32) -> String {
    format!("{y},{z}*")
}

/// The deterministic union automaton over the alphabet `[d₁] × [d₂]*`
/// (second coordinate never 0). It accepts exactly the words whose first
/// projection or second projection has an even liminf. Even bounds are
/// normalised up to the next odd value. The default initial state puts the
/// whole starred sequence first.
pub fn build_t(d1: u32, d2: u32) -> Result<Automaton> {
    let d1 = d1 + (1 - d1 % 2);
    let d2 = d2 + (1 - d2 % 2);
    if (d1 + d2) / 2 > 8 {
        return Err(Error::SizeGuard("too many interleavings".into()));
    }
    let states = all_interleavings(d1, d2);
    let symbols: Vec<String> = (0..=d1)
        .flat_map(|y| (1..=d2).map(move |z| pair_symbol(y, z)))
        .collect();
    let alphabet = Alphabet::new(symbols)?;
    let index = d1 + d2 + 2; // outputs range over [0, d1+d2+2]
    let pos_of: BTreeMap<Vec<Elem>, usize> =
        states.iter().enumerate().map(|(i, s)| (s.seq.clone(), i)).collect();
    let mut transitions = Vec::new();
    for (i, tau) in states.iter().enumerate() {
        for y in 0..=d1 {
            for z in 1..=d2 {
                let (t, tau2) = t_step(tau, y, z)?;
                let sym = alphabet.position(&pair_symbol(y, z))?;
                transitions.push(Transition {
                    src: i,
                    letter: Letter::Sym(sym),
                    priority: t,
                    dst: pos_of[&tau2.seq],
                });
            }
        }
    }
    // initial: all starred elements before all plain ones
    let initial_seq: Vec<Elem> = (1..=d2)
        .step_by(2)
        .map(Elem::Snd)
        .chain((1..=d1).step_by(2).map(Elem::Fst))
        .collect();
    let initial = pos_of[&initial_seq];
    Automaton::new(alphabet, index, states.iter().map(|s| s.name()).collect(), initial, transitions)
}

/// The relaxed transitions from `tau` on input `(y,z)`: the deterministic
/// output may be kept while reconfiguring everything right of the deciding
/// index, or any more important output may be claimed against a strict
/// lexicographic decrease at its own prefix.
pub fn tbar_steps(
    tau: &InterleavingState,
    y: u32,
    z: u32,
    targets: &[InterleavingState],
) -> Result<Vec<(u32, InterleavingState)>> {
    let (t, _det) = t_step(tau, y, z)?;
    let i0 = ((t + 1) / 2) as usize; // t ∈ {2i0−1, 2i0}
    let mut out = Vec::new();
    for tau2 in targets {
        if t % 2 == 1 {
            // rule 1: keep the odd output, prefix up to i0−1 non-increasing
            if lex_less_upto(tau2, tau, i0.saturating_sub(1)) || prefix_eq(tau2, tau, i0.saturating_sub(1)) {
                out.push((t, tau2.clone()));
            }
        } else {
            // rule 2: keep the even output, prefix up to i0 non-increasing
            if lex_less_upto(tau2, tau, i0) || prefix_eq(tau2, tau, i0) {
                out.push((t, tau2.clone()));
            }
        }
        // rule 3: claim a more important output against a strict decrease
        for ip in 1..=i0 {
            if lex_less_upto(tau2, tau, ip) {
                out.push((2 * ip as u32 - 1, tau2.clone()));
                out.push((2 * ip as u32, tau2.clone()));
            }
        }
    }
    out.sort_by(|a, b| (a.0, &a.1.seq).cmp(&(b.0, &b.1.seq)));
    out.dedup();
    Ok(out)
}

/// The nondeterministic relaxation of [`build_t`]; same language.
pub fn build_tbar(d1: u32, d2: u32) -> Result<Automaton> {
    let t = build_t(d1, d2)?;
    let d1 = d1 + (1 - d1 % 2);
    let d2 = d2 + (1 - d2 % 2);
    let states = all_interleavings(d1, d2);
    let pos_of: BTreeMap<Vec<Elem>, usize> =
        states.iter().enumerate().map(|(i, s)| (s.seq.clone(), i)).collect();
    let mut transitions = Vec::new();
    for (i, tau) in states.iter().enumerate() {
        for y in 0..=d1 {
            for z in 1..=d2 {
                let sym = t.alphabet.position(&pair_symbol(y, z))?;
                for (t2, tau2) in tbar_steps(tau, y, z, &states)? {
                    transitions.push(Transition {
                        src: i,
                        letter: Letter::Sym(sym),
                        priority: t2,
                        dst: pos_of[&tau2.seq],
                    });
                }
            }
        }
    }
    Automaton::new(t.alphabet.clone(), t.index, t.states.clone(), t.initial, transitions)
}

/// `L(b)` is prefix-increasing: every letter prepended to an accepted word
/// stays accepted, i.e. `L(b) ⊆ a⁻¹L(b)` for every letter a.
pub fn is_prefix_increasing(b: &Automaton) -> Result<(bool, Option<(String, crate::UltimatelyPeriodicWord)>)> {
    if !b.is_deterministic() {
        return Err(Error::Invalid("prefix-increasing check needs a deterministic automaton".into()));
    }
    let bc = b.completed();
    for a in 0..bc.alphabet.len() {
        let (_, q) = bc.det_successor(bc.initial, a).expect("complete");
        let rerooted = bc.rerooted(q);
        let rep = included(&bc, &rerooted)?;
        if !rep.holds {
            return Ok((false, rep.counterexample.map(|w| (bc.alphabet.symbol(a).to_string(), w))));
        }
    }
    Ok((true, None))
}

/// Shifts all priorities of `a` by +2 (raising the index accordingly).
fn shift_priorities(a: &Automaton) -> Automaton {
    let mut out = a.clone();
    out.index += 2;
    for t in &mut out.transitions {
        t.priority += 2;
    }
    out
}

/// Turns a validated completion of a prefix-increasing objective into a
/// 0-free one: all priorities shift by two, ε:0 edges disappear with them,
/// and mutual ε:1 edges are added between all pairs of states. The output
/// passes `validate_completion` again and has no priority-0 transition.
pub fn zero_free_transform(
    a: &Automaton,
    aeps: &Automaton,
    p: &MemoryPartition,
) -> Result<(Automaton, Automaton, MemoryPartition, CompletionReport)> {
    let (incr, witness) = is_prefix_increasing(a)?;
    if !incr {
        return Err(Error::Invalid(format!(
            "objective is not prefix-increasing (letter {})",
            witness.map(|(a, w)| format!("{a}, word {w}")).unwrap_or_default()
        )));
    }
    let a2 = shift_priorities(a);
    let mut aeps2 = shift_priorities(aeps);
    for q in 0..aeps2.n_states() {
        for q2 in 0..aeps2.n_states() {
            let t = Transition { src: q, letter: Letter::Eps, priority: 1, dst: q2 };
            if !aeps2.transitions.contains(&t) {
                aeps2.transitions.push(t);
            }
        }
    }
    // the added ε:1 edges cross parts and ignore any chromatic table
    let p2 = MemoryPartition { k: p.k, part: p.part.clone(), chromatic: None };
    let report = validate_completion(&a2, &aeps2, &p2, &a2)?;
    Ok((a2, aeps2, p2, report))
}

fn odd_bound(index: u32) -> u32 {
    index + 1 // index is even; inputs to the interleaving machine go one higher
}

/// The deterministic product recognising `L(a1) ∪ L(a2)`: states are triples
/// of a state of each automaton and an interleaving; `a2` must be 0-free.
pub fn union_automaton(a1: &Automaton, a2: &Automaton) -> Result<Automaton> {
    check_union_inputs(a1, a2)?;
    let d1 = odd_bound(a1.index);
    let d2 = odd_bound(a2.index);
    let t = build_t(d1, d2)?;
    let taus = all_interleavings(d1, d2);
    let nt = taus.len();
    let n2 = a2.n_states();
    let id = |q1: usize, q2: usize, ti: usize| (q1 * n2 + q2) * nt + ti;
    let mut states = Vec::new();
    for q1 in 0..a1.n_states() {
        for q2 in 0..n2 {
            for tau in &taus {
                states.push(tuple_name(&[&a1.states[q1], &a2.states[q2], &tau.name()]));
            }
        }
    }
    let mut transitions = Vec::new();
    for t1 in a1.transitions.iter().filter(|t| !t.letter.is_eps()) {
        for t2 in a2.transitions.iter().filter(|t| t.letter == t1.letter) {
            for (ti, tau) in taus.iter().enumerate() {
                let (out, tau2) = t_step(tau, t1.priority, t2.priority)?;
                let ti2 = taus.iter().position(|x| x == &tau2).unwrap();
                transitions.push(Transition {
                    src: id(t1.src, t2.src, ti),
                    letter: t1.letter,
                    priority: out,
                    dst: id(t1.dst, t2.dst, ti2),
                });
            }
        }
    }
    let initial = id(a1.initial, a2.initial, t.initial_tau_index(&taus));
    Automaton::new(a1.alphabet.clone(), t.index, states, initial, transitions)
}

trait InitialTau {
    fn initial_tau_index(&self, taus: &[InterleavingState]) -> usize;
}

impl InitialTau for Automaton {
    fn initial_tau_index(&self, taus: &[InterleavingState]) -> usize {
        // mirror build_t's default: all starred elements first
        let d1 = taus[0].d1;
        let d2 = taus[0].d2;
        let initial_seq: Vec<Elem> = (1..=d2)
            .step_by(2)
            .map(Elem::Snd)
            .chain((1..=d1).step_by(2).map(Elem::Fst))
            .collect();
        taus.iter().position(|t| t.seq == initial_seq).unwrap()
    }
}

fn check_union_inputs(a1: &Automaton, a2: &Automaton) -> Result<()> {
    let s1: Vec<&str> = a1.alphabet.symbols().collect();
    let s2: Vec<&str> = a2.alphabet.symbols().collect();
    if s1 != s2 {
        return Err(Error::AlphabetMismatch(s1.join(" "), s2.join(" ")));
    }
    if let Some(t) = a2.transitions.iter().find(|t| t.priority == 0) {
        return Err(Error::Invalid(format!(
            "second automaton has a priority-0 transition from {}",
            a2.states[t.src]
        )));
    }
    Ok(())
}

/// Everything the union completion construction produces.
#[derive(Debug, Clone)]
pub struct UnionCompletion {
    pub product: Automaton,
    pub completion: Automaton,
    pub partition: MemoryPartition,
}

/// The preference order on output priorities: odd ascending, then even
/// descending (worst to best). Emitting any priority below the justified one
/// in this order only makes acceptance harder.
pub(crate) fn pref_index(t: u32, d: u32) -> u32 {
    if t % 2 == 1 {
        (t - 1) / 2
    } else {
        // d is even; evens rank above all odds, larger evens first
        (d + 1) / 2 + (d - t) / 2 + 1
    }
}

/// Builds the ε-completion of the union product: Σ-transitions from the
/// product itself; an ε-transition with output t whenever both components
/// have ε-moves with priorities (y,z), some relaxed transition justifies an
/// output t₀ on (y,z), and t is at most t₀ in the preference order. The
/// partition has k₁·k₂ classes.
pub fn union_completion(
    a1: &Automaton,
    a1eps: &Automaton,
    p1: &MemoryPartition,
    a2: &Automaton,
    a2eps: &Automaton,
    p2: &MemoryPartition,
) -> Result<UnionCompletion> {
    check_union_inputs(a1, a2)?;
    p1.validate(a1eps)?;
    p2.validate(a2eps)?;
    let product = union_automaton(a1, a2)?;
    let d = product.index;
    let d1 = odd_bound(a1.index);
    let d2 = odd_bound(a2.index);
    let taus = all_interleavings(d1, d2);
    let nt = taus.len();
    let n2 = a2.n_states();
    let id = |q1: usize, q2: usize, ti: usize| (q1 * n2 + q2) * nt + ti;
    let mut completion = product.clone();
    let mut extra = std::collections::BTreeSet::new();
    for e1 in a1eps.transitions.iter().filter(|t| t.letter.is_eps()) {
        for e2 in a2eps.transitions.iter().filter(|t| t.letter.is_eps()) {
            if e2.priority == 0 {
                return Err(Error::Invalid("second completion must be 0-free".into()));
            }
            for (ti, tau) in taus.iter().enumerate() {
                for (t0, tau2) in tbar_steps(tau, e1.priority, e2.priority, &taus)? {
                    let ti2 = taus.iter().position(|x| x == &tau2).unwrap();
                    // emit every priority at most as favourable as t0
                    for t in 0..=d {
                        if pref_index(t, d) <= pref_index(t0, d) {
                            extra.insert(Transition {
                                src: id(e1.src, e2.src, ti),
                                letter: Letter::Eps,
                                priority: t,
                                dst: id(e1.dst, e2.dst, ti2),
                            });
                        }
                    }
                }
            }
        }
    }
    for t in extra {
        if !completion.transitions.contains(&t) {
            completion.transitions.push(t);
        }
    }
    let k = p1.k * p2.k;
    let part: Vec<u32> = (0..completion.n_states())
        .map(|s| {
            let ti_removed = s / nt;
            let q2 = ti_removed % n2;
            let q1 = ti_removed / n2;
            p1.part[q1] * p2.k + p2.part[q2]
        })
        .collect();
    let partition = MemoryPartition { k, part, chromatic: None };
    Ok(UnionCompletion { product, completion, partition })
}

/// Decides `L(t) = {w : π₁(w) or π₂(w) has even liminf}` exactly, for the
/// (possibly nondeterministic) interleaving automaton `t` over the paired
/// alphabet. Returns a separating word on failure.
pub fn check_t_language(t: &Automaton, d1: u32, d2: u32) -> Result<Option<crate::UltimatelyPeriodicWord>> {
    let d1 = d1 + (1 - d1 % 2);
    let d2 = d2 + (1 - d2 % 2);
    let decode = |sym: usize| -> (u32, u32) {
        let name = t.alphabet.symbol(sym);
        let (y, z) = name.split_once(',').expect("pair symbol");
        (y.parse().unwrap(), z.trim_end_matches('*').parse().unwrap())
    };
    // L(t) ⊆ union: a lasso accepted by t whose projections both have odd
    // liminf (odd-liminf coordinates are shifted to make their minima even)
    let te = t.eps_eliminate()?;
    let edges: Vec<VEdge> = te
        .transitions
        .iter()
        .map(|tr| {
            let sym = match tr.letter {
                Letter::Sym(s) => s,
                Letter::Eps => unreachable!(),
            };
            let (y, z) = decode(sym);
            VEdge { src: tr.src, dst: tr.dst, prios: vec![tr.priority, y + 1, z + 1], symbol: Some(sym) }
        })
        .collect();
    let g = VectorGraph { n: te.n_states(), r: 3, edges, initial: te.initial };
    if let Some(w) = conjunctive_empty(&g)? {
        return Ok(Some(witness_to_word(&te, &g, &w)?));
    }
    // union ⊆ L(t): some word whose first (resp. second) projection is even
    // while t rejects; t must be deterministic here to complement by shift
    if t.is_deterministic() {
        for side in 0..2 {
            let edges: Vec<VEdge> = t
                .transitions
                .iter()
                .map(|tr| {
                    let sym = match tr.letter {
                        Letter::Sym(s) => s,
                        Letter::Eps => unreachable!(),
                    };
                    let (y, z) = decode(sym);
                    let proj = if side == 0 { y } else { z };
                    VEdge { src: tr.src, dst: tr.dst, prios: vec![tr.priority + 1, proj], symbol: Some(sym) }
                })
                .collect();
            let g = VectorGraph { n: t.n_states(), r: 2, edges, initial: t.initial };
            if let Some(w) = conjunctive_empty(&g)? {
                return Ok(Some(witness_to_word(t, &g, &w)?));
            }
        }
        Ok(None)
    } else {
        // nondeterministic relaxations contain the deterministic transitions,
        // so the converse inclusion holds structurally once that is verified
        let det = build_t(d1, d2)?;
        for tr in &det.transitions {
            let sym = det.alphabet.display(tr.letter);
            let present = t.transitions.iter().any(|t2| {
                t.alphabet.display(t2.letter) == sym
                    && t.states[t2.src] == det.states[tr.src]
                    && t.states[t2.dst] == det.states[tr.dst]
                    && t2.priority == tr.priority
            });
            if !present {
                return Err(Error::Invalid(format!(
                    "relaxation is missing the deterministic transition from {}",
                    det.states[tr.src]
                )));
            }
        }
        Ok(None)
    }
}

fn witness_to_word(
    t: &Automaton,
    g: &VectorGraph,
    w: &crate::language::LassoWitness,
) -> Result<crate::UltimatelyPeriodicWord> {
    let name = |i: &usize| {
        let e = &g.edges[*i];
        t.alphabet.symbol(e.symbol.expect("symbol")).to_string()
    };
    crate::UltimatelyPeriodicWord::new(
        w.stem.iter().map(name).collect::<Vec<_>>(),
        w.cycle.iter().map(name).collect::<Vec<_>>(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn tau(d1: u32, d2: u32, elems: &[(u32, bool)]) -> InterleavingState {
        InterleavingState {
            seq: elems
                .iter()
                .map(|&(v, starred)| if starred { Elem::Snd(v) } else { Elem::Fst(v) })
                .collect(),
            d1,
            d2,
        }
    }

    #[test]
    fn t_step_worked_example() {
        // ⟨1,3,1*,5,3*,5*⟩ reading (3,2*) outputs 3 and pulls 1* left of 3
        let t0 = tau(5, 5, &[(1, false), (3, false), (1, true), (5, false), (3, true), (5, true)]);
        t0.validate().unwrap();
        let (out, t1) = t_step(&t0, 3, 2).unwrap();
        assert_eq!(out, 3);
        assert_eq!(
            t1,
            tau(5, 5, &[(1, false), (1, true), (3, false), (5, false), (3, true), (5, true)])
        );
    }

    #[test]
    fn t_step_zero_is_neutral() {
        let t0 = tau(3, 3, &[(1, false), (1, true), (3, false), (3, true)]);
        let (out, t1) = t_step(&t0, 0, 2).unwrap();
        assert_eq!(out, 0);
        assert_eq!(t1, t0);
    }

    #[test]
    fn t_step_minimal_case() {
        // d1=d2=1: τ=⟨1,1*⟩ on (1,1*): the first side wins at index 1
        let t0 = tau(1, 1, &[(1, false), (1, true)]);
        let (out, t1) = t_step(&t0, 1, 1).unwrap();
        assert_eq!(out, 1);
        assert_eq!(t1, tau(1, 1, &[(1, true), (1, false)]));
    }

    #[test]
    fn interleaving_counts() {
        let t = build_t(1, 1).unwrap();
        assert_eq!(t.n_states(), 2);
        let t = build_t(3, 3).unwrap();
        assert_eq!(t.n_states(), 6);
        assert!(t.index <= 3 + 3 + 2);
        assert!(t.is_deterministic());
    }

    #[test]
    fn lex_order_spec_cases() {
        let a = tau(1, 1, &[(1, false), (1, true)]);
        let b = tau(1, 1, &[(1, true), (1, false)]);
        assert!(lex_less(&a, &b).unwrap());
        assert!(!lex_less(&b, &a).unwrap());
        assert!(!lex_less(&a, &a).unwrap());
    }

    #[test]
    fn lex_total_and_antisymmetric_on_all_states() {
        let states = all_interleavings(3, 3);
        for x in &states {
            for y in &states {
                let xy = lex_less(x, y).unwrap();
                let yx = lex_less(y, x).unwrap();
                if x == y {
                    assert!(!xy && !yx);
                } else {
                    assert!(xy ^ yx);
                }
            }
        }
    }

    #[test]
    fn tbar_contains_deterministic_and_rule3_case() {
        // deterministic step always included
        let states = all_interleavings(1, 1);
        for tau0 in &states {
            for y in 0..=1 {
                for z in 1..=1 {
                    let (t, det) = t_step(tau0, y, z).unwrap();
                    let steps = tbar_steps(tau0, y, z, &states).unwrap();
                    assert!(steps.contains(&(t, det.clone())), "{tau0:?} ({y},{z})");
                }
            }
        }
        // rule 3: from ⟨1*,1⟩ on (1,1*), output 1 to ⟨1,1*⟩ is allowed
        let b = tau(1, 1, &[(1, true), (1, false)]);
        let a = tau(1, 1, &[(1, false), (1, true)]);
        let steps = tbar_steps(&b, 1, 1, &states).unwrap();
        assert!(steps.contains(&(1, a)));
    }

    #[test]
    fn t_language_exact_small_cases() {
        for (d1, d2) in [(1u32, 1u32), (1, 3), (3, 3)] {
            let t = build_t(d1, d2).unwrap();
            assert_eq!(check_t_language(&t, d1, d2).unwrap(), None, "T({d1},{d2})");
            let tb = build_tbar(d1, d2).unwrap();
            assert_eq!(check_t_language(&tb, d1, d2).unwrap(), None, "Tbar({d1},{d2})");
        }
    }

    #[test]
    fn t_language_random_words_match_direct_liminf() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        let t = build_t(3, 3).unwrap();
        for _ in 0..2000 {
            let len = rng.gen_range(1..5);
            let period: Vec<(u32, u32)> =
                (0..len).map(|_| (rng.gen_range(0..=3), rng.gen_range(1..=3))).collect();
            let w = crate::UltimatelyPeriodicWord::new(
                Vec::<String>::new(),
                period.iter().map(|&(y, z)| super::pair_symbol(y, z)),
            )
            .unwrap();
            let lim1 = period.iter().map(|&(y, _)| y).min().unwrap();
            let lim2 = period.iter().map(|&(_, z)| z).min().unwrap();
            let expect = lim1 % 2 == 0 || lim2 % 2 == 0;
            assert_eq!(t.accepts(&w).unwrap(), expect, "period {period:?}");
        }
    }

    #[test]
    fn t_step_output_parity_matches_winner() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let states = all_interleavings(3, 5);
        for _ in 0..500 {
            let tau0 = &states[rng.gen_range(0..states.len())];
            let y = rng.gen_range(0..=3);
            let z = rng.gen_range(1..=5);
            let (t, _) = t_step(tau0, y, z).unwrap();
            let iy = tau0.ind(Side::Fst, y);
            let iz = tau0.ind(Side::Snd, z);
            let winner_parity = if iy < iz { y % 2 } else { z % 2 };
            assert_eq!(t % 2, winner_parity);
        }
    }

    #[test]
    fn prefix_increasing_spec_cases() {
        assert!(is_prefix_increasing(&zoo::inf_a()).unwrap().0);
        assert!(is_prefix_increasing(&zoo::sigma_omega(&["a", "b"])).unwrap().0);
        let (ok, witness) = is_prefix_increasing(&zoo::aa_then_any()).unwrap();
        assert!(!ok);
        let (letter, w) = witness.unwrap();
        // the witness shows w accepted but letter·w rejected
        assert!(zoo::aa_then_any().accepts(&w).unwrap());
        let mut shifted = w.clone();
        shifted.prefix.insert(0, letter);
        assert!(!zoo::aa_then_any().accepts(&shifted).unwrap());
    }

    #[test]
    fn union_of_equal_languages_is_idempotent() {
        let a = zoo::inf_a();
        // make the second copy 0-free by shifting
        let a2 = super::shift_priorities(&a);
        let u = union_automaton(&a, &a2).unwrap();
        assert!(u.is_deterministic());
        let rep = crate::language::equivalent(&u, &a).unwrap();
        assert!(rep.holds, "{:?}", rep.counterexample);
    }

    #[test]
    fn union_with_empty_language() {
        let alphabet = crate::Alphabet::new(["a", "b"]).unwrap();
        let empty = Automaton::new(
            alphabet,
            2,
            vec!["e".into()],
            0,
            vec![
                Transition { src: 0, letter: Letter::Sym(0), priority: 1, dst: 0 },
                Transition { src: 0, letter: Letter::Sym(1), priority: 1, dst: 0 },
            ],
        )
        .unwrap();
        let b = zoo::inf_a();
        let b2 = super::shift_priorities(&b);
        let u = union_automaton(&empty, &b2).unwrap();
        let rep = crate::language::equivalent(&u, &b).unwrap();
        assert!(rep.holds, "{:?}", rep.counterexample);
    }

    #[test]
    fn zero_free_transform_on_prefix_independent_objective() {
        let a = zoo::inf_a();
        let (k, cert) = crate::solver::compute_memory(&a, &Default::default()).unwrap();
        assert_eq!(k, 1);
        let (blowup, _, partition) = crate::solver::build_blowup(&a, 1, &cert.routing).unwrap();
        let completion =
            crate::solver::canonical_completion(&blowup, &partition, &cert.signatures).unwrap();
        let (a2, aeps2, p2, report) = zero_free_transform(&blowup, &completion, &partition).unwrap();
        assert!(report.holds(), "{report:?}");
        assert!(aeps2.transitions.iter().all(|t| t.priority != 0));
        assert!(a2.transitions.iter().all(|t| t.priority != 0));
        let _ = p2;
    }

    #[test]
    fn zero_free_transform_rejects_non_prefix_increasing() {
        let a = zoo::aa_then_any();
        let p = MemoryPartition::uniform(a.n_states());
        assert!(zero_free_transform(&a, &a, &p).is_err());
    }
}
