//! A small zoo of automata used across tests, the acceptance suite and the
//! benchmarks. Everything here is deterministic unless stated otherwise.

use crate::automaton::tuple_name;
use crate::{Alphabet, Automaton, Letter, Transition};

fn t(src: usize, letter: Letter, priority: u32, dst: usize) -> Transition {
    Transition { src, letter, priority, dst }
}

/// One state over {a,b}: a:0, b:1 — the words with infinitely many a.
pub fn inf_a() -> Automaton {
    let alphabet = Alphabet::new(["a", "b"]).unwrap();
    Automaton::new(
        alphabet,
        2,
        vec!["q".into()],
        0,
        vec![t(0, Letter::Sym(0), 0, 0), t(0, Letter::Sym(1), 1, 0)],
    )
    .unwrap()
}

/// Accepts every word over the given symbols.
pub fn sigma_omega(symbols: &[&str]) -> Automaton {
    let alphabet = Alphabet::new(symbols.iter().copied()).unwrap();
    let transitions = (0..symbols.len()).map(|a| t(0, Letter::Sym(a), 0, 0)).collect();
    Automaton::new(alphabet, 2, vec!["q".into()], 0, transitions).unwrap()
}

/// `aa(a+b)^ω`: the word must start with two a's.
pub fn aa_then_any() -> Automaton {
    let alphabet = Alphabet::new(["a", "b"]).unwrap();
    Automaton::new(
        alphabet,
        2,
        vec!["q0".into(), "q1".into(), "top".into(), "dead".into()],
        0,
        vec![
            t(0, Letter::Sym(0), 1, 1),
            t(0, Letter::Sym(1), 1, 3),
            t(1, Letter::Sym(0), 1, 2),
            t(1, Letter::Sym(1), 1, 3),
            t(2, Letter::Sym(0), 0, 2),
            t(2, Letter::Sym(1), 0, 2),
            t(3, Letter::Sym(0), 1, 3),
            t(3, Letter::Sym(1), 1, 3),
        ],
    )
    .unwrap()
}

/// `(aa+bb)(a+b)^ω`: the first two letters must agree.
pub fn aabb_then_any() -> Automaton {
    let alphabet = Alphabet::new(["a", "b"]).unwrap();
    Automaton::new(
        alphabet,
        2,
        vec!["q0".into(), "qa".into(), "qb".into(), "top".into(), "dead".into()],
        0,
        vec![
            t(0, Letter::Sym(0), 1, 1),
            t(0, Letter::Sym(1), 1, 2),
            t(1, Letter::Sym(0), 1, 3),
            t(1, Letter::Sym(1), 1, 4),
            t(2, Letter::Sym(0), 1, 4),
            t(2, Letter::Sym(1), 1, 3),
            t(3, Letter::Sym(0), 0, 3),
            t(3, Letter::Sym(1), 0, 3),
            t(4, Letter::Sym(0), 1, 4),
            t(4, Letter::Sym(1), 1, 4),
        ],
    )
    .unwrap()
}

/// Words over {a,b,c} that contain no b, or finitely many `aa` infixes, or
/// infinitely many `cc` infixes. State `n` is "no b seen yet"; after the
/// first b the last letter is tracked to spot `aa` (priority 1) and `cc`
/// (priority 0) events.
pub fn nob_finaa_infcc() -> Automaton {
    let alphabet = Alphabet::new(["a", "b", "c"]).unwrap();
    let (n, s, sa, sc) = (0, 1, 2, 3);
    Automaton::new(
        alphabet,
        2,
        vec!["n".into(), "s".into(), "sa".into(), "sc".into()],
        n,
        vec![
            t(n, Letter::Sym(0), 2, n),
            t(n, Letter::Sym(1), 2, s),
            t(n, Letter::Sym(2), 2, n),
            t(s, Letter::Sym(0), 2, sa),
            t(s, Letter::Sym(1), 2, s),
            t(s, Letter::Sym(2), 2, sc),
            t(sa, Letter::Sym(0), 1, sa),
            t(sa, Letter::Sym(1), 2, s),
            t(sa, Letter::Sym(2), 2, sc),
            t(sc, Letter::Sym(0), 2, sa),
            t(sc, Letter::Sym(1), 2, s),
            t(sc, Letter::Sym(2), 0, sc),
        ],
    )
    .unwrap()
}

/// Words over n colours `1..n` carrying at least two distinct letters
/// infinitely often; tracked as "the letter just read differs from the
/// previous one".
pub fn two_letters_io(n: usize) -> Automaton {
    assert!(n >= 2);
    let symbols: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let alphabet = Alphabet::new(symbols).unwrap();
    two_letters_io_over(&alphabet)
}

/// Same objective over an arbitrary alphabet.
pub fn two_letters_io_over(alphabet: &Alphabet) -> Automaton {
    let n = alphabet.len();
    let alphabet = alphabet.clone();
    let mut states: Vec<String> = vec!["init".into()];
    states.extend((1..=n).map(|i| format!("last{i}")));
    let mut transitions = Vec::new();
    for j in 0..n {
        transitions.push(t(0, Letter::Sym(j), 1, j + 1));
    }
    for i in 1..=n {
        for j in 0..n {
            let prio = if j + 1 == i { 1 } else { 0 };
            transitions.push(t(i, Letter::Sym(j), prio, j + 1));
        }
    }
    Automaton::new(alphabet, 2, states, 0, transitions).unwrap()
}

/// Over {a1,a2,b1,b2}: at least two distinct a-letters infinitely often.
pub fn two_a_io() -> Automaton {
    two_group_io(true)
}

/// Over {a1,a2,b1,b2}: at least two distinct b-letters infinitely often.
pub fn two_b_io() -> Automaton {
    two_group_io(false)
}

fn two_group_io(track_a: bool) -> Automaton {
    let alphabet = Alphabet::new(["a1", "a2", "b1", "b2"]).unwrap();
    // states: no group letter seen yet, last group letter = 1, = 2
    let states = vec!["fresh".into(), "one".into(), "two".into()];
    let group: [usize; 2] = if track_a { [0, 1] } else { [2, 3] };
    let mut transitions = Vec::new();
    for sym in 0..4 {
        let in_group = group.contains(&sym);
        let which = if sym == group[0] { 1 } else { 2 };
        for st in 0..3 {
            if !in_group {
                transitions.push(t(st, Letter::Sym(sym), 1, st));
            } else {
                let prio = if st != 0 && st != which { 0 } else { 1 };
                transitions.push(t(st, Letter::Sym(sym), prio, which));
            }
        }
    }
    Automaton::new(alphabet, 2, states, 0, transitions).unwrap()
}

/// Single state over letters `p0..pd`; reading `pi` outputs priority i.
/// Recognises the min-parity condition itself.
pub fn parity_chain(d: u32) -> Automaton {
    let symbols: Vec<String> = (0..=d).map(|i| format!("p{i}")).collect();
    let alphabet = Alphabet::new(symbols).unwrap();
    let transitions = (0..=d).map(|i| t(0, Letter::Sym(i as usize), i, 0)).collect();
    Automaton::new(alphabet, d + d % 2, vec!["q".into()], 0, transitions).unwrap()
}

/// A small automaton mixing ε- and letter-transitions, with no even ε-cycle.
pub fn eps_mixed_example() -> Automaton {
    let alphabet = Alphabet::new(["a", "b"]).unwrap();
    Automaton::new(
        alphabet,
        2,
        vec!["q0".into(), "q1".into(), "q2".into()],
        0,
        vec![
            t(0, Letter::Eps, 1, 1),
            t(0, Letter::Sym(1), 2, 0),
            t(1, Letter::Sym(0), 0, 1),
            t(1, Letter::Sym(1), 1, 2),
            t(2, Letter::Eps, 1, 0),
            t(2, Letter::Sym(0), 2, 2),
        ],
    )
    .unwrap()
}

/// The identity k-blowup of `a`: states `(q,m)` with every transition lifted
/// inside each memory class. Returns the blowup and its state projection.
pub fn trivial_blowup(a: &Automaton, k: u32) -> (Automaton, Vec<(usize, u32)>) {
    let mut states = Vec::new();
    let mut proj = Vec::new();
    for m in 0..k {
        for (q, name) in a.states.iter().enumerate() {
            states.push(tuple_name(&[name, &m.to_string()]));
            proj.push((q, m));
        }
    }
    let id = |q: usize, m: u32| m as usize * a.n_states() + q;
    let mut transitions = Vec::new();
    for m in 0..k {
        for tr in &a.transitions {
            transitions.push(t(id(tr.src, m), tr.letter, tr.priority, id(tr.dst, m)));
        }
    }
    let b = Automaton::new(a.alphabet.clone(), a.index, states, id(a.initial, 0), transitions).unwrap();
    (b, proj)
}

/// Raises the index of an automaton without touching priorities.
pub fn with_index(a: &Automaton, index: u32) -> Automaton {
    assert!(index % 2 == 0);
    let mut out = a.clone();
    assert!(out.transitions.iter().all(|t| t.priority <= index));
    out.index = index;
    out
}
