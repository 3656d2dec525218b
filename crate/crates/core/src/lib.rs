//! Finite transition-based min-parity automata and the machinery around
//! strategy memory for the omega-regular objectives they recognise.
//!
//! The crate is organised around a handful of pillars:
//!
//! - [`automaton`]: parity automata with priorities on transitions, including
//!   ε-transitions that carry priorities themselves. Acceptance is min-parity:
//!   a run is accepting iff the liminf of its priority word is even. Language
//!   algorithms (ε-elimination, complementation of deterministic automata,
//!   inclusion and equivalence via lasso search, cascade products, blowups,
//!   determinisation by pruning) live here and in [`language`].
//! - [`completeness`]: the k-wise ε-completeness check and the validation of
//!   ε-completions, together with breakpoint tables.
//! - [`solver`]: memory computation for deterministic automata by searching
//!   blowup + signature-completion certificates.
//! - [`games`]: finite games, a Zielonka-style solver, brute-force bounded
//!   memory oracles, Zielonka trees for Muller conditions, the structuration
//!   of well-founded graphs and the two-state strategy for "two letters
//!   infinitely often" arenas controlled by one player.
//! - [`universal`]: the signature graph S_κ^d, progress-measure lifting of
//!   priority-labelled graphs into it, and universal graphs obtained by
//!   cascading a completion with S_κ^d.
//! - [`union_product`]: the deterministic union automaton for two parity
//!   languages, its nondeterministic relaxation, and the ε-completion of a
//!   product of two completions.
//! - [`combinatorics`]: regular n-words, synchronised subwords and the
//!   extraction lemma, lasso simplification, constant-label subtree
//!   extraction, and the closed-form game-size bound.
//! - [`io`]: the line-oriented text formats used by the command line tool.
//!
//! All values are immutable inputs to pure functions; nothing in the crate
//! keeps hidden state, so everything can be shared across threads freely.

pub mod alphabet;
pub mod automaton;
pub mod combinatorics;
pub mod completeness;
mod error;
pub mod games;
pub mod graph;
pub mod io;
pub mod language;
pub mod solver;
pub mod union_product;
pub mod universal;
pub mod word;
pub mod zoo;

pub use alphabet::{Alphabet, Letter};
pub use automaton::{Automaton, MemoryPartition, Transition};
pub use error::Error;
pub use graph::{DGraph, LabelledGraph};
pub use word::UltimatelyPeriodicWord;

/// Shorthand used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
