//! Zielonka trees of Muller conditions, the memory bound they induce, and a
//! deterministic parity automaton built from the tree (used to feed Muller
//! objectives to the game oracles).
//!
//! Conventions: a Muller condition is a family F of nonempty subsets of the
//! colour set; whether F contains the empty set is irrelevant (a finite
//! colour set always has a nonempty infinity set) and ignored.

use std::collections::BTreeSet;

use crate::automaton::tuple_name;
use crate::{Alphabet, Automaton, Error, Letter, Result, Transition};

/// A Muller condition over colours `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MullerCondition {
    pub n_colours: usize,
    pub family: BTreeSet<BTreeSet<usize>>,
}

impl MullerCondition {
    pub fn new(n_colours: usize, family: impl IntoIterator<Item = BTreeSet<usize>>) -> Result<Self> {
        let family: BTreeSet<BTreeSet<usize>> =
            family.into_iter().filter(|s| !s.is_empty()).collect();
        if let Some(s) = family.iter().flat_map(|s| s.iter()).find(|&&c| c >= n_colours) {
            return Err(Error::Invalid(format!("colour {s} out of range")));
        }
        Ok(MullerCondition { n_colours, family })
    }

    pub fn contains(&self, set: &BTreeSet<usize>) -> bool {
        self.family.contains(set)
    }
}

/// The alternating-membership subset tree: each node is labelled by a
/// nonempty subset of the colours, the root by all of them, and the children
/// of a node are the maximal subsets of its label with flipped membership.
#[derive(Debug, Clone)]
pub struct ZielonkaTree {
    pub labels: Vec<BTreeSet<usize>>,
    pub in_family: Vec<bool>,
    pub children: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
}

impl ZielonkaTree {
    pub fn build(cond: &MullerCondition) -> Result<Self> {
        if cond.n_colours == 0 {
            return Err(Error::Invalid("empty colour set".into()));
        }
        let mut t = ZielonkaTree {
            labels: Vec::new(),
            in_family: Vec::new(),
            children: Vec::new(),
            parent: Vec::new(),
        };
        let root_label: BTreeSet<usize> = (0..cond.n_colours).collect();
        t.grow(cond, root_label, None);
        Ok(t)
    }

    fn grow(&mut self, cond: &MullerCondition, label: BTreeSet<usize>, parent: Option<usize>) -> usize {
        let node = self.labels.len();
        let inside = cond.contains(&label);
        self.labels.push(label.clone());
        self.in_family.push(inside);
        self.children.push(Vec::new());
        self.parent.push(parent);
        // maximal nonempty subsets with flipped membership
        let mut flipped: Vec<BTreeSet<usize>> = subsets_of(&label)
            .into_iter()
            .filter(|s| !s.is_empty() && s != &label && cond.contains(s) != inside)
            .collect();
        flipped.sort_by_key(|a| std::cmp::Reverse(a.len()));
        let mut maximal: Vec<BTreeSet<usize>> = Vec::new();
        for s in flipped {
            if !maximal.iter().any(|m| s.is_subset(m)) {
                maximal.push(s);
            }
        }
        for s in maximal {
            let child = self.grow(cond, s, Some(node));
            self.children[node].push(child);
        }
        node
    }

    pub fn depth(&self, node: usize) -> u32 {
        match self.parent[node] {
            None => 0,
            Some(p) => 1 + self.depth(p),
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.labels.len()).filter(|&v| self.children[v].is_empty()).collect()
    }

    /// Min-parity rank of a node: even iff the label is in the family.
    pub fn rank(&self, node: usize) -> u32 {
        let root_in = self.in_family[0];
        self.depth(node) + if root_in { 0 } else { 1 }
    }
}

fn subsets_of(set: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let items: Vec<usize> = set.iter().copied().collect();
    let mut out = Vec::with_capacity(1 << items.len());
    for mask in 0u64..(1 << items.len()) {
        out.push(
            items
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &c)| c)
                .collect(),
        );
    }
    out
}

/// The memory bound read off the Zielonka tree: leaves count 1, nodes inside
/// the family add up their children, nodes outside take the maximum.
pub fn muller_memory(cond: &MullerCondition) -> Result<u32> {
    let tree = ZielonkaTree::build(cond)?;
    fn rec(t: &ZielonkaTree, v: usize) -> u32 {
        if t.children[v].is_empty() {
            return 1;
        }
        let kids = t.children[v].iter().map(|&c| rec(t, c));
        if t.in_family[v] {
            kids.sum()
        } else {
            kids.max().unwrap()
        }
    }
    Ok(rec(&tree, 0))
}

/// Deterministic min-parity automaton for a Muller condition, with states
/// the leaves of the Zielonka tree: reading colour c from leaf ℓ finds the
/// deepest node on ℓ's branch whose label contains c, emits that node's
/// rank, and moves to the leftmost leaf under the node's next child.
pub fn zielonka_dpa(cond: &MullerCondition, alphabet: &Alphabet) -> Result<Automaton> {
    if alphabet.len() != cond.n_colours {
        return Err(Error::Invalid("alphabet size must match the colour count".into()));
    }
    let tree = ZielonkaTree::build(cond)?;
    let leaves = tree.leaves();
    let max_rank = leaves.iter().map(|&l| tree.rank(l)).max().unwrap_or(0);
    let index = max_rank + max_rank % 2;
    let leaf_pos = |l: usize| leaves.iter().position(|&x| x == l).unwrap();
    let mut transitions = Vec::new();
    for (i, &leaf) in leaves.iter().enumerate() {
        for c in 0..cond.n_colours {
            // deepest ancestor-or-self containing c
            let mut node = leaf;
            while !tree.labels[node].contains(&c) {
                node = tree.parent[node].expect("root contains every colour");
            }
            let priority = tree.rank(node);
            let next_leaf = if tree.children[node].is_empty() {
                node
            } else {
                // advance to the next child after the one holding `leaf`
                let on_branch = |child: usize| -> bool {
                    let mut cur = leaf;
                    loop {
                        if cur == child {
                            return true;
                        }
                        match tree.parent[cur] {
                            Some(p) => cur = p,
                            None => return false,
                        }
                    }
                };
                let kids = &tree.children[node];
                let pos = kids.iter().position(|&k| on_branch(k));
                let next = match pos {
                    Some(p) => kids[(p + 1) % kids.len()],
                    None => kids[0],
                };
                leftmost_leaf(&tree, next)
            };
            transitions.push(Transition {
                src: i,
                letter: Letter::Sym(c),
                priority,
                dst: leaf_pos(next_leaf),
            });
        }
    }
    let states: Vec<String> = leaves
        .iter()
        .map(|&l| {
            tuple_name(
                &tree.labels[l]
                    .iter()
                    .map(|c| alphabet.symbol(*c).to_string())
                    .collect::<Vec<_>>()
                    .iter()
                    .map(String::as_str)
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    // leaf names may repeat across branches; disambiguate
    let mut names = Vec::new();
    for (i, s) in states.iter().enumerate() {
        if states[..i].contains(s) {
            names.push(format!("{s}#{i}"));
        } else {
            names.push(s.clone());
        }
    }
    Automaton::new(alphabet.clone(), index, names, 0, transitions)
}

fn leftmost_leaf(tree: &ZielonkaTree, node: usize) -> usize {
    let mut cur = node;
    while let Some(&first) = tree.children[cur].first() {
        cur = first;
    }
    cur
}

/// The condition "at least two distinct colours occur infinitely often".
pub fn two_distinct_condition(n: usize) -> MullerCondition {
    let family = subsets_of(&(0..n).collect())
        .into_iter()
        .filter(|s| s.len() >= 2)
        .collect::<Vec<_>>();
    MullerCondition::new(n, family).unwrap()
}

/// The union-of-groups condition over {a1,a2,b1,b2}: the infinity set holds
/// two a-colours or two b-colours.
pub fn union_pairs_condition() -> MullerCondition {
    let family = subsets_of(&(0..4).collect())
        .into_iter()
        .filter(|s| {
            let a = s.iter().filter(|&&c| c < 2).count();
            let b = s.iter().filter(|&&c| c >= 2).count();
            a >= 2 || b >= 2
        })
        .collect::<Vec<_>>();
    MullerCondition::new(4, family).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::equivalent;
    use crate::zoo;

    #[test]
    fn parity_shaped_family_is_positional() {
        // chain tree: colours 0..3, F = families whose minimum is even
        let sets = super::subsets_of(&(0..3).collect());
        let family: Vec<BTreeSet<usize>> =
            sets.into_iter().filter(|s| s.iter().min().map(|&m| m % 2 == 0).unwrap_or(false)).collect();
        let cond = MullerCondition::new(3, family).unwrap();
        assert_eq!(muller_memory(&cond).unwrap(), 1);
    }

    #[test]
    fn two_distinct_needs_n() {
        for n in 2..=5 {
            assert_eq!(muller_memory(&two_distinct_condition(n)).unwrap(), n as u32);
        }
    }

    #[test]
    fn union_condition_needs_four() {
        assert_eq!(muller_memory(&union_pairs_condition()).unwrap(), 4);
    }

    #[test]
    fn empty_family_and_full_family_are_trivial() {
        let cond = MullerCondition::new(2, Vec::<BTreeSet<usize>>::new()).unwrap();
        assert_eq!(muller_memory(&cond).unwrap(), 1);
        let full = MullerCondition::new(2, super::subsets_of(&(0..2).collect())).unwrap();
        assert_eq!(muller_memory(&full).unwrap(), 1);
    }

    #[test]
    fn zielonka_dpa_matches_hand_built_automaton() {
        for n in 2..=4 {
            let cond = two_distinct_condition(n);
            let alphabet = Alphabet::new((1..=n).map(|i| i.to_string())).unwrap();
            let dpa = zielonka_dpa(&cond, &alphabet).unwrap();
            let reference = zoo::two_letters_io(n);
            let rep = equivalent(&dpa, &reference).unwrap();
            assert!(rep.holds, "n={n}: {:?}", rep.counterexample);
        }
    }

    #[test]
    fn zielonka_dpa_matches_infinity_sets_on_random_words() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let all = super::subsets_of(&(0..3).collect());
        // a few structurally different families
        let families: Vec<Vec<BTreeSet<usize>>> = vec![
            all.iter().filter(|s| s.len() == 1).cloned().collect(),
            all.iter().filter(|s| s.len() == 3).cloned().collect(),
            all.iter().filter(|s| s.contains(&0)).cloned().collect(),
            all.iter().filter(|s| s.len() % 2 == 1).cloned().collect(),
            all.iter().filter(|s| !s.contains(&2) || s.len() >= 2).cloned().collect(),
        ];
        let alphabet = Alphabet::new(["x", "y", "z"]).unwrap();
        for family in families {
            let cond = MullerCondition::new(3, family).unwrap();
            let dpa = zielonka_dpa(&cond, &alphabet).unwrap();
            for _ in 0..2000 {
                let period: Vec<usize> =
                    (0..rng.gen_range(1..5)).map(|_| rng.gen_range(0..3)).collect();
                let prefix: Vec<usize> =
                    (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..3)).collect();
                let inf: BTreeSet<usize> = period.iter().copied().collect();
                let w = crate::UltimatelyPeriodicWord::new(
                    prefix.iter().map(|&c| alphabet.symbol(c).to_string()),
                    period.iter().map(|&c| alphabet.symbol(c).to_string()),
                )
                .unwrap();
                assert_eq!(
                    dpa.accepts(&w).unwrap(),
                    cond.contains(&inf),
                    "family {:?}, word {w}",
                    cond.family
                );
            }
        }
    }
}
