use std::collections::BTreeMap;
use std::fmt;

use crate::{Error, Result};

/// A finite ordered set of input symbols. The neutral letter ε is not part of
/// the alphabet; it is represented by [`Letter::Eps`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index_of: BTreeMap<String, usize>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let mut index_of = BTreeMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if s == "eps" {
                return Err(Error::Invalid("`eps` is reserved for the neutral letter".into()));
            }
            if index_of.insert(s.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet { symbols, index_of })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(String::as_str)
    }

    pub fn position(&self, symbol: &str) -> Result<usize> {
        self.index_of
            .get(symbol)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// Resolves a symbol or the reserved spelling `eps`.
    pub fn letter(&self, token: &str) -> Result<Letter> {
        if token == "eps" {
            Ok(Letter::Eps)
        } else {
            Ok(Letter::Sym(self.position(token)?))
        }
    }

    pub fn display(&self, letter: Letter) -> &str {
        match letter {
            Letter::Eps => "eps",
            Letter::Sym(i) => self.symbol(i),
        }
    }

    /// All letters including ε, with ε last.
    pub fn letters_with_eps(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(Letter::Sym).chain(std::iter::once(Letter::Eps))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbols.join(" "))
    }
}

/// A symbol of the alphabet or the neutral letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Sym(usize),
    Eps,
}

impl Letter {
    pub fn is_eps(self) -> bool {
        matches!(self, Letter::Eps)
    }
}
