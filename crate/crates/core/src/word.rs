use std::fmt;

use crate::{Alphabet, Error, Result};

/// A finite witness `u·v^ω` for an infinite word: `prefix` then `period`
/// repeated forever. Both parts range over the alphabet proper (never ε);
/// the period is nonempty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct UltimatelyPeriodicWord {
    pub prefix: Vec<String>,
    pub period: Vec<String>,
}

impl UltimatelyPeriodicWord {
    pub fn new<I, J, S, T>(prefix: I, period: J) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let w = UltimatelyPeriodicWord {
            prefix: prefix.into_iter().map(Into::into).collect(),
            period: period.into_iter().map(Into::into).collect(),
        };
        if w.period.is_empty() {
            return Err(Error::Invalid("period must be nonempty".into()));
        }
        Ok(w)
    }

    /// Resolves every symbol against `alphabet`, reporting the first unknown one.
    pub fn resolve(&self, alphabet: &Alphabet) -> Result<(Vec<usize>, Vec<usize>)> {
        let prefix = self.prefix.iter().map(|s| alphabet.position(s)).collect::<Result<_>>()?;
        let period = self.period.iter().map(|s| alphabet.position(s)).collect::<Result<_>>()?;
        Ok((prefix, period))
    }

    /// The symbol at position `i` of the infinite word.
    pub fn at(&self, i: usize) -> &str {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }
}

impl fmt::Display for UltimatelyPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})^w", self.prefix.join(""), self.period.join(""))
    }
}
