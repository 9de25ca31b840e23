use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};
use crate::map::GhmMap;

/// Stable words refine vertical strips, unstable words horizontal ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Stable,
    Unstable,
}

/// A finite, nonempty sequence of branch ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    symbols: Vec<usize>,
    orientation: Orientation,
}

impl Word {
    pub fn new(symbols: Vec<usize>, orientation: Orientation) -> Result<Self> {
        if symbols.is_empty() {
            return Err(GhmError::EmptyWord);
        }
        Ok(Self { symbols, orientation })
    }

    pub fn stable(symbols: &[usize]) -> Result<Self> {
        Self::new(symbols.to_vec(), Orientation::Stable)
    }

    pub fn unstable(symbols: &[usize]) -> Result<Self> {
        Self::new(symbols.to_vec(), Orientation::Unstable)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn with_orientation(&self, orientation: Orientation) -> Self {
        Self {
            symbols: self.symbols.clone(),
            orientation,
        }
    }

    /// Branch indices in `map`, or the first unknown symbol.
    pub fn indices(&self, map: &GhmMap) -> Result<Vec<usize>> {
        self.symbols
            .iter()
            .map(|&s| map.index_of(s).ok_or(GhmError::UnknownSymbol(s)))
            .collect()
    }

    /// The left shift `sigma`; `None` for a single symbol.
    pub fn shift(&self) -> Option<Self> {
        (self.len() > 1).then(|| Self {
            symbols: self.symbols[1..].to_vec(),
            orientation: self.orientation,
        })
    }

    pub fn reversed(&self) -> Self {
        Self {
            symbols: self.symbols.iter().rev().copied().collect(),
            orientation: self.orientation,
        }
    }

    pub fn prefix(&self, n: usize) -> Result<Self> {
        Self::new(self.symbols[..n.min(self.len())].to_vec(), self.orientation)
    }

    /// Repeats the word cyclically up to length `n`, or truncates it.
    pub fn periodic_extension(&self, n: usize) -> Result<Self> {
        Self::new(self.symbols.iter().copied().cycle().take(n).collect(), self.orientation)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Parses `1,2,1` (optionally parenthesized) as a stable word.
impl FromStr for Word {
    type Err = GhmError;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let symbols = body
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| GhmError::InvalidParameter(format!("bad symbol {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols, Orientation::Stable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_reverse_extend() {
        let w: Word = "(1,2,3)".parse().unwrap();
        assert_eq!(w.shift().unwrap().symbols(), &[2, 3]);
        assert_eq!(w.reversed().symbols(), &[3, 2, 1]);
        assert_eq!(w.periodic_extension(7).unwrap().symbols(), &[1, 2, 3, 1, 2, 3, 1]);
        assert!(Word::stable(&[1]).unwrap().shift().is_none());
        assert!(matches!(Word::stable(&[]), Err(GhmError::EmptyWord)));
        assert_eq!(w.to_string(), "(1,2,3)");
    }
}
