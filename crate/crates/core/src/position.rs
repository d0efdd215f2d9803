//! Tree positions in Dewey decimal notation.

use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// A path from the root of a binary tree: each step is `1` (major / antecedent)
/// or `2` (minor / consequent). The empty path is the root, printed as `ε`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(Vec<u8>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn from_steps(steps: &[u8]) -> Self {
        assert!(steps.iter().all(|&s| s == 1 || s == 2), "position steps must be 1 or 2");
        Position(steps.to_vec())
    }

    pub fn steps(&self) -> &[u8] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self.step`
    pub fn child(&self, step: u8) -> Self {
        debug_assert!(step == 1 || step == 2);
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(step);
        Position(v)
    }

    /// `self.other`, i.e. `other` re-rooted below `self`.
    pub fn concat(&self, other: &Position) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Position(v)
    }

    /// True if `self` is a prefix of `other` (`self ≤ other`).
    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Position {
    type Err = ParseError;

    /// Accepts `ε`, `e`, the empty string, or dot-separated 1s and 2s.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "e" {
            return Ok(Position::root());
        }
        let mut steps = Vec::new();
        let mut offset = 0;
        for part in s.split('.') {
            match part {
                "1" => steps.push(1),
                "2" => steps.push(2),
                _ => return Err(ParseError::new(offset, format!("bad position step {part:?}"))),
            }
            offset += part.len() + 1;
        }
        Ok(Position(steps))
    }
}
