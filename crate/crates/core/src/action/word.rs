use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator symbol or its inverse.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub symbol: String,
    pub inverse: bool,
}

impl Letter {
    pub fn new(symbol: impl Into<String>, inverse: bool) -> Self {
        Letter {
            symbol: symbol.into(),
            inverse,
        }
    }

    pub fn inv(&self) -> Letter {
        Letter {
            symbol: self.symbol.clone(),
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.symbol)
        } else {
            write!(f, "{}", self.symbol)
        }
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (sym, inverse) = match s
            .strip_suffix("^{-1}")
            .or_else(|| s.strip_suffix("^-1"))
        {
            Some(sym) => (sym, true),
            None => (s, false),
        };
        let valid = !sym.is_empty()
            && sym != "e"
            && sym.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::UnknownSymbol(s.to_string()));
        }
        Ok(Letter::new(sym, inverse))
    }
}

/// A word `l_1 l_2 … l_k`, acting as `l_1 ∘ l_2 ∘ … ∘ l_k` (the rightmost
/// letter acts first). The empty word is written `e`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::inv).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).cloned().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Whitespace-separated letters such as `s t^-1 s^{-1}`; `e` or the empty
    /// string is the identity.
    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .filter(|tok| *tok != "e")
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Free reduction: cancels adjacent symbol/inverse pairs until none remain.
pub fn reduce_word(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for l in &w.0 {
        if out.last().is_some_and(|last| *last == l.inv()) {
            out.pop();
        } else {
            out.push(l.clone());
        }
    }
    Word(out)
}
