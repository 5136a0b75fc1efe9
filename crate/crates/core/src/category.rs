//! Parts of speech.

use core::fmt;
use core::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Noun,
    Verb,
    Adj,
    Adv,
}

impl Category {
    pub const ALL: [Category; 4] = [Category::Noun, Category::Verb, Category::Adj, Category::Adv];

    /// The atom used in record files (`Noun`, `Verb`, ...).
    pub fn as_atom(self) -> &'static str {
        match self {
            Category::Noun => "Noun",
            Category::Verb => "Verb",
            Category::Adj => "Adj",
            Category::Adv => "Adv",
        }
    }

    /// Lowercase form used in tuple files.
    pub fn as_lower(self) -> &'static str {
        match self {
            Category::Noun => "noun",
            Category::Verb => "verb",
            Category::Adj => "adj",
            Category::Adv => "adv",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_atom())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("unknown part of speech")]
pub struct UnknownCategory;

impl FromStr for Category {
    type Err = UnknownCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_atom().eq_ignore_ascii_case(s))
            .ok_or(UnknownCategory)
    }
}
