use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use morels_core::analyzer::{analyze, Analysis};
use morels_core::category::Category;

use crate::corpus::{Corpus, Error};

fn analyses_as(corpus: &Corpus, word: &str, pos: Category) -> Vec<Analysis> {
    analyze(word, &corpus.morphemes, &corpus.lexicon, &corpus.options.analyze)
        .into_iter()
        .filter(|a| corpus.morphemes.get(&a.outer().morpheme).is_some_and(|m| m.cat == pos))
        .collect()
}

/// `(morpheme, headword count)` rows, most frequent first.
pub fn affix_counts(corpus: &Corpus) -> Vec<(String, usize)> {
    let entries: BTreeSet<(String, Category)> = corpus
        .lexicon
        .headwords()
        .into_iter()
        .map(|(w, p)| (w.to_lowercase(), p))
        .collect();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (word, pos) in &entries {
        let used: BTreeSet<String> = analyses_as(corpus, word, *pos)
            .into_iter()
            .flat_map(|a| a.chain.into_iter().map(|s| s.morpheme))
            .collect();
        for m in used {
            *counts.entry(m).or_default() += 1;
        }
    }
    let mut rows: Vec<_> = counts.into_iter().collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows
}

pub fn affix_table(rows: &[(String, usize)]) -> String {
    let width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    rows.iter().map(|(n, c)| format!("{n:<width$}  {c}\n")).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Agreement {
    pub matched: usize,
    pub total: usize,
    pub ambiguous: usize,
    pub unmatched: Vec<(String, Category, String)>,
}

impl Agreement {
    pub fn ratio(&self) -> f64 {
        self.matched as f64 / self.total as f64
    }
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matched {}", self.matched)?;
        writeln!(f, "total {}", self.total)?;
        writeln!(f, "ratio {:.4}", self.ratio())?;
        writeln!(f, "ambiguous {}", self.ambiguous)?;
        for (d, p, b) in &self.unmatched {
            writeln!(f, "unmatched {d} {} {b}", p.as_lower())?;
        }
        Ok(())
    }
}

/// Compares analyses against the run-on entries. A run-on matches when a
/// single-affix analysis yields its base, or when it is marked flattened and
/// any analysis does.
pub fn agreement(corpus: &Corpus) -> Result<Agreement, Error> {
    let gold = corpus.lexicon.gold_runons();
    if gold.is_empty() {
        return Err(Error::NoGold);
    }
    let flattened: BTreeSet<(String, String)> = corpus
        .lexicon
        .flattening_exceptions()
        .into_iter()
        .map(|(d, b)| (d.to_lowercase(), b.to_lowercase()))
        .collect();
    let mut report = Agreement {
        matched: 0,
        total: gold.len(),
        ambiguous: 0,
        unmatched: Vec::new(),
    };
    for (derived, pos, base) in gold {
        let (d, b) = (derived.to_lowercase(), base.to_lowercase());
        let found = analyses_as(corpus, &d, pos);
        if found.len() > 1 {
            report.ambiguous += 1;
        }
        let flat = flattened.contains(&(d.clone(), b.clone()));
        if found.iter().any(|a| a.base_surface == b && (a.depth() == 1 || flat)) {
            report.matched += 1;
        } else {
            report.unmatched.push((derived, pos, base));
        }
    }
    Ok(report)
}
