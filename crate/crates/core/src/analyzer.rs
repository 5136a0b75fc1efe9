//! Affix-stripping analysis of surface words.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::category::Category;
use crate::lexicon::Lexicon;
use crate::morphemes::{AllomorphRule, Morpheme, MorphemeTable, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub max_depth: usize,
    /// Shortest stem, in characters, left after removing an affix.
    pub min_stem_len: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            max_depth: 3,
            min_stem_len: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChainStep {
    pub morpheme: String,
    pub rule: AllomorphRule,
}

/// One segmentation of a surface word into a base and a chain of affixes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Analysis {
    pub surface: String,
    pub base_surface: String,
    pub base_pos: Category,
    /// Outermost affix first.
    pub chain: Vec<ChainStep>,
}

impl Analysis {
    pub fn depth(&self) -> usize {
        self.chain.len()
    }

    pub fn outer(&self) -> &ChainStep {
        &self.chain[0]
    }

    fn sort_key(&self) -> (usize, &str, Vec<&str>, &Vec<ChainStep>) {
        (
            self.depth(),
            &self.base_surface,
            self.chain.iter().map(|s| s.morpheme.as_str()).collect(),
            &self.chain,
        )
    }

    /// Bracket notation such as `[[geography_Noun]+er]`, using each
    /// morpheme's short label.
    pub fn bracketed(&self, table: &MorphemeTable) -> String {
        let mut out = alloc::format!("[{}_{}]", self.base_surface, self.base_pos.as_atom());
        for step in self.chain.iter().rev() {
            let (label, side) = match table.get(&step.morpheme) {
                Some(m) => (m.label(), m.side),
                None => (step.morpheme.as_str(), step.rule.side),
            };
            out = match side {
                Side::Suffix => alloc::format!("[{out}+{label}]"),
                Side::Prefix => alloc::format!("[{label}+{out}]"),
            };
        }
        out
    }
}

/// All lexicon-confirmed analyses of `word`, ordered by depth, base surface
/// and morpheme names.
pub fn analyze(word: &str, table: &MorphemeTable, lex: &Lexicon, opts: &AnalyzeOptions) -> Vec<Analysis> {
    let word = word.to_lowercase();
    let mut out = Vec::new();
    if !word.is_empty() && opts.max_depth > 0 {
        explore(&word, &word, None, &mut Vec::new(), table, lex, opts, &mut out);
    }
    let mut seen = BTreeSet::new();
    out.retain(|a: &Analysis| seen.insert((a.base_surface.clone(), a.base_pos, a.chain.clone())));
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out
}

#[allow(clippy::too_many_arguments)]
fn explore(
    surface: &str,
    form: &str,
    outer: Option<&Morpheme>,
    chain: &mut Vec<ChainStep>,
    table: &MorphemeTable,
    lex: &Lexicon,
    opts: &AnalyzeOptions,
    out: &mut Vec<Analysis>,
) {
    for (m, rule) in table.morphemes_for_affix(form) {
        let allowed = match outer {
            None => m.may_end_word(),
            Some(o) => m.may_precede(o),
        };
        if !allowed || rule.stem(form).is_none_or(|s| s.chars().count() < opts.min_stem_len) {
            continue;
        }
        let Some(base) = rule.base_of(form) else { continue };
        chain.push(ChainStep {
            morpheme: m.name.clone(),
            rule: rule.clone(),
        });
        if lex.has(&base, m.pcat) {
            out.push(Analysis {
                surface: surface.to_string(),
                base_surface: base.clone(),
                base_pos: m.pcat,
                chain: chain.clone(),
            });
        }
        if chain.len() < opts.max_depth {
            explore(surface, &base, Some(m), chain, table, lex, opts, out);
        }
        chain.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthesisError {
    #[error("{form:?} does not carry the base side {replacement:?} of rule for affix {affix:?}")]
    ReplacementMismatch {
        form: String,
        affix: String,
        replacement: String,
    },
}

/// Rebuilds a surface word from its base by applying `chain` innermost
/// first.
pub fn synthesize(base: &str, chain: &[ChainStep]) -> Result<String, SynthesisError> {
    let mut form = base.to_string();
    for step in chain.iter().rev() {
        form = step
            .rule
            .derive(&form)
            .ok_or_else(|| SynthesisError::ReplacementMismatch {
                form: form.clone(),
                affix: step.rule.affix.clone(),
                replacement: step.rule.replacement.clone(),
            })?;
    }
    Ok(form)
}
