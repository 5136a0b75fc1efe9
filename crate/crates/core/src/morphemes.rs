//! Morpheme tables.
//!
//! A morpheme table is a record in the lexicon format:
//!
//! ```text
//! { Name er_denominal  Cat Noun  PCat Noun
//!   NextMorphs (Noun_Plural None)
//!   Rules ("geograph er -> geograph y" "bank er -> bank")
//!   Attrs (Profsn ProfsnOf)
//!   Hypernym {Lemmas (person) Morels 2}
//!   SubjOf {Lemmas (know work) Morels 2 HasObj {Morels 10}} }
//! ```
//!
//! Rules are written as worked examples; compiling one discards the example
//! stem and keeps the affix and the base-side replacement, so
//! `geograph er -> geograph y` becomes "strip `er`, append `y`". Every other
//! record-valued attribute is a relation of the weighted template used for
//! scoring.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::category::Category;
use crate::records::{parse_records, ParseError, Record, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Prefix,
    Suffix,
}

/// An affix rewrite: `stem ++ affix` (or `affix ++ stem`) on the derived side
/// corresponds to `stem ++ replacement` (or `replacement ++ stem`) on the base
/// side.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AllomorphRule {
    pub affix: String,
    pub side: Side,
    pub replacement: String,
}

impl AllomorphRule {
    pub fn suffix(affix: &str, replacement: &str) -> Self {
        Self {
            affix: affix.to_string(),
            side: Side::Suffix,
            replacement: replacement.to_string(),
        }
    }

    pub fn prefix(affix: &str, replacement: &str) -> Self {
        Self {
            affix: affix.to_string(),
            side: Side::Prefix,
            replacement: replacement.to_string(),
        }
    }

    /// The stem left after removing the affix, if `word` carries it and the
    /// stem is non-empty.
    pub fn stem<'w>(&self, word: &'w str) -> Option<&'w str> {
        let stem = match self.side {
            Side::Suffix => word.strip_suffix(self.affix.as_str())?,
            Side::Prefix => word.strip_prefix(self.affix.as_str())?,
        };
        (!stem.is_empty()).then_some(stem)
    }

    /// Base surface hypothesized for a derived `word`.
    pub fn base_of(&self, word: &str) -> Option<String> {
        let stem = self.stem(word)?;
        Some(match self.side {
            Side::Suffix => [stem, &self.replacement].concat(),
            Side::Prefix => [&self.replacement, stem].concat(),
        })
    }

    /// Derived surface for `base`; the inverse of [`AllomorphRule::base_of`].
    pub fn derive(&self, base: &str) -> Option<String> {
        Some(match self.side {
            Side::Suffix => [base.strip_suffix(self.replacement.as_str())?, &self.affix].concat(),
            Side::Prefix => [&self.affix, base.strip_prefix(self.replacement.as_str())?].concat(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("malformed rule example {0:?}")]
    BadRuleSyntax(String),
    #[error("rule example {0:?} uses different stems on each side")]
    StemMismatch(String),
}

/// Compiles a worked example such as `"saddl er -> saddl e"`.
///
/// Suffix examples read `stem affix -> stem [replacement]`; prefix examples
/// read `affix stem -> [replacement] stem`.
pub fn compile_rule(example: &str, side: Side) -> Result<AllomorphRule, RuleError> {
    let bad = || RuleError::BadRuleSyntax(example.to_string());
    let (lhs, rhs) = example.split_once("->").ok_or_else(bad)?;
    let lhs: Vec<&str> = lhs.split_whitespace().collect();
    let rhs: Vec<&str> = rhs.split_whitespace().collect();
    if lhs.len() != 2 || rhs.is_empty() || rhs.len() > 2 {
        return Err(bad());
    }
    let (stem, affix, rhs_stem, replacement) = match side {
        Side::Suffix => (lhs[0], lhs[1], rhs[0], rhs.get(1).copied().unwrap_or("")),
        Side::Prefix => {
            let (repl, s) = if rhs.len() == 2 { (rhs[0], rhs[1]) } else { ("", rhs[0]) };
            (lhs[1], lhs[0], s, repl)
        }
    };
    if stem != rhs_stem {
        return Err(RuleError::StemMismatch(example.to_string()));
    }
    Ok(AllomorphRule {
        affix: affix.to_lowercase(),
        side,
        replacement: replacement.to_lowercase(),
    })
}

/// One weighted relation of a morpheme's template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateSlot {
    pub relation: String,
    /// Acceptable lemmas, lowercased. Empty means the slot stands for the
    /// base word itself.
    pub lemmas: Vec<String>,
    pub weight: i64,
    pub subs: Vec<TemplateSlot>,
}

impl TemplateSlot {
    pub fn is_base_placeholder(&self) -> bool {
        self.lemmas.is_empty()
    }

    /// Slots in this subtree, depth first, this slot included.
    pub fn walk(&self) -> Vec<&TemplateSlot> {
        let mut out = alloc::vec![self];
        for s in &self.subs {
            out.extend(s.walk());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morpheme {
    pub name: String,
    pub cat: Category,
    pub pcat: Category,
    pub side: Side,
    pub next_morphs: Vec<String>,
    pub rules: Vec<AllomorphRule>,
    pub template: Vec<TemplateSlot>,
    pub attr: String,
    pub attr_of: String,
    pub defin: Option<String>,
    pub exs: Vec<String>,
}

impl Morpheme {
    /// Whether the morpheme may end a word.
    pub fn may_end_word(&self) -> bool {
        self.next_morphs.iter().any(|m| m == "None")
    }

    /// Whether morpheme `outer` may attach on top of this one.
    pub fn may_precede(&self, outer: &Morpheme) -> bool {
        self.cat == outer.pcat && self.next_morphs.contains(&outer.name)
    }

    /// Short affix label for bracket notation: the name up to its first `_`.
    pub fn label(&self) -> &str {
        self.name.split('_').next().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorphemeError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("morpheme {morpheme:?} lacks field {field}")]
    MissingField { morpheme: String, field: &'static str },
    #[error("morpheme {morpheme:?}: {source}")]
    Rule { morpheme: String, source: RuleError },
    #[error("morpheme {morpheme:?} has no rules")]
    NoRules { morpheme: String },
    #[error("duplicate morpheme name {0:?}")]
    DuplicateMorphemeName(String),
    #[error("morpheme {morpheme:?}: bad value {value:?} for {field}")]
    BadValue {
        morpheme: String,
        field: &'static str,
        value: String,
    },
    #[error("morpheme {morpheme:?}: template relation {relation} needs a positive Morels weight")]
    BadWeight { morpheme: String, relation: String },
    #[error("morpheme {morpheme:?}: link attribute pair must be two distinct names")]
    BadAttrPair { morpheme: String },
    #[error("attribute {0:?} is used both as a forward and a backward link")]
    ConflictingAttr(String),
}

impl MorphemeError {
    /// Both an empty `Rules` list and a malformed example are rule syntax
    /// problems; this groups them for callers that only care about that.
    pub fn is_rule_syntax(&self) -> bool {
        matches!(
            self,
            MorphemeError::NoRules { .. }
                | MorphemeError::Rule {
                    source: RuleError::BadRuleSyntax(_),
                    ..
                }
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct MorphemeTable {
    morphemes: Vec<Morpheme>,
    by_name: BTreeMap<String, usize>,
    suffixes: BTreeMap<String, Vec<(usize, usize)>>,
    prefixes: BTreeMap<String, Vec<(usize, usize)>>,
}

/// Loads morpheme tables from record text.
pub fn load_morphemes(text: &str) -> Result<MorphemeTable, MorphemeError> {
    MorphemeTable::from_records(parse_records(text)?)
}

fn parse_slot(morpheme: &str, relation: &str, rec: &Record) -> Result<TemplateSlot, MorphemeError> {
    let weight = rec
        .atom("Morels")
        .and_then(|w| w.parse::<i64>().ok())
        .filter(|w| *w > 0)
        .ok_or_else(|| MorphemeError::BadWeight {
            morpheme: morpheme.to_string(),
            relation: relation.to_string(),
        })?;
    let mut lemmas: Vec<String> = rec.atoms("Lemmas").into_iter().map(str::to_lowercase).collect();
    lemmas.extend(rec.atoms("Lemma").into_iter().map(str::to_lowercase));
    let mut subs = Vec::new();
    for (name, value) in rec.iter() {
        if matches!(value, Value::Rec(_) | Value::RecList(_)) {
            for r in rec.records(name) {
                subs.push(parse_slot(morpheme, name, r)?);
            }
        }
    }
    Ok(TemplateSlot {
        relation: relation.to_string(),
        lemmas,
        weight,
        subs,
    })
}

fn morpheme_from_record(rec: &Record, index: usize) -> Result<Morpheme, MorphemeError> {
    let name = rec
        .atom("Name")
        .ok_or_else(|| MorphemeError::MissingField {
            morpheme: alloc::format!("#{index}"),
            field: "Name",
        })?
        .to_string();
    let missing = |field: &'static str| MorphemeError::MissingField {
        morpheme: name.clone(),
        field,
    };
    let category = |field: &'static str| -> Result<Category, MorphemeError> {
        let raw = rec.atom(field).ok_or_else(|| missing(field))?;
        raw.parse().map_err(|_| MorphemeError::BadValue {
            morpheme: name.clone(),
            field,
            value: raw.to_string(),
        })
    };
    let cat = category("Cat")?;
    let pcat = category("PCat")?;
    let side = match rec.atom("Side") {
        None => Side::Suffix,
        Some(s) if s.eq_ignore_ascii_case("suffix") => Side::Suffix,
        Some(s) if s.eq_ignore_ascii_case("prefix") => Side::Prefix,
        Some(s) => {
            return Err(MorphemeError::BadValue {
                morpheme: name.clone(),
                field: "Side",
                value: s.to_string(),
            })
        }
    };
    if rec.get("NextMorphs").is_none() {
        return Err(missing("NextMorphs"));
    }
    let next_morphs = rec.atoms("NextMorphs").into_iter().map(str::to_string).collect();

    if rec.get("Rules").is_none() {
        return Err(missing("Rules"));
    }
    let examples = rec.atoms("Rules");
    if examples.is_empty() {
        return Err(MorphemeError::NoRules { morpheme: name });
    }
    let mut rules: Vec<AllomorphRule> = Vec::new();
    for ex in examples {
        let rule = compile_rule(ex, side).map_err(|source| MorphemeError::Rule {
            morpheme: name.clone(),
            source,
        })?;
        if !rules.contains(&rule) {
            rules.push(rule);
        }
    }

    let (attr, attr_of) = match rec.get("Attrs") {
        None => ("Deriv".to_string(), "DerivOf".to_string()),
        Some(_) => match rec.atoms("Attrs").as_slice() {
            [a, b] if !a.is_empty() && !b.is_empty() && a != b => (a.to_string(), b.to_string()),
            _ => return Err(MorphemeError::BadAttrPair { morpheme: name }),
        },
    };

    let mut template = Vec::new();
    for (relation, value) in rec.iter() {
        if matches!(value, Value::Rec(_) | Value::RecList(_)) {
            for r in rec.records(relation) {
                template.push(parse_slot(&name, relation, r)?);
            }
        }
    }

    Ok(Morpheme {
        defin: rec.atom("Defin").map(str::to_string),
        exs: rec.atoms("Exs").into_iter().map(str::to_string).collect(),
        name,
        cat,
        pcat,
        side,
        next_morphs,
        rules,
        template,
        attr,
        attr_of,
    })
}

impl MorphemeTable {
    pub fn from_records(records: impl IntoIterator<Item = Record>) -> Result<Self, MorphemeError> {
        let mut morphemes = Vec::new();
        for (i, rec) in records.into_iter().enumerate() {
            morphemes.push(morpheme_from_record(&rec, i)?);
        }
        Self::from_morphemes(morphemes)
    }

    pub fn from_morphemes(morphemes: Vec<Morpheme>) -> Result<Self, MorphemeError> {
        let mut table = MorphemeTable::default();
        for (mi, m) in morphemes.iter().enumerate() {
            if table.by_name.insert(m.name.clone(), mi).is_some() {
                return Err(MorphemeError::DuplicateMorphemeName(m.name.clone()));
            }
            if m.attr.is_empty() || m.attr_of.is_empty() || m.attr == m.attr_of {
                return Err(MorphemeError::BadAttrPair {
                    morpheme: m.name.clone(),
                });
            }
            for (ri, r) in m.rules.iter().enumerate() {
                let index = match r.side {
                    Side::Suffix => &mut table.suffixes,
                    Side::Prefix => &mut table.prefixes,
                };
                index.entry(r.affix.clone()).or_default().push((mi, ri));
            }
        }
        for m in &morphemes {
            if morphemes.iter().any(|o| o.attr_of == m.attr) {
                return Err(MorphemeError::ConflictingAttr(m.attr.clone()));
            }
        }
        table.morphemes = morphemes;
        Ok(table)
    }

    pub fn morphemes(&self) -> &[Morpheme] {
        &self.morphemes
    }

    pub fn get(&self, name: &str) -> Option<&Morpheme> {
        self.by_name.get(name).map(|&i| &self.morphemes[i])
    }

    /// Every `(forward, backward)` link attribute pair in the table.
    pub fn attr_pairs(&self) -> Vec<(&str, &str)> {
        let mut pairs: Vec<_> = self
            .morphemes
            .iter()
            .map(|m| (m.attr.as_str(), m.attr_of.as_str()))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    /// The backward attribute paired with forward attribute `attr`, or the
    /// forward one paired with backward `attr`.
    pub fn counterpart(&self, attr: &str) -> Option<&str> {
        self.morphemes.iter().find_map(|m| {
            if m.attr == attr {
                Some(m.attr_of.as_str())
            } else if m.attr_of == attr {
                Some(m.attr.as_str())
            } else {
                None
            }
        })
    }

    pub fn is_forward_attr(&self, attr: &str) -> bool {
        self.morphemes.iter().any(|m| m.attr == attr)
    }

    pub fn is_backward_attr(&self, attr: &str) -> bool {
        self.morphemes.iter().any(|m| m.attr_of == attr)
    }

    /// All `(morpheme, rule)` pairs whose affix `word` carries with a
    /// non-empty stem. Longer affixes come first, then morpheme name, then
    /// longer replacements.
    pub fn morphemes_for_affix(&self, word: &str) -> Vec<(&Morpheme, &AllomorphRule)> {
        let mut hits = Vec::new();
        for (i, _) in word.char_indices().skip(1) {
            if let Some(entries) = self.suffixes.get(&word[i..]) {
                hits.extend(entries.iter().copied());
            }
            if let Some(entries) = self.prefixes.get(&word[..i]) {
                hits.extend(entries.iter().copied());
            }
        }
        let mut out: Vec<(&Morpheme, &AllomorphRule)> = hits
            .into_iter()
            .map(|(mi, ri)| (&self.morphemes[mi], &self.morphemes[mi].rules[ri]))
            .filter(|(_, r)| r.stem(word).is_some())
            .collect();
        out.sort_by(|(ma, ra), (mb, rb)| {
            rb.affix
                .chars()
                .count()
                .cmp(&ra.affix.chars().count())
                .then_with(|| ma.name.cmp(&mb.name))
                .then_with(|| rb.replacement.chars().count().cmp(&ra.replacement.chars().count()))
                .then_with(|| ra.cmp(rb))
        });
        out
    }
}
