//! Scores a candidate derivation by comparing the derived sense's semantic
//! relations with the weighted relation template of the outermost morpheme.
//!
//! Each template relation is first checked for presence: if the derived sense
//! lacks the relation, or one of the nested relations under it, the
//! derivation fails outright with [`ScoreConfig::fail_score`]. Otherwise the
//! slot earns its weight by a direct lexical match, by a hypernym of the
//! derived filler (for `Hypernym` slots), or by finding the filler in a
//! definition of the base word.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::analyzer::Analysis;
use crate::category::Category;
use crate::lexicon::{Lexicon, Sense};
use crate::morphemes::{Morpheme, TemplateSlot};
use crate::records::Record;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoreConfig {
    pub fail_score: i64,
    pub fallback_uses_slot_weight: bool,
    /// Restrict the hypernym lookup to the derived word's part of speech.
    pub hypernym_same_pos: bool,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        Self {
            fail_score: -4,
            fallback_uses_slot_weight: true,
            hypernym_same_pos: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    DirectMatch,
    HypernymFallback,
    BaseContentFallback,
    SlotMiss,
    RelationMissing,
}

impl Outcome {
    pub fn as_atom(self) -> &'static str {
        match self {
            Outcome::DirectMatch => "DirectMatch",
            Outcome::HypernymFallback => "HypernymFallback",
            Outcome::BaseContentFallback => "BaseContentFallback",
            Outcome::SlotMiss => "SlotMiss",
            Outcome::RelationMissing => "RelationMissing",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_atom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreStep {
    /// Relation names from the top of the template, joined with `/`.
    pub path: String,
    pub outcome: Outcome,
    pub delta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreTrace {
    pub total: i64,
    pub steps: Vec<ScoreStep>,
}

impl ScoreTrace {
    pub fn failed(&self) -> bool {
        self.steps.iter().any(|s| s.outcome == Outcome::RelationMissing)
    }

    /// Recomputes the total from the steps alone.
    pub fn replay(&self, cfg: &ScoreConfig) -> i64 {
        if self.failed() {
            cfg.fail_score
        } else {
            self.steps.iter().map(|s| s.delta).sum()
        }
    }

    pub fn to_record(&self) -> Record {
        let mut rec = Record::new().with_atom("Total", self.total.to_string());
        for s in &self.steps {
            rec.push_record(
                "Step",
                Record::new()
                    .with_atom("Path", s.path.clone())
                    .with_atom("Outcome", s.outcome.as_atom())
                    .with_atom("Delta", s.delta.to_string()),
            );
        }
        rec
    }
}

fn lemma_of(rec: &Record) -> Option<String> {
    rec.atom("Lemma").map(str::to_lowercase)
}

fn slot_accepts(slot: &TemplateSlot, lemma: &str, base_lemma: &str) -> bool {
    if slot.is_base_placeholder() {
        lemma == base_lemma
    } else {
        slot.lemmas.iter().any(|l| l == lemma)
    }
}

/// Whether `derived_rel` fills `slot` lexically: its lemma is one of the
/// slot's lemmas (or the base, for a base placeholder), and every nested
/// slot is filled by some nested relation of the same name.
pub fn match_lexical(slot: &TemplateSlot, derived_rel: &Record, base_lemma: &str) -> bool {
    let base_lemma = base_lemma.to_lowercase();
    matches_rec(slot, derived_rel, &base_lemma)
}

fn matches_rec(slot: &TemplateSlot, rel: &Record, base_lemma: &str) -> bool {
    lemma_of(rel).is_some_and(|l| slot_accepts(slot, &l, base_lemma))
        && slot
            .subs
            .iter()
            .all(|sub| rel.records(&sub.relation).any(|r| matches_rec(sub, r, base_lemma)))
}

/// Whether a direct hypernym of `derived_lemma` is among `slot_lemmas`.
pub fn hypernym_fallback(
    derived_lemma: &str,
    slot_lemmas: &BTreeSet<String>,
    lex: &Lexicon,
    pos: Option<Category>,
) -> bool {
    lex.hypernyms_of(derived_lemma, pos)
        .iter()
        .any(|h| slot_lemmas.contains(h))
}

/// Lemmas found at depth one or two under any relation of a sense.
fn shallow_lemmas(sense: &Sense) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for (name, _) in sense.relations.iter() {
        for top in sense.relations.records(name) {
            out.extend(lemma_of(top));
            for (inner, _) in top.iter() {
                out.extend(top.records(inner).filter_map(lemma_of));
            }
        }
    }
    out
}

fn nested_found(slot: &TemplateSlot, rel: &Record, found: &BTreeSet<String>, base_lemma: &str) -> bool {
    slot.subs.iter().all(|sub| {
        rel.records(&sub.relation).any(|child| {
            lemma_of(child).is_some_and(|l| found.contains(&l) || slot_accepts(sub, &l, base_lemma))
                && nested_found(sub, child, found, base_lemma)
        })
    })
}

fn base_sense_supporting<'l>(
    base_lemma: &str,
    base_pos: Option<Category>,
    derived_rel: &Record,
    slot: &TemplateSlot,
    lex: &'l Lexicon,
) -> Option<&'l Sense> {
    let lemma = lemma_of(derived_rel)?;
    lex.lookup(base_lemma, base_pos).into_iter().find(|sense| {
        let found = shallow_lemmas(sense);
        found.contains(&lemma) && nested_found(slot, derived_rel, &found, base_lemma)
    })
}

/// Whether some sense of `base_lemma` mentions the filler of `derived_rel`
/// within two levels of its relations, with every nested slot's filler (or
/// the base itself, for a base placeholder) found in that same sense.
pub fn base_content_fallback(
    base_lemma: &str,
    base_pos: Option<Category>,
    derived_rel: &Record,
    slot: &TemplateSlot,
    lex: &Lexicon,
) -> bool {
    let base_lemma = base_lemma.to_lowercase();
    base_sense_supporting(&base_lemma, base_pos, derived_rel, slot, lex).is_some()
}

struct Scorer<'a> {
    base_lemma: String,
    base_pos: Category,
    derived_pos: Category,
    lex: &'a Lexicon,
    cfg: &'a ScoreConfig,
    steps: Vec<ScoreStep>,
}

impl Scorer<'_> {
    fn push(&mut self, path: &str, outcome: Outcome, delta: i64) {
        self.steps.push(ScoreStep {
            path: path.to_string(),
            outcome,
            delta,
        });
    }

    fn fallback_delta(&self, slot: &TemplateSlot) -> i64 {
        if self.cfg.fallback_uses_slot_weight {
            slot.weight
        } else {
            1
        }
    }

    fn slot(&mut self, slot: &TemplateSlot, path: &str, candidates: &[&Record]) {
        let matched: Vec<&Record> = candidates
            .iter()
            .copied()
            .filter(|r| matches_rec(slot, r, &self.base_lemma))
            .collect();
        if !matched.is_empty() {
            self.push(path, Outcome::DirectMatch, slot.weight);
            self.subs(slot, path, &matched);
            return;
        }
        if slot.relation == "Hypernym" {
            let wanted: BTreeSet<String> = if slot.is_base_placeholder() {
                [self.base_lemma.clone()].into_iter().collect()
            } else {
                slot.lemmas.iter().cloned().collect()
            };
            let pos = self.cfg.hypernym_same_pos.then_some(self.derived_pos);
            let ok = candidates
                .iter()
                .filter_map(|r| lemma_of(r))
                .any(|l| hypernym_fallback(&l, &wanted, self.lex, pos));
            if ok {
                let d = self.fallback_delta(slot);
                self.push(path, Outcome::HypernymFallback, d);
            } else {
                self.push(path, Outcome::SlotMiss, 0);
            }
            self.subs(slot, path, candidates);
            return;
        }
        let supported = candidates
            .iter()
            .any(|r| base_sense_supporting(&self.base_lemma, Some(self.base_pos), r, slot, self.lex).is_some());
        if supported {
            self.credit_fallback(slot, path);
        } else {
            self.push(path, Outcome::SlotMiss, 0);
            self.subs(slot, path, candidates);
        }
    }

    fn credit_fallback(&mut self, slot: &TemplateSlot, path: &str) {
        let d = self.fallback_delta(slot);
        self.push(path, Outcome::BaseContentFallback, d);
        for sub in &slot.subs {
            let sub_path = alloc::format!("{path}/{}", sub.relation);
            self.credit_fallback(sub, &sub_path);
        }
    }

    fn subs(&mut self, slot: &TemplateSlot, path: &str, parents: &[&Record]) {
        for sub in &slot.subs {
            let children: Vec<&Record> = parents.iter().flat_map(|p| p.records(&sub.relation)).collect();
            let sub_path = alloc::format!("{path}/{}", sub.relation);
            self.slot(sub, &sub_path, &children);
        }
    }
}

/// The first relation path of `slot` that is absent under `recs`.
fn missing_path(slot: &TemplateSlot, path: &str, recs: &[&Record]) -> Option<String> {
    if recs.is_empty() {
        return Some(path.to_string());
    }
    for sub in &slot.subs {
        let children: Vec<&Record> = recs.iter().flat_map(|r| r.records(&sub.relation)).collect();
        if let Some(p) = missing_path(sub, &alloc::format!("{path}/{}", sub.relation), &children) {
            return Some(p);
        }
    }
    None
}

/// Scores `derived` as a sense derived from `analysis.base_surface` by
/// `morpheme`, the outermost morpheme of the analysis.
pub fn score_analysis(
    analysis: &Analysis,
    morpheme: &Morpheme,
    derived: &Sense,
    lex: &Lexicon,
    cfg: &ScoreConfig,
) -> ScoreTrace {
    // Deeper chains are scored against the immediate base form.
    let mut base_lemma = analysis.base_surface.to_lowercase();
    for step in analysis.chain.iter().skip(1).rev() {
        base_lemma = step.rule.derive(&base_lemma).unwrap_or(base_lemma);
    }
    score_template(&morpheme.template, &base_lemma, morpheme.pcat, derived, lex, cfg)
}

/// Scores `derived` against `template` with `base_lemma` as the base.
pub fn score_template(
    template: &[TemplateSlot],
    base_lemma: &str,
    base_pos: Category,
    derived: &Sense,
    lex: &Lexicon,
    cfg: &ScoreConfig,
) -> ScoreTrace {
    let mut scorer = Scorer {
        base_lemma: base_lemma.to_lowercase(),
        base_pos,
        derived_pos: derived.pos,
        lex,
        cfg,
        steps: Vec::new(),
    };
    for slot in template {
        let candidates: Vec<&Record> = derived.relations.records(&slot.relation).collect();
        if let Some(path) = missing_path(slot, &slot.relation, &candidates) {
            scorer.push(&path, Outcome::RelationMissing, 0);
            return ScoreTrace {
                total: cfg.fail_score,
                steps: scorer.steps,
            };
        }
        scorer.slot(slot, &slot.relation, &candidates);
    }
    let total = scorer.steps.iter().map(|s| s.delta).sum();
    ScoreTrace {
        total,
        steps: scorer.steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{load_lexicon, SenseKey};
    use crate::morphemes::load_morphemes;
    use crate::records::parse_record;

    const ER: &str = r#"
{ Name er_denominal Cat Noun PCat Noun NextMorphs (None)
  Rules ("geograph er -> geograph y" "bank er -> bank")
  Hypernym {Lemmas (person) Morels 2}
  SubjOf {Lemmas (know work) Morels 2 HasObj {Morels 10}} }"#;

    fn slot(text: &str, rel: &str) -> TemplateSlot {
        let t = load_morphemes(&alloc::format!(
            "{{Name x Cat Noun PCat Noun NextMorphs (None) Rules (\"a b -> a\") {rel} {text}}}"
        ))
        .unwrap();
        t.get("x").unwrap().template[0].clone()
    }

    #[test]
    fn lexical_matching() {
        let s = slot("{Lemmas (know work) Morels 2}", "SubjOf");
        assert!(match_lexical(
            &s,
            &parse_record("{Lemma \"know\"}").unwrap(),
            "geography"
        ));
        assert!(!match_lexical(
            &s,
            &parse_record("{Lemma \"keep\"}").unwrap(),
            "geography"
        ));
        let b = slot("{Morels 10}", "HasObj");
        assert!(match_lexical(
            &b,
            &parse_record("{Lemma \"geography\"}").unwrap(),
            "geography"
        ));
        assert!(!match_lexical(
            &b,
            &parse_record("{Lemma \"map\"}").unwrap(),
            "geography"
        ));
        let nested = slot("{Lemmas (know) Morels 2 HasObj {Morels 10}}", "SubjOf");
        let rel = parse_record("{Lemma \"know\" HasObj {Lemma \"geography\"}}").unwrap();
        assert!(match_lexical(&nested, &rel, "geography"));
        assert!(!match_lexical(&nested, &rel, "map"));
    }

    const LEX: &str = r#"
{Headword "geographer" Cat Noun Ldoce 100 Defin "a person who studies geography"
 Hypernym {Lemma "person"}
 SubjOf {Lemma "study" HasObj {Lemma "geography"}}
 SubjOf {Lemma "know" HasObj {Lemma "geography"}}}
{Headword "geography" Cat Noun Ldoce 100 Defin "the study of the earth"}
{Headword "player" Cat Noun Ldoce 100 Defin "a person who plays" Hypernym {Lemma "person"}}
{Headword "player" Cat Verb Ldoce 100 Defin "odd verb" Hypernym {Lemma "thing"}}
{Headword "plate" Cat Noun Ldoce 100 Defin "a flat dish" Hypernym {Lemma "dish"}}
"#;

    fn score(word: &str, base: &str) -> ScoreTrace {
        let lex = load_lexicon(LEX).unwrap();
        let t = load_morphemes(ER).unwrap();
        let m = t.get("er_denominal").unwrap();
        let d = lex.get(&SenseKey::new(word, Category::Noun, 100)).unwrap();
        score_template(&m.template, base, Category::Noun, d, &lex, &ScoreConfig::default())
    }

    #[test]
    fn geographer_trace() {
        let tr = score("geographer", "geography");
        assert_eq!(tr.total, 14);
        let outcomes: Vec<_> = tr.steps.iter().map(|s| (s.path.as_str(), s.outcome, s.delta)).collect();
        assert_eq!(
            outcomes,
            [
                ("Hypernym", Outcome::DirectMatch, 2),
                ("SubjOf", Outcome::DirectMatch, 2),
                ("SubjOf/HasObj", Outcome::DirectMatch, 10),
            ]
        );
        assert_eq!(tr.replay(&ScoreConfig::default()), 14);
        let rec = tr.to_record();
        assert_eq!(rec.atom("Total"), Some("14"));
        assert_eq!(rec.get_all("Step").len(), 3);
    }

    #[test]
    fn missing_relation_fails() {
        let tr = score("plate", "plat");
        assert_eq!(tr.total, -4);
        assert!(tr.failed());
        assert_eq!(tr.steps.last().unwrap().path, "SubjOf");
    }

    #[test]
    fn hypernym_lookup() {
        let lex = load_lexicon(LEX).unwrap();
        let person: BTreeSet<String> = ["person".to_string()].into_iter().collect();
        assert!(hypernym_fallback("player", &person, &lex, Some(Category::Noun)));
        assert!(!hypernym_fallback("zzz", &person, &lex, None));
        assert!(!hypernym_fallback("plate", &person, &lex, None));
        let thing: BTreeSet<String> = ["thing".to_string()].into_iter().collect();
        assert!(!hypernym_fallback("player", &thing, &lex, Some(Category::Noun)));
        assert!(hypernym_fallback("player", &thing, &lex, None));
    }

    #[test]
    fn base_content() {
        let lex = load_lexicon(
            r#"{Headword "cartography" Cat Noun Ldoce 100 Defin "the science or art of making maps"
                Hypernym {Lemma "make" HasObj {Lemma "map"}}}"#,
        )
        .unwrap();
        let s = slot("{Lemmas (know work) Morels 2 HasObj {Morels 10}}", "SubjOf");
        let rel = parse_record("{Lemma \"make\" HasObj {Lemma \"map\"}}").unwrap();
        assert!(base_content_fallback("cartography", None, &rel, &s, &lex));
        let other = parse_record("{Lemma \"make\" HasObj {Lemma \"globe\"}}").unwrap();
        assert!(!base_content_fallback("cartography", None, &other, &s, &lex));
        assert!(!base_content_fallback("zzz", None, &rel, &s, &lex));
    }
}
