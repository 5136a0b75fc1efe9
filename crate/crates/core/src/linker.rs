//! Sense-to-sense linking and derivational graph queries.
//!
//! [`build_links`] gates each derivation on its MORELS score and then rates
//! every (derived sense, base sense) pair; [`update_graph`] writes the
//! results as paired link attributes, forward on the base and backward on the
//! derived side. [`DerivationalGraph`] reads those attributes back.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::analyzer::{analyze, AnalyzeOptions};
use crate::category::Category;
use crate::lexicon::{Lexicon, LexiconError, Link, Sense, SenseKey, WORD_LEVEL};
use crate::morels::{score_analysis, ScoreConfig};
use crate::morphemes::MorphemeTable;
use crate::records::Record;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkWeights {
    pub prep_match: i64,
    pub prep_miss: i64,
    pub domain_match: i64,
    pub domain_miss: i64,
    pub hyp_content_match: i64,
}

impl Default for LinkWeights {
    fn default() -> Self {
        Self {
            prep_match: 2,
            prep_miss: -1,
            domain_match: 5,
            domain_miss: -5,
            hyp_content_match: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error(
    "link weights must satisfy prep_match > 0 > prep_miss, domain_match > 0 > domain_miss and hyp_content_match > 0"
)]
pub struct InvalidWeights;

impl LinkWeights {
    pub fn validate(&self) -> Result<(), InvalidWeights> {
        let ok = self.prep_match > 0
            && self.prep_miss < 0
            && self.domain_match > 0
            && self.domain_miss < 0
            && self.hyp_content_match > 0;
        ok.then_some(()).ok_or(InvalidWeights)
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self {
            prep_match: self.prep_match * k,
            prep_miss: self.prep_miss * k,
            domain_match: self.domain_match * k,
            domain_miss: self.domain_miss * k,
            hyp_content_match: self.hyp_content_match * k,
        }
    }
}

fn collect_lemmas(rec: &Record, skip: &str, out: &mut BTreeSet<String>) {
    for (name, _) in rec.iter() {
        if name == skip {
            continue;
        }
        for r in rec.records(name) {
            if let Some(l) = r.atom("Lemma") {
                out.insert(l.to_lowercase());
            }
            collect_lemmas(r, skip, out);
        }
    }
}

/// Similarity of a derived sense to a base sense: shared subcategorized
/// prepositions, shared domains, and derived relation fillers that are base
/// hypernyms or their hypernyms.
pub fn link_senses(derived: &Sense, base: &Sense, lex: &Lexicon, w: &LinkWeights) -> i64 {
    let mut score = 0;
    for p in &derived.preps {
        score += if base.preps.contains(p) {
            w.prep_match
        } else {
            w.prep_miss
        };
    }
    let d_domains = derived.relation_lemmas("Domain");
    let b_domains = base.relation_lemmas("Domain");
    if !d_domains.is_empty() && !b_domains.is_empty() {
        for d in &d_domains {
            score += if b_domains.contains(d) {
                w.domain_match
            } else {
                w.domain_miss
            };
        }
    }
    let mut hyps = base.relation_lemmas("Hypernym");
    let upper: Vec<String> = hyps.iter().flat_map(|h| lex.hypernyms_of(h, None)).collect();
    hyps.extend(upper);
    let mut content = BTreeSet::new();
    collect_lemmas(&derived.relations, "Domain", &mut content);
    score += w.hyp_content_match * content.intersection(&hyps).count() as i64;
    score
}

/// One scored (derived sense, base sense) pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkTuple {
    pub derived: SenseKey,
    pub base: SenseKey,
    /// Attribute written on the base side.
    pub attr: String,
    /// Attribute written on the derived side.
    pub attr_of: String,
    pub score: i64,
}

impl LinkTuple {
    fn sort_key(&self) -> (&str, Category, u32, Category, u32, &str, &str) {
        (
            &self.derived.headword,
            self.derived.pos,
            self.derived.sense_no,
            self.base.pos,
            self.base.sense_no,
            &self.base.headword,
            &self.attr,
        )
    }

    /// `derived, pos, sense, base, pos, sense, score`.
    pub fn to_line(&self) -> String {
        alloc::format!(
            "{}, {}, {}, {}, {}, {}, {}",
            self.derived.headword,
            self.derived.pos.as_lower(),
            self.derived.sense_no,
            self.base.headword,
            self.base.pos.as_lower(),
            self.base.sense_no,
            self.score
        )
    }
}

impl fmt::Display for LinkTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// Sorts tuples into emission order.
pub fn sort_tuples(tuples: &mut [LinkTuple]) {
    tuples.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()).then_with(|| a.score.cmp(&b.score)));
}

/// Tuple file text, one sorted line per tuple.
pub fn format_tuples(tuples: &[LinkTuple]) -> String {
    let mut sorted = tuples.to_vec();
    sort_tuples(&mut sorted);
    let mut out = String::new();
    for t in &sorted {
        out.push_str(&t.to_line());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LinkOptions {
    pub analyze: AnalyzeOptions,
    pub score: ScoreConfig,
    pub weights: LinkWeights,
}

/// Scored sense pairs for every analysis of `word`. Derivations whose gate
/// score is not positive carry the gate score on every base sense.
pub fn build_links(word: &str, lex: &Lexicon, table: &MorphemeTable, opts: &LinkOptions) -> Vec<LinkTuple> {
    let mut best: BTreeMap<(SenseKey, SenseKey, String, String), i64> = BTreeMap::new();
    for a in analyze(word, table, lex, &opts.analyze) {
        let Some(m) = table.get(&a.outer().morpheme) else {
            continue;
        };
        let bases = lex.lookup(&a.base_surface, Some(a.base_pos));
        for derived in lex.lookup(word, Some(m.cat)) {
            let gate = score_analysis(&a, m, derived, lex, &opts.score).total;
            for base in &bases {
                let score = if gate > 0 {
                    link_senses(derived, base, lex, &opts.weights)
                } else {
                    gate
                };
                let key = (derived.key(), base.key(), m.attr.clone(), m.attr_of.clone());
                best.entry(key).and_modify(|s| *s = (*s).max(score)).or_insert(score);
            }
        }
    }
    let mut out: Vec<LinkTuple> = best
        .into_iter()
        .map(|((derived, base, attr, attr_of), score)| LinkTuple {
            derived,
            base,
            attr,
            attr_of,
            score,
        })
        .collect();
    sort_tuples(&mut out);
    out
}

/// The highest-scoring tuple for each derived sense. Ties go to the lowest
/// base sense number, then the base word.
pub fn best_links(tuples: &[LinkTuple]) -> Vec<&LinkTuple> {
    let mut best: BTreeMap<&SenseKey, &LinkTuple> = BTreeMap::new();
    for t in tuples {
        best.entry(&t.derived)
            .and_modify(|b| {
                let better = t.score > b.score
                    || (t.score == b.score
                        && (t.base.sense_no, &t.base.headword, t.base.pos)
                            < (b.base.sense_no, &b.base.headword, b.base.pos));
                if better {
                    *b = t;
                }
            })
            .or_insert(t);
    }
    best.into_values().collect()
}

/// Writes `tuples` into `lex`. Each positive tuple links its two senses in
/// both directions. A pair of words with no positive tuple at all is linked
/// once between their word-level pseudo-senses, with the lowest score found.
pub fn update_graph(lex: &mut Lexicon, tuples: &[LinkTuple]) -> Result<(), LexiconError> {
    type Group = (String, Category, String, Category, String, String);
    let mut groups: BTreeMap<Group, Vec<&LinkTuple>> = BTreeMap::new();
    for t in tuples {
        for key in [&t.derived, &t.base] {
            if lex.get(key).is_none() {
                return Err(LexiconError::UnknownSense(key.clone()));
            }
        }
        let g = (
            t.derived.headword.clone(),
            t.derived.pos,
            t.base.headword.clone(),
            t.base.pos,
            t.attr.clone(),
            t.attr_of.clone(),
        );
        groups.entry(g).or_default().push(t);
    }
    for ((dw, dp, bw, bp, attr, attr_of), members) in groups {
        let positive: Vec<&&LinkTuple> = members.iter().filter(|t| t.score > 0).collect();
        if positive.is_empty() {
            let score = members.iter().map(|t| t.score).min().unwrap_or(0);
            let d = lex.ensure_word_level(&dw, dp);
            let b = lex.ensure_word_level(&bw, bp);
            write_pair(lex, &d, &b, &attr, &attr_of, score)?;
        } else {
            for t in positive {
                write_pair(lex, &t.derived, &t.base, &attr, &attr_of, t.score)?;
            }
        }
    }
    Ok(())
}

fn write_pair(
    lex: &mut Lexicon,
    derived: &SenseKey,
    base: &SenseKey,
    attr: &str,
    attr_of: &str,
    score: i64,
) -> Result<(), LexiconError> {
    let to_derived = Link {
        lemma: derived.headword.clone(),
        pos: derived.pos,
        ldoce: derived.sense_no,
        morels: score,
    };
    let to_base = Link {
        lemma: base.headword.clone(),
        pos: base.pos,
        ldoce: base.sense_no,
        morels: score,
    };
    lex.apply_link(base, attr, &to_derived)?;
    lex.apply_link(derived, attr_of, &to_base)
}

/// A link attribute without its exact counterpart on the target sense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryViolation {
    pub from: SenseKey,
    pub attr: String,
    pub to: SenseKey,
    pub morels: i64,
}

/// Every link whose target lacks exactly one counterpart link back with the
/// same score.
pub fn check_symmetry(lex: &Lexicon, table: &MorphemeTable) -> Vec<SymmetryViolation> {
    let mut out = Vec::new();
    for sense in lex.senses() {
        for (attr, link) in sense.links() {
            let ok = table.counterpart(attr).is_some_and(|back| {
                lex.get(&link.target()).is_some_and(|t| {
                    t.links_under(back)
                        .filter(|l| l.target() == sense.key() && l.morels == link.morels)
                        .count()
                        == 1
                })
            });
            if !ok {
                out.push(SymmetryViolation {
                    from: sense.key(),
                    attr: attr.clone(),
                    to: link.target(),
                    morels: link.morels,
                });
            }
        }
    }
    out
}

/// Word-level derivational edges read from link attributes and run-ons.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DerivationalGraph {
    derivatives: BTreeMap<String, BTreeSet<String>>,
    bases: BTreeMap<String, BTreeSet<String>>,
}

impl DerivationalGraph {
    pub fn from_lexicon(lex: &Lexicon, table: &MorphemeTable) -> Self {
        let mut g = Self::default();
        for sense in lex.senses() {
            let here = sense.headword.to_lowercase();
            for (attr, link) in sense.links() {
                let there = link.lemma.to_lowercase();
                if table.is_forward_attr(attr) {
                    g.add_edge(&here, &there);
                } else if table.is_backward_attr(attr) {
                    g.add_edge(&there, &here);
                }
            }
        }
        for r in lex.runons() {
            g.add_edge(&r.base.to_lowercase(), &r.derived.to_lowercase());
        }
        g
    }

    pub fn add_edge(&mut self, base: &str, derived: &str) {
        if base == derived {
            return;
        }
        self.derivatives
            .entry(base.to_string())
            .or_default()
            .insert(derived.to_string());
        self.bases
            .entry(derived.to_string())
            .or_default()
            .insert(base.to_string());
    }

    pub fn bases_of(&self, lemma: &str) -> BTreeSet<String> {
        self.bases.get(&lemma.to_lowercase()).cloned().unwrap_or_default()
    }

    pub fn derivatives_of(&self, lemma: &str) -> BTreeSet<String> {
        self.derivatives.get(&lemma.to_lowercase()).cloned().unwrap_or_default()
    }

    /// `lemma` and every word connected to it by edges in either direction.
    pub fn family(&self, lemma: &str) -> BTreeSet<String> {
        let start = lemma.to_lowercase();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(w) = queue.pop_front() {
            let next = self.derivatives.get(&w).into_iter().chain(self.bases.get(&w)).flatten();
            for n in next {
                if seen.insert(n.clone()) {
                    queue.push_back(n.clone());
                }
            }
        }
        seen
    }

    /// All words with at least one edge.
    pub fn words(&self) -> BTreeSet<String> {
        self.derivatives.keys().chain(self.bases.keys()).cloned().collect()
    }

    pub fn edge_count(&self) -> usize {
        self.derivatives.values().map(BTreeSet::len).sum()
    }
}

/// Whether `key` names a word-level pseudo-sense.
pub fn is_word_level(key: &SenseKey) -> bool {
    key.sense_no == WORD_LEVEL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::load_lexicon;
    use crate::morphemes::load_morphemes;

    const TABLE: &str = r#"
{ Name ion Cat Noun PCat Verb NextMorphs (None) Attrs (Nomnlz NomnlzOf)
  Rules ("diver sion -> diver t" "invent ion -> invent")
  Hypernym {Lemmas (act change) Morels 2} }
{ Name er_denominal Cat Noun PCat Noun NextMorphs (None) Attrs (Profsn ProfsnOf)
  Rules ("bank er -> bank")
  Hypernym {Lemmas (person) Morels 2}
  SubjOf {Lemmas (know work) Morels 2 HasObj {Morels 10}} }
"#;

    const LEX: &str = r#"
{Headword "diversion" Cat Noun Ldoce 100 Defin "a change of direction" Preps (from)
 Hypernym {Lemma "change" HasObj {Lemma "direction"}}}
{Headword "divert" Cat Verb Ldoce 100 Defin "to change the direction" Preps (from)
 Hypernym {Lemma "change"}}
{Headword "divert" Cat Verb Ldoce 101 Defin "to amuse" Hypernym {Lemma "amuse"}}
{Headword "corner" Cat Noun Ldoce 100 Defin "the point where lines meet" Hypernym {Lemma "point"}}
{Headword "corn" Cat Noun Ldoce 100 Defin "grain" Hypernym {Lemma "grain"}}
{Headword "corn" Cat Noun Ldoce 101 Defin "a hard place on the foot" Hypernym {Lemma "place"}}
"#;

    fn setup() -> (Lexicon, MorphemeTable) {
        (load_lexicon(LEX).unwrap(), load_morphemes(TABLE).unwrap())
    }

    #[test]
    fn sense_similarity() {
        let (lex, _) = setup();
        let w = LinkWeights::default();
        let d = lex.get(&SenseKey::new("diversion", Category::Noun, 100)).unwrap();
        let b0 = lex.get(&SenseKey::new("divert", Category::Verb, 100)).unwrap();
        let b1 = lex.get(&SenseKey::new("divert", Category::Verb, 101)).unwrap();
        assert_eq!(link_senses(d, b0, &lex, &w), 2 + 5);
        assert_eq!(link_senses(d, b1, &lex, &w), -1);
        let c = lex.get(&SenseKey::new("corn", Category::Noun, 100)).unwrap();
        let c1 = lex.get(&SenseKey::new("corn", Category::Noun, 101)).unwrap();
        assert_eq!(link_senses(c, c1, &lex, &w), 0);
    }

    #[test]
    fn positive_links_are_symmetric() {
        let (mut lex, t) = setup();
        let tuples = build_links("diversion", &lex, &t, &LinkOptions::default());
        let scores: Vec<_> = tuples.iter().map(|x| (x.base.sense_no, x.score)).collect();
        assert_eq!(scores, [(100, 7), (101, -1)]);
        update_graph(&mut lex, &tuples).unwrap();
        let d = lex.get(&SenseKey::new("diversion", Category::Noun, 100)).unwrap();
        let links: Vec<_> = d.links_under("NomnlzOf").collect();
        assert_eq!(links.len(), 1);
        assert_eq!((links[0].ldoce, links[0].morels), (100, 7));
        assert!(check_symmetry(&lex, &t).is_empty());
        let g = DerivationalGraph::from_lexicon(&lex, &t);
        assert_eq!(g.bases_of("diversion").into_iter().collect::<Vec<_>>(), ["divert"]);
        assert_eq!(
            g.derivatives_of("divert").into_iter().collect::<Vec<_>>(),
            ["diversion"]
        );
    }

    #[test]
    fn best_links_break_ties_low() {
        let tuple = |d: u32, w: &str, n: u32, score: i64| LinkTuple {
            derived: SenseKey::new("x", Category::Noun, d),
            base: SenseKey::new(w, Category::Verb, n),
            attr: "A".into(),
            attr_of: "AOf".into(),
            score,
        };
        let ts = vec![
            tuple(100, "b", 103, 4),
            tuple(100, "b", 101, 4),
            tuple(100, "a", 101, 2),
            tuple(101, "b", 100, -4),
        ];
        let best: Vec<_> = best_links(&ts)
            .into_iter()
            .map(|t| (t.derived.sense_no, t.base.sense_no, t.score))
            .collect();
        assert_eq!(best, [(100, 101, 4), (101, 100, -4)]);
        assert!(best_links(&[]).is_empty());
    }

    #[test]
    fn failed_gate_links_words_only() {
        let (mut lex, t) = setup();
        let tuples = build_links("corner", &lex, &t, &LinkOptions::default());
        assert_eq!(tuples.len(), 2);
        assert!(tuples.iter().all(|x| x.score == -4));
        update_graph(&mut lex, &tuples).unwrap();
        let corner = lex.word_level("corner", Category::Noun).unwrap();
        let l: Vec<_> = corner.links_under("ProfsnOf").collect();
        assert_eq!(
            (l.len(), l[0].lemma.as_str(), l[0].ldoce, l[0].morels),
            (1, "corn", 0, -4)
        );
        for s in lex.lookup("corn", None) {
            assert!(s.links().is_empty());
        }
        assert!(check_symmetry(&lex, &t).is_empty());
        assert!(DerivationalGraph::from_lexicon(&lex, &t)
            .family("corn")
            .contains("corner"));
    }

    #[test]
    fn tuple_lines() {
        let t = LinkTuple {
            derived: SenseKey::new("viewer", Category::Noun, 100),
            base: SenseKey::new("view", Category::Verb, 119),
            attr: "Agent".into(),
            attr_of: "AgentOf".into(),
            score: 26,
        };
        assert_eq!(t.to_line(), "viewer, noun, 100, view, verb, 119, 26");
        assert_eq!(format_tuples(&[]), "");
    }

    #[test]
    fn update_is_idempotent_and_checks_keys() {
        let (mut lex, t) = setup();
        let tuples = build_links("diversion", &lex, &t, &LinkOptions::default());
        update_graph(&mut lex, &tuples).unwrap();
        let once: Vec<Record> = lex.records().cloned().collect();
        update_graph(&mut lex, &tuples).unwrap();
        assert_eq!(once, lex.records().cloned().collect::<Vec<_>>());
        let mut bad = tuples[0].clone();
        bad.base.sense_no = 999;
        assert!(matches!(
            update_graph(&mut lex, &[bad]),
            Err(LexiconError::UnknownSense(_))
        ));
        let before: Vec<Record> = lex.records().cloned().collect();
        update_graph(&mut lex, &[]).unwrap();
        assert_eq!(before, lex.records().cloned().collect::<Vec<_>>());
    }

    #[test]
    fn family_closure() {
        let mut g = DerivationalGraph::default();
        g.add_edge("believe", "belief");
        g.add_edge("belief", "disbelief");
        g.add_edge("believe", "believer");
        let fam = g.family("disbelief");
        assert_eq!(fam.len(), 4);
        for w in &fam {
            assert_eq!(g.family(w), fam);
        }
        assert_eq!(g.family("lonely").into_iter().collect::<Vec<_>>(), ["lonely"]);
        assert!(g.derivatives_of("lonely").is_empty());
    }

    #[test]
    fn weights() {
        assert!(LinkWeights::default().validate().is_ok());
        assert!(LinkWeights::default().scaled(3).validate().is_ok());
        let bad = LinkWeights {
            prep_miss: 1,
            ..LinkWeights::default()
        };
        assert_eq!(bad.validate(), Err(InvalidWeights));
    }
}
