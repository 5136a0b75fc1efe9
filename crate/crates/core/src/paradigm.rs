//! Inflectional paradigms selected by a sense's `Paradigm` marker.
//!
//! ```text
//! { Name DEFAULT
//!   Slot {Name ThirdSg Rules ("walk s -> walk")}
//!   Slot {Name Past Rules ("walk ed -> walk" "danc ed -> danc e")} }
//! { Name SING Inherit DEFAULT
//!   Slot {Name Past Rules ("s ang -> s ing")} }
//! { Name DREAM Inherit DEFAULT
//!   Slot {Name Past Forms (dreamt) Regular Yes} }
//! ```
//!
//! A slot in a child paradigm replaces the parent's slot of the same name.
//! `Forms` lists explicit forms; with `Regular Yes` the regular form from
//! the rules (or the parent's rules) is listed first.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::morphemes::{compile_rule, AllomorphRule, RuleError, Side};
use crate::records::{parse_records, ParseError, Record};

pub const DEFAULT_PARADIGM: &str = "DEFAULT";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParadigmSlot {
    pub name: String,
    pub rules: Vec<AllomorphRule>,
    pub forms: Vec<String>,
    pub regular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paradigm {
    pub name: String,
    pub slots: Vec<ParadigmSlot>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParadigmError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("paradigm record {index} lacks {field}")]
    MissingField { index: usize, field: &'static str },
    #[error("paradigm {paradigm}: {source}")]
    Rule { paradigm: String, source: RuleError },
    #[error("paradigm {0} is defined twice")]
    DuplicateParadigm(String),
    #[error("paradigm {paradigm} declares slot {slot} twice")]
    DuplicateSlot { paradigm: String, slot: String },
    #[error("paradigm {paradigm} inherits from unknown {parent}")]
    UnknownParent { paradigm: String, parent: String },
    #[error("paradigm {0} inherits from itself")]
    InheritanceCycle(String),
}

/// Paradigms by name, with inheritance resolved.
#[derive(Debug, Clone, Default)]
pub struct ParadigmSet {
    paradigms: BTreeMap<String, Paradigm>,
}

struct RawParadigm {
    parent: Option<String>,
    slots: Vec<ParadigmSlot>,
}

fn slot_from_record(paradigm: &str, rec: &Record, index: usize) -> Result<ParadigmSlot, ParadigmError> {
    let name = rec.atom("Name").ok_or(ParadigmError::MissingField {
        index,
        field: "Slot Name",
    })?;
    let mut rules = Vec::new();
    for ex in rec.atoms("Rules") {
        let rule = compile_rule(ex, Side::Suffix).map_err(|source| ParadigmError::Rule {
            paradigm: paradigm.to_string(),
            source,
        })?;
        if !rules.contains(&rule) {
            rules.push(rule);
        }
    }
    Ok(ParadigmSlot {
        name: name.to_string(),
        rules,
        forms: rec.atoms("Forms").into_iter().map(str::to_string).collect(),
        regular: rec.atom("Regular").is_some_and(|v| v.eq_ignore_ascii_case("yes")),
    })
}

/// Loads paradigm records.
pub fn load_paradigms(text: &str) -> Result<ParadigmSet, ParadigmError> {
    ParadigmSet::from_records(&parse_records(text)?)
}

impl ParadigmSet {
    pub fn from_records(records: &[Record]) -> Result<Self, ParadigmError> {
        let mut raw: BTreeMap<String, RawParadigm> = BTreeMap::new();
        for (index, rec) in records.iter().enumerate() {
            let name = rec
                .atom("Name")
                .ok_or(ParadigmError::MissingField { index, field: "Name" })?;
            let mut slots: Vec<ParadigmSlot> = Vec::new();
            for s in rec.records("Slot") {
                let slot = slot_from_record(name, s, index)?;
                if slots.iter().any(|o| o.name == slot.name) {
                    return Err(ParadigmError::DuplicateSlot {
                        paradigm: name.to_string(),
                        slot: slot.name,
                    });
                }
                slots.push(slot);
            }
            let entry = RawParadigm {
                parent: rec.atom("Inherit").map(str::to_string),
                slots,
            };
            if raw.insert(name.to_string(), entry).is_some() {
                return Err(ParadigmError::DuplicateParadigm(name.to_string()));
            }
        }
        let mut paradigms = BTreeMap::new();
        for name in raw.keys() {
            paradigms.insert(name.clone(), resolve(name, &raw)?);
        }
        Ok(Self { paradigms })
    }

    pub fn get(&self, name: &str) -> Option<&Paradigm> {
        self.paradigms.get(name)
    }

    /// The named paradigm, falling back to `DEFAULT` when `name` is absent.
    pub fn select(&self, name: Option<&str>) -> Option<&Paradigm> {
        name.and_then(|n| self.get(n)).or_else(|| self.get(DEFAULT_PARADIGM))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.paradigms.keys().map(String::as_str)
    }
}

fn resolve(name: &str, raw: &BTreeMap<String, RawParadigm>) -> Result<Paradigm, ParadigmError> {
    let mut lineage = Vec::new();
    let mut seen = BTreeSet::new();
    let mut cur = name;
    loop {
        if !seen.insert(cur) {
            return Err(ParadigmError::InheritanceCycle(name.to_string()));
        }
        let p = raw.get(cur).ok_or_else(|| ParadigmError::UnknownParent {
            paradigm: lineage.last().map_or(name, |(n, _)| *n).to_string(),
            parent: cur.to_string(),
        })?;
        lineage.push((cur, p));
        match &p.parent {
            Some(parent) => cur = parent,
            None => break,
        }
    }
    let mut slots: Vec<ParadigmSlot> = Vec::new();
    for (_, p) in lineage.into_iter().rev() {
        for slot in &p.slots {
            let mut slot = slot.clone();
            if let Some(old) = slots.iter_mut().find(|s| s.name == slot.name) {
                if slot.rules.is_empty() {
                    slot.rules = old.rules.clone();
                }
                *old = slot;
            } else {
                slots.push(slot);
            }
        }
    }
    Ok(Paradigm {
        name: name.to_string(),
        slots,
    })
}

fn regular_form(lemma: &str, rules: &[AllomorphRule]) -> Option<String> {
    let mut best: Option<&AllomorphRule> = None;
    for r in rules {
        if lemma.ends_with(r.replacement.as_str())
            && best.is_none_or(|b| r.replacement.chars().count() > b.replacement.chars().count())
        {
            best = Some(r);
        }
    }
    best.and_then(|r| r.derive(lemma))
}

/// `(slot, form)` pairs for `lemma`, in slot order. A slot with both a
/// regular and an explicit form yields one pair per form.
pub fn generate_paradigm(lemma: &str, paradigm: &Paradigm) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for slot in &paradigm.slots {
        let mut forms = Vec::new();
        if slot.forms.is_empty() || slot.regular {
            forms.extend(regular_form(lemma, &slot.rules));
        }
        forms.extend(slot.forms.iter().cloned());
        let mut seen = BTreeSet::new();
        for f in forms {
            if seen.insert(f.clone()) {
                out.push((slot.name.clone(), f));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const PARADIGMS: &str = r#"
{ Name DEFAULT
  Slot {Name ThirdSg Rules ("walk s -> walk")}
  Slot {Name Gerund Rules ("walk ing -> walk" "danc ing -> danc e")}
  Slot {Name Past Rules ("walk ed -> walk" "danc ed -> danc e")}
  Slot {Name PastPart Rules ("walk ed -> walk" "danc ed -> danc e")} }
{ Name SING Inherit DEFAULT
  Slot {Name Past Rules ("s ang -> s ing")}
  Slot {Name PastPart Rules ("s ung -> s ing")} }
{ Name DREAM Inherit DEFAULT
  Slot {Name Past Forms (dreamt) Regular Yes}
  Slot {Name PastPart Forms (dreamt) Regular Yes} }
"#;

    fn forms(lemma: &str, name: &str) -> Vec<(String, String)> {
        let set = load_paradigms(PARADIGMS).unwrap();
        generate_paradigm(lemma, set.get(name).unwrap())
    }

    fn pairs(items: &[(&str, &str)]) -> Vec<(String, String)> {
        items.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn regular_default() {
        assert_eq!(
            forms("ring", "DEFAULT"),
            pairs(&[
                ("ThirdSg", "rings"),
                ("Gerund", "ringing"),
                ("Past", "ringed"),
                ("PastPart", "ringed")
            ])
        );
        let dance: Vec<_> = forms("dance", "DEFAULT").into_iter().map(|(_, f)| f).collect();
        assert_eq!(dance, ["dances", "dancing", "danced", "danced"]);
    }

    #[test]
    fn irregular_sing() {
        assert_eq!(
            forms("sing", "SING"),
            pairs(&[
                ("ThirdSg", "sings"),
                ("Gerund", "singing"),
                ("Past", "sang"),
                ("PastPart", "sung")
            ])
        );
    }

    #[test]
    fn dual_forms() {
        assert_eq!(
            forms("dream", "DREAM"),
            pairs(&[
                ("ThirdSg", "dreams"),
                ("Gerund", "dreaming"),
                ("Past", "dreamed"),
                ("Past", "dreamt"),
                ("PastPart", "dreamed"),
                ("PastPart", "dreamt"),
            ])
        );
    }

    #[test]
    fn explicit_forms_override() {
        let set = load_paradigms("{Name GO Slot {Name Past Forms (went) Rules (\"walk ed -> walk\")}}").unwrap();
        assert_eq!(
            generate_paradigm("go", set.get("GO").unwrap()),
            pairs(&[("Past", "went")])
        );
    }

    #[test]
    fn selection_falls_back_to_default() {
        let set = load_paradigms(PARADIGMS).unwrap();
        assert_eq!(set.select(Some("SING")).unwrap().name, "SING");
        assert_eq!(set.select(Some("NOPE")).unwrap().name, "DEFAULT");
        assert_eq!(set.select(None).unwrap().name, "DEFAULT");
        assert_eq!(set.names().collect::<Vec<_>>(), vec!["DEFAULT", "DREAM", "SING"]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            load_paradigms("{Name A Inherit B}"),
            Err(ParadigmError::UnknownParent { .. })
        ));
        assert!(matches!(
            load_paradigms("{Name A Inherit B} {Name B Inherit A}"),
            Err(ParadigmError::InheritanceCycle(_))
        ));
        assert!(matches!(
            load_paradigms("{Name A Slot {Name X} Slot {Name X}}"),
            Err(ParadigmError::DuplicateSlot { .. })
        ));
        assert!(matches!(
            load_paradigms("{Name A} {Name A}"),
            Err(ParadigmError::DuplicateParadigm(_))
        ));
        assert!(matches!(
            load_paradigms("{Slot {Name X}}"),
            Err(ParadigmError::MissingField { .. })
        ));
    }
}
