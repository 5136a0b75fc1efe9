#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use morels_core::lexicon::{load_lexicon, Lexicon, Sense, SenseKey};
use morels_core::morphemes::{load_morphemes, MorphemeTable};
use morels_core::paradigm::{load_paradigms, ParadigmSet};
use morels_core::Category;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn lexicon_files() -> Vec<PathBuf> {
    let mut files: Vec<_> = fs::read_dir(fixtures().join("lexicon"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "rec"))
        .collect();
    files.sort();
    files
}

pub fn lexicon() -> Lexicon {
    let text: String = lexicon_files()
        .iter()
        .map(|p| fs::read_to_string(p).unwrap() + "\n")
        .collect();
    load_lexicon(&text).unwrap()
}

pub fn table() -> MorphemeTable {
    load_morphemes(&fs::read_to_string(fixtures().join("morphemes.rec")).unwrap()).unwrap()
}

pub fn paradigms() -> ParadigmSet {
    load_paradigms(&fs::read_to_string(fixtures().join("paradigms.rec")).unwrap()).unwrap()
}

pub fn key(word: &str, pos: Category, n: u32) -> SenseKey {
    SenseKey::new(word, pos, n)
}

pub fn sense<'a>(lex: &'a Lexicon, word: &str, pos: Category, n: u32) -> &'a Sense {
    lex.get(&key(word, pos, n)).unwrap()
}
