//! Identifies derivational relations between dictionary headwords.
//!
//! The pipeline runs in four stages over data held entirely in memory:
//!
//! 1. [`records`] parses the attribute-value record format shared by lexicon,
//!    morpheme and paradigm files.
//! 2. [`analyzer`] strips affixes using the compiled rules of a
//!    [`morphemes::MorphemeTable`], proposing candidate bases confirmed by the
//!    [`lexicon::Lexicon`].
//! 3. [`morels`] scores each candidate by matching the derived sense's semantic
//!    relations against the morpheme's weighted relation template.
//! 4. [`linker`] links derived senses to base senses and writes symmetric link
//!    attributes, from which derivational graphs are queried.
//!
//! The crate is `no_std` and only needs `alloc`; file IO, parallelism and the
//! command-line driver live in the companion `morels` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analyzer;
pub mod category;
pub mod lexicon;
pub mod linker;
pub mod morels;
pub mod morphemes;
pub mod paradigm;
pub mod records;

pub use analyzer::{analyze, synthesize, Analysis, AnalyzeOptions, ChainStep};
pub use category::Category;
pub use lexicon::{Lexicon, Link, Sense, SenseKey};
pub use linker::{best_links, build_links, link_senses, update_graph, DerivationalGraph, LinkTuple, LinkWeights};
pub use morels::{score_analysis, ScoreConfig, ScoreTrace};
pub use morphemes::{AllomorphRule, Morpheme, MorphemeTable, Side};
pub use paradigm::{generate_paradigm, Paradigm, ParadigmSet};
pub use records::{parse_record, parse_records, serialize_record, Record, Value, ValueRef};
