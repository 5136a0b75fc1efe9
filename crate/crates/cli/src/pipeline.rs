use std::collections::BTreeSet;

use morels_core::lexicon::Lexicon;
use morels_core::linker::{build_links, format_tuples, sort_tuples, update_graph, LinkTuple};
use morels_core::records::serialize_records;
use rayon::prelude::*;

use crate::corpus::{Corpus, Error};

/// Distinct lowercased headwords, in order.
pub fn headwords(lex: &Lexicon) -> Vec<String> {
    let set: BTreeSet<String> = lex.headwords().into_iter().map(|(w, _)| w.to_lowercase()).collect();
    set.into_iter().collect()
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, Error> {
    if jobs == 0 {
        return Err(Error::Usage("jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Usage(e.to_string()))
}

/// Link tuples for every headword, in emission order.
pub fn emit_tuples(corpus: &Corpus, jobs: usize) -> Result<Vec<LinkTuple>, Error> {
    let words = headwords(&corpus.lexicon);
    let per_word: Vec<Vec<LinkTuple>> = pool(jobs)?.install(|| {
        words
            .par_iter()
            .map(|w| build_links(w, &corpus.lexicon, &corpus.morphemes, &corpus.options))
            .collect()
    });
    let mut tuples: Vec<LinkTuple> = per_word.into_iter().flatten().collect();
    sort_tuples(&mut tuples);
    Ok(tuples)
}

pub fn tuples_text(corpus: &Corpus, jobs: usize) -> Result<String, Error> {
    Ok(format_tuples(&emit_tuples(corpus, jobs)?))
}

/// The lexicon with every emitted link written back into it.
pub fn build(corpus: &Corpus, jobs: usize) -> Result<Lexicon, Error> {
    let tuples = emit_tuples(corpus, jobs)?;
    let mut lex = corpus.lexicon.clone();
    update_graph(&mut lex, &tuples).map_err(|e| Error::Parse {
        path: "<build>".into(),
        message: e.to_string(),
    })?;
    Ok(lex)
}

pub fn lexicon_text(lex: &Lexicon) -> String {
    serialize_records(lex.records())
}
