use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use morels_cli::{pipeline, reports, Corpus, Error, RunConfig};
use morels_core::analyzer::analyze;
use morels_core::category::Category;
use morels_core::linker::DerivationalGraph;
use morels_core::morels::score_analysis;
use morels_core::paradigm::generate_paradigm;
use morels_core::records::serialize_record;

#[derive(Parser, Debug)]
#[command(
    name = "morels",
    version,
    about = "Derivational analysis and linking over dictionary records"
)]
struct Cli {
    /// Records-format config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Lexicon file or directory of .rec files.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    #[arg(long, global = true)]
    morphemes: Option<PathBuf>,
    #[arg(long, global = true)]
    paradigms: Option<PathBuf>,
    #[arg(long, global = true)]
    weights: Option<PathBuf>,
    #[arg(long, global = true)]
    max_depth: Option<usize>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print bracketed analyses of a word.
    Analyze { word: String },
    /// Score every sense of a word against its analyses.
    Score {
        word: String,
        #[arg(long)]
        trace: bool,
    },
    /// Link all headwords and write the updated lexicon.
    Build,
    /// Write the scored sense-pair tuples.
    Tuples,
    /// Count headwords using each morpheme.
    Affixes,
    /// Compare analyses with the run-on entries.
    Agreement,
    /// Print inflected forms of a word.
    Paradigm { word: String },
    /// Print the derivational family of a word.
    Family { word: String },
    /// Print the direct bases of a word.
    Bases { word: String },
    /// Print the direct derivatives of a word.
    Derivatives { word: String },
}

impl Cli {
    fn run_config(&self) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        for (flag, slot) in [
            (&self.lexicon, &mut cfg.lexicon),
            (&self.morphemes, &mut cfg.morphemes),
            (&self.paradigms, &mut cfg.paradigms),
            (&self.weights, &mut cfg.weights),
            (&self.out, &mut cfg.out),
        ] {
            if flag.is_some() {
                slot.clone_from(flag);
            }
        }
        if let Some(d) = self.max_depth {
            cfg.max_depth = d;
        }
        if let Some(j) = self.jobs {
            if j == 0 {
                return Err(Error::Usage("--jobs must be at least 1".into()));
            }
            cfg.jobs = j;
        }
        Ok(cfg)
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Error> {
    match &cfg.out {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>".as_ref(), e)),
    }
}

fn score_text(corpus: &Corpus, word: &str, trace: bool) -> String {
    let mut out = String::new();
    let word = word.to_lowercase();
    let analyses = analyze(&word, &corpus.morphemes, &corpus.lexicon, &corpus.options.analyze);
    for sense in corpus.lexicon.lookup(&word, None) {
        for a in &analyses {
            let Some(m) = corpus.morphemes.get(&a.outer().morpheme) else {
                continue;
            };
            if m.cat != sense.pos {
                continue;
            }
            let t = score_analysis(a, m, sense, &corpus.lexicon, &corpus.options.score);
            out.push_str(&format!(
                "{} {} {}\n",
                sense.key(),
                a.bracketed(&corpus.morphemes),
                t.total
            ));
            if trace {
                out.push_str(&serialize_record(&t.to_record()));
                out.push('\n');
            }
        }
    }
    out
}

fn paradigm_text(corpus: &Corpus, word: &str) -> Result<String, Error> {
    let set = corpus
        .paradigms
        .as_ref()
        .ok_or_else(|| Error::Usage("no paradigms given".into()))?;
    let mut out = String::new();
    for sense in corpus.lexicon.lookup(word, Some(Category::Verb)) {
        let Some(p) = set.select(sense.paradigm.as_deref()) else {
            continue;
        };
        out.push_str(&format!("{} {}\n", sense.key(), p.name));
        for (slot, form) in generate_paradigm(&sense.headword.to_lowercase(), p) {
            out.push_str(&format!("  {slot} {form}\n"));
        }
    }
    Ok(out)
}

fn lines<'a>(words: impl IntoIterator<Item = &'a String>) -> String {
    words.into_iter().map(|w| format!("{w}\n")).collect()
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = cli.run_config()?;
    let corpus = Corpus::load(&cfg)?;
    let text = match &cli.command {
        Command::Analyze { word } => analyze(word, &corpus.morphemes, &corpus.lexicon, &corpus.options.analyze)
            .iter()
            .map(|a| format!("{}\n", a.bracketed(&corpus.morphemes)))
            .collect(),
        Command::Score { word, trace } => score_text(&corpus, word, *trace),
        Command::Build => pipeline::lexicon_text(&pipeline::build(&corpus, cfg.jobs)?),
        Command::Tuples => pipeline::tuples_text(&corpus, cfg.jobs)?,
        Command::Affixes => reports::affix_table(&reports::affix_counts(&corpus)),
        Command::Agreement => reports::agreement(&corpus)?.to_string(),
        Command::Paradigm { word } => paradigm_text(&corpus, &word.to_lowercase())?,
        Command::Family { word } | Command::Bases { word } | Command::Derivatives { word } => {
            let graph = DerivationalGraph::from_lexicon(&pipeline::build(&corpus, cfg.jobs)?, &corpus.morphemes);
            let word = word.to_lowercase();
            let set = match &cli.command {
                Command::Family { .. } => graph.family(&word),
                Command::Bases { .. } => graph.bases_of(&word),
                _ => graph.derivatives_of(&word),
            };
            lines(&set)
        }
    };
    emit(&cfg, &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("morels: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
