//! File formats, batch pipeline and reports behind the `morels` command.

pub mod config;
pub mod corpus;
pub mod pipeline;
pub mod reports;

pub use config::{RunConfig, Weights};
pub use corpus::{Corpus, Error};
