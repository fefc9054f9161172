//! The `bcn` command line.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 for data errors.
//! Every subcommand echoes its resolved arguments to stderr as one JSON line
//! before doing any work. Reports go to stdout unless `--out` is given.

mod data;
mod eval;
mod train;
mod views;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "bcn", version, about = "Bridge correlational autoencoders: train, encode, evaluate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
enum Command {
    /// Count tokens and keep those seen more than --min-count times.
    BuildVocab(data::BuildVocabArgs),
    /// Turn text documents into sparse bag-of-words vectors.
    Vectorize(data::VectorizeArgs),
    /// Write a synthetic multi-view dataset as dense TSV files.
    Synth(data::SynthArgs),
    /// Train a model on one or more view/pivot pairings.
    Train(train::TrainArgs),
    /// Train once per lambda and keep the model with the best validation recall@1.
    Tune(train::TuneArgs),
    /// Embed the inputs of one view into the common space.
    Encode(eval::EncodeArgs),
    /// Nearest words of another view for a token.
    Nn(eval::NnArgs),
    /// Rank documents for queries by Euclidean distance and report recall@k.
    Retrieve(eval::RetrieveArgs),
    /// Retrieval chained through a bridge view shared by two models.
    PipelineRetrieve(eval::PipelineArgs),
    /// Train a perceptron on one view and test it on another.
    Classify(eval::ClassifyArgs),
    /// Compare analytic gradients with central differences on a random model.
    Gradcheck(train::GradcheckArgs),
}

/// Text-view options shared by every command that reads documents.
#[derive(Debug, Clone, Args, Serialize)]
pub(crate) struct TextArgs {
    /// Vocabulary file for a text view (repeatable).
    #[arg(long = "vocab", value_name = "NAME=FILE", value_parser = parse_binding)]
    pub vocab: Vec<(String, PathBuf)>,
    /// Bag-of-words weighting: count, binary or l2.
    #[arg(long, default_value = "count")]
    pub bow: String,
    /// Keep the original case of tokens.
    #[arg(long)]
    pub no_lowercase: bool,
}

pub(crate) fn parse_binding(s: &str) -> std::result::Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => Ok((name.to_owned(), PathBuf::from(path))),
        _ => Err(format!("expected NAME=FILE, got {s:?}")),
    }
}

fn echo(cmd: &Command) {
    if let Ok(s) = serde_json::to_string(cmd) {
        eprintln!("{s}");
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    echo(&cmd);
    match cmd {
        Command::BuildVocab(a) => data::build_vocab(a),
        Command::Vectorize(a) => data::vectorize(a),
        Command::Synth(a) => data::synth(a),
        Command::Train(a) => train::train(a),
        Command::Tune(a) => train::tune(a),
        Command::Encode(a) => eval::encode(a),
        Command::Nn(a) => eval::nn(a),
        Command::Retrieve(a) => eval::retrieval(a),
        Command::PipelineRetrieve(a) => eval::pipeline(a),
        Command::Classify(a) => eval::classify(a),
        Command::Gradcheck(a) => train::gradcheck(a),
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::usage(msg))
}
