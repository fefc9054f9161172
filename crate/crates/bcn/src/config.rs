//! JSON training configuration.
//!
//! A config file sets any [`TrainConfig`] field by name; `learning_rate` is
//! required so a file always states the one value that most often needs
//! changing. Flags on the command line override the file, and the resolved
//! config is what gets echoed and used.

use std::path::Path;

use bridge_corrnet::{Activation, LossKind, TrainConfig};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{at, CliError, Result};
use crate::formats::read_text;

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub k: Option<usize>,
    pub f: Option<String>,
    pub p: Option<String>,
    pub loss: Option<String>,
    pub lambda: Option<f64>,
    pub batch_size: Option<usize>,
    pub epochs: Option<usize>,
    pub learning_rate: f64,
    pub seed: Option<u64>,
    pub shuffle: Option<bool>,
    pub momentum: Option<f64>,
}

/// Values given on the command line. `None` means "not given".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub k: Option<usize>,
    pub f: Option<String>,
    pub p: Option<String>,
    pub loss: Option<String>,
    pub lambda: Option<f64>,
    pub batch_size: Option<usize>,
    pub epochs: Option<usize>,
    pub learning_rate: Option<f64>,
    pub seed: Option<u64>,
    pub no_shuffle: bool,
    pub momentum: Option<f64>,
}

pub fn read_config(path: &Path) -> Result<ConfigFile> {
    serde_json::from_str(&read_text(path)?).map_err(|e| at(path, e))
}

fn parse<T: std::str::FromStr<Err = bridge_corrnet::Error>>(flag: &str, v: &str) -> Result<T> {
    v.parse().map_err(|e| CliError::usage(format!("{flag}: {e}")))
}

/// A bad value inside a config file is a data error, not a usage error.
fn parse_field<T: std::str::FromStr<Err = bridge_corrnet::Error>>(field: &str, v: &str) -> Result<T> {
    v.parse().map_err(|e| CliError::data(format!("config field {field}: {e}")))
}

/// Defaults, then the file, then the flags.
pub fn resolve(file: Option<&ConfigFile>, cli: &Overrides) -> Result<TrainConfig> {
    let mut c = TrainConfig::default();
    if let Some(f) = file {
        c.k = f.k.unwrap_or(c.k);
        if let Some(s) = &f.f {
            c.f = parse_field::<Activation>("f", s)?;
        }
        if let Some(s) = &f.p {
            c.p = parse_field::<Activation>("p", s)?;
        }
        if let Some(s) = &f.loss {
            c.loss = parse_field::<LossKind>("loss", s)?;
        }
        c.lambda = f.lambda.unwrap_or(c.lambda);
        c.batch_size = f.batch_size.unwrap_or(c.batch_size);
        c.epochs = f.epochs.unwrap_or(c.epochs);
        c.learning_rate = f.learning_rate;
        c.seed = f.seed.unwrap_or(c.seed);
        c.shuffle = f.shuffle.unwrap_or(c.shuffle);
        c.momentum = f.momentum.unwrap_or(c.momentum);
    }
    c.k = cli.k.unwrap_or(c.k);
    if let Some(s) = &cli.f {
        c.f = parse::<Activation>("--f", s)?;
    }
    if let Some(s) = &cli.p {
        c.p = parse::<Activation>("--p", s)?;
    }
    if let Some(s) = &cli.loss {
        c.loss = parse::<LossKind>("--loss", s)?;
    }
    c.lambda = cli.lambda.unwrap_or(c.lambda);
    c.batch_size = cli.batch_size.unwrap_or(c.batch_size);
    c.epochs = cli.epochs.unwrap_or(c.epochs);
    c.learning_rate = cli.learning_rate.unwrap_or(c.learning_rate);
    c.seed = cli.seed.unwrap_or(c.seed);
    if cli.no_shuffle {
        c.shuffle = false;
    }
    c.momentum = cli.momentum.unwrap_or(c.momentum);
    c.validate().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(c)
}

/// The config in the same shape a config file uses.
pub fn config_json(c: &TrainConfig) -> Value {
    json!({
        "k": c.k,
        "f": c.f.name(),
        "p": c.p.name(),
        "loss": c.loss.name(),
        "lambda": c.lambda,
        "batch_size": c.batch_size,
        "epochs": c.epochs,
        "learning_rate": c.learning_rate,
        "seed": c.seed,
        "shuffle": c.shuffle,
        "momentum": c.momentum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_is_default_file_flag() {
        let file: ConfigFile =
            serde_json::from_str(r#"{"k": 8, "lambda": 5, "learning_rate": 0.1, "f": "tanh"}"#).unwrap();
        let cli = Overrides { lambda: Some(0.5), no_shuffle: true, ..Overrides::default() };
        let c = resolve(Some(&file), &cli).unwrap();
        assert_eq!((c.k, c.lambda, c.learning_rate, c.f), (8, 0.5, 0.1, Activation::Tanh));
        assert!(!c.shuffle);
        assert_eq!(c.epochs, TrainConfig::default().epochs);
        assert_eq!(resolve(None, &Overrides::default()).unwrap(), TrainConfig::default());
    }

    #[test]
    fn resolved_config_round_trips_through_json() {
        let c = resolve(None, &Overrides { k: Some(3), loss: Some("bce".into()), ..Overrides::default() }).unwrap();
        let file: ConfigFile = serde_json::from_value(config_json(&c)).unwrap();
        assert_eq!(resolve(Some(&file), &Overrides::default()).unwrap(), c);
    }

    #[test]
    fn bad_files_are_rejected() {
        assert!(serde_json::from_str::<ConfigFile>(r#"{"k": 8}"#).is_err());
        assert!(serde_json::from_str::<ConfigFile>(r#"{"learning_rate": 0.1, "lamda": 2}"#).is_err());
        let file: ConfigFile = serde_json::from_str(r#"{"learning_rate": 0.1, "f": "swish"}"#).unwrap();
        assert!(matches!(resolve(Some(&file), &Overrides::default()), Err(CliError::Data(_))));
        let cli = Overrides { batch_size: Some(1), ..Overrides::default() };
        assert!(matches!(resolve(None, &cli), Err(CliError::Usage(_))));
    }
}
