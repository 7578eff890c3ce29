//! Resolving the input flags into a pump description.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use shg_core::numeric::parse_decimal;
use shg_core::series::{coherent_weights_with_precision, DEFAULT_PRECISION};
use shg_core::{thermal_weights, ExactRational, InputDescriptor, InputStateWeights};

use crate::report::Rational;
use crate::CliError;

#[derive(Debug, Args)]
#[group(id = "input", required = true, multiple = false)]
pub struct InputArgs {
    /// Pump Fock state |N,0>.
    #[arg(long, value_name = "N")]
    pub fock: Option<u32>,
    /// Coherent pump with mean photon number MEAN.
    #[arg(long, value_name = "MEAN")]
    pub coherent: Option<String>,
    /// Thermal pump with mean photon number MEAN.
    #[arg(long, value_name = "MEAN")]
    pub thermal: Option<String>,
    /// CSV file of `n,weight` rows; weights may be decimals or `a/b`.
    #[arg(long, value_name = "FILE")]
    pub weights: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MixtureArgs {
    /// Significant digits for irrational mixture weights and decimal output.
    #[arg(long, default_value_t = DEFAULT_PRECISION, value_parser = clap::value_parser!(u32).range(1..=10_000))]
    pub precision: u32,
    /// Upper bound on the discarded pump mass, in (0, 1).
    #[arg(long, default_value_t = 1e-12, value_parser = parse_epsilon)]
    pub epsilon: f64,
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    let eps: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if eps > 0.0 && eps < 1.0 {
        Ok(eps)
    } else {
        Err(format!("epsilon must lie in (0, 1), got {s}"))
    }
}

/// Input as recorded in output metadata.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InputMeta {
    Fock { n: u32 },
    Coherent { mean: Rational, epsilon: f64, precision: u32, cutoff_n: u32 },
    Thermal { mean: Rational, epsilon: f64, cutoff_n: u32 },
    Weights { file: String, cutoff_n: u32 },
}

pub struct ResolvedInput {
    pub descriptor: InputDescriptor,
    pub meta: InputMeta,
    /// Digits used when printing mixture coefficients.
    pub digits: u32,
}

impl ResolvedInput {
    pub fn tail_bound(&self) -> ExactRational {
        match &self.descriptor {
            InputDescriptor::Fock(_) => ExactRational::default(),
            InputDescriptor::Mixture(w) => w.tail_bound.clone(),
        }
    }
}

fn parse_mean(text: &str) -> Result<ExactRational, CliError> {
    parse_decimal(text).map_err(|e| CliError::Config(e.to_string()))
}

pub fn resolve(input: &InputArgs, mixture: &MixtureArgs) -> Result<ResolvedInput, CliError> {
    let digits = mixture.precision;
    if let Some(n) = input.fock {
        return Ok(ResolvedInput { descriptor: InputDescriptor::Fock(n), meta: InputMeta::Fock { n }, digits });
    }
    let (weights, meta) = if let Some(text) = &input.coherent {
        let mean = parse_mean(text)?;
        let w = coherent_weights_with_precision(&mean, mixture.epsilon, mixture.precision)?;
        let meta = InputMeta::Coherent {
            mean: Rational::from(&mean),
            epsilon: mixture.epsilon,
            precision: mixture.precision,
            cutoff_n: w.cutoff_n,
        };
        (w, meta)
    } else if let Some(text) = &input.thermal {
        let mean = parse_mean(text)?;
        let w = thermal_weights(&mean, mixture.epsilon)?;
        let meta = InputMeta::Thermal { mean: Rational::from(&mean), epsilon: mixture.epsilon, cutoff_n: w.cutoff_n };
        (w, meta)
    } else if let Some(path) = &input.weights {
        let w = read_weights(path)?;
        let meta = InputMeta::Weights { file: path.display().to_string(), cutoff_n: w.cutoff_n };
        (w, meta)
    } else {
        unreachable!("clap enforces exactly one input");
    };
    Ok(ResolvedInput { descriptor: InputDescriptor::Mixture(weights), meta, digits })
}

/// Reads `n,weight` rows. A leading header row and `#` comments are skipped.
pub fn read_weights(path: &Path) -> Result<InputStateWeights, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(CliError::Config(format!("{}: line {} needs two fields", path.display(), i + 1)));
        }
        let n = match record[0].parse::<u32>() {
            Ok(n) => n,
            Err(_) if rows.is_empty() && i == 0 => continue,
            Err(_) => {
                return Err(CliError::Config(format!("{}: bad photon number {:?}", path.display(), &record[0])));
            }
        };
        let w = parse_decimal(&record[1]).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        rows.push((n, w));
    }
    Ok(InputStateWeights::custom(rows)?)
}
