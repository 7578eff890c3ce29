//! Serialization of command results to JSON, CSV and plain text.

use clap::ValueEnum;
use serde::Serialize;
use shg_core::numeric::format_significant;
use shg_core::ExactRational;

use crate::input::InputMeta;
use crate::CliError;

pub const SCHEMA: &str = "shg-perturb/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Exact rational as decimal-string numerator and denominator.
#[derive(Debug, Clone, Serialize)]
pub struct Rational {
    pub num: String,
    pub den: String,
}

impl From<&ExactRational> for Rational {
    fn from(x: &ExactRational) -> Self {
        Self { num: x.numer().to_string(), den: x.denom().to_string() }
    }
}

/// `p/q`, or just `p` for integers.
pub fn fraction(x: &ExactRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Coefficient {
    Exact(Rational),
    Decimal(String),
}

impl Coefficient {
    pub fn new(x: &ExactRational, digits: Option<u32>) -> Self {
        match digits {
            None => Coefficient::Exact(x.into()),
            Some(d) => Coefficient::Decimal(format_significant(x, d)),
        }
    }

    fn text(&self) -> String {
        match self {
            Coefficient::Exact(r) if r.den == "1" => r.num.clone(),
            Coefficient::Exact(r) => format!("{}/{}", r.num, r.den),
            Coefficient::Decimal(s) => s.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TermRow {
    pub target_v: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_prime: Option<u32>,
    pub gamma_power: u32,
    pub coefficient: Coefficient,
}

#[derive(Debug, Serialize)]
pub struct JointRow {
    pub n: u32,
    pub terms: Vec<TermRow>,
}

#[derive(Debug, Serialize)]
pub struct ExpandReport<'a> {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub input: &'a InputMeta,
    pub max_order: u32,
    pub tail_bound: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    pub terms: Vec<TermRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub joint: Vec<JointRow>,
}

#[derive(Debug, Serialize)]
pub struct EvaluationRow {
    pub gamma: f64,
    pub target_v: u32,
    pub probability: f64,
    pub remainder_estimate: f64,
    pub in_range: bool,
}

#[derive(Debug, Serialize)]
pub struct MomentsRow {
    pub gamma: f64,
    pub mean: f64,
    pub variance: f64,
    pub mandel_q: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct NumericReport<'a, T: Serialize> {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub input: &'a InputMeta,
    pub max_order: u32,
    pub tail_bound: Rational,
    pub rows: Vec<T>,
}

#[derive(Debug, Serialize)]
pub struct DiagramRow {
    pub order: u32,
    pub index: usize,
    pub left: String,
    pub right: String,
    pub r: u32,
    pub r_prime: u32,
    pub target_v: u32,
    pub multiplicity: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct DiagramReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub from_order: u32,
    pub max_order: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub pairs: Vec<DiagramRow>,
}

pub fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report serializes");
    out.push(b'\n');
    out
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(row).map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError::Output(e.to_string()))
}

/// Left-aligned columns separated by two spaces, after optional `# ` lines.
pub fn text_table(preamble: &[String], header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for line in preamble {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let joined: Vec<String> = cells.zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(joined.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out.into_bytes()
}

pub fn term_cells(rows: &[TermRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|t| vec![t.target_v.to_string(), t.gamma_power.to_string(), t.coefficient.text()])
        .collect()
}

pub fn input_line(meta: &InputMeta) -> String {
    match meta {
        InputMeta::Fock { n } => format!("input: fock n={n}"),
        InputMeta::Coherent { mean, epsilon, precision, cutoff_n } => format!(
            "input: coherent mean={}/{} epsilon={epsilon:e} precision={precision} cutoff_n={cutoff_n}",
            mean.num, mean.den
        ),
        InputMeta::Thermal { mean, epsilon, cutoff_n } => {
            format!("input: thermal mean={}/{} epsilon={epsilon:e} cutoff_n={cutoff_n}", mean.num, mean.den)
        }
        InputMeta::Weights { file, cutoff_n } => format!("input: weights file={file} cutoff_n={cutoff_n}"),
    }
}
