//! `shg-perturb`: perturbative photon-number statistics of spontaneous second
//! harmonic generation from the command line.
//!
//! Exit codes: 0 success, 1 validation mismatch, 2 invalid configuration,
//! 3 output could not be written.

mod input;
mod report;
mod sink;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shg_core::{
    assemble_fock, assemble_mixture, diagram_term, enumerate_pairs, evaluate, moments, render_ascii, render_latex,
    taylor_oracle, DiagramPair, DistributionExpansion, InputDescriptor, ProcessVector,
};

use input::{InputArgs, MixtureArgs, ResolvedInput};
use report::{
    csv_table, fraction, input_line, json, term_cells, text_table, Coefficient, DiagramReport, DiagramRow,
    EvaluationRow, ExpandReport, Format, JointRow, MomentsRow, NumericReport, Rational, TermRow, SCHEMA,
    TOOL_VERSION,
};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Mismatch,
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch => 1,
            CliError::Config(_) => 2,
            CliError::Output(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "invalid configuration: {msg}"),
            CliError::Mismatch => f.write_str("expansion and oracle disagree"),
            CliError::Output(msg) => write!(f, "cannot write output: {msg}"),
        }
    }
}

impl From<shg_core::Error> for CliError {
    fn from(e: shg_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "shg-perturb", version, about = "Perturbative SH photon statistics from double-sided diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Series coefficients c(v', R) of Pr(v'; gamma) up to gamma^R_max.
    Expand {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        mixture: MixtureArgs,
        #[arg(long, value_parser = parse_order)]
        order: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// List or render the canonical diagram pairs of each order.
    Diagrams(DiagramArgs),
    /// Compare the diagram expansion with the direct Taylor oracle.
    Validate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        mixture: MixtureArgs,
        #[arg(long, value_parser = parse_order)]
        order: u32,
    },
    /// Truncated probabilities Pr(v'; gamma) with remainder estimates.
    Evaluate(NumericArgs),
    /// Mean, variance and Mandel Q of the SH photon number.
    Moments(NumericArgs),
}

#[derive(Debug, Args)]
struct DiagramArgs {
    /// Highest total order R.
    #[arg(long, value_parser = parse_order)]
    order: u32,
    /// Lowest total order listed; defaults to min(order, 2).
    #[arg(long, value_parser = parse_order)]
    from: Option<u32>,
    /// Print the listing (the default when nothing is rendered).
    #[arg(long)]
    list: bool,
    /// Show each pair's coefficient for pump Fock state |N,0>.
    #[arg(long, value_name = "N")]
    n: Option<u32>,
    /// Write one diagram file per pair.
    #[arg(long, value_enum, requires = "out_dir")]
    render: Option<RenderKind>,
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RenderKind {
    Ascii,
    Latex,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("coupling").required(true).multiple(false))]
struct NumericArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    mixture: MixtureArgs,
    #[arg(long, value_parser = parse_order)]
    order: u32,
    /// Single coupling value.
    #[arg(long, group = "coupling", allow_negative_numbers = true, value_parser = parse_gamma)]
    gamma: Option<f64>,
    /// Evenly spaced grid `lo:hi:steps` with steps + 1 points.
    #[arg(long, group = "coupling", value_name = "LO:HI:STEPS", value_parser = parse_sweep)]
    gamma_sweep: Option<Sweep>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

fn parse_order(s: &str) -> Result<u32, String> {
    let r: u32 = s.parse().map_err(|_| format!("not a non-negative integer: {s:?}"))?;
    if r % 2 == 0 {
        Ok(r)
    } else {
        Err(format!("order must be even, got {r}"))
    }
}

fn parse_gamma(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(g) if g.is_finite() => Ok(g),
        _ => Err(format!("not a finite number: {s:?}")),
    }
}

fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, steps] = parts[..] else {
        return Err(format!("expected lo:hi:steps, got {s:?}"));
    };
    let (lo, hi) = (parse_gamma(lo)?, parse_gamma(hi)?);
    let steps: u32 = steps.parse().map_err(|_| format!("bad step count {steps:?}"))?;
    if steps == 0 {
        return Err("steps must be at least 1".into());
    }
    Ok(Sweep((0..=steps).map(|i| lo + (hi - lo) * f64::from(i) / f64::from(steps)).collect()))
}

#[derive(Debug, Clone)]
struct Sweep(Vec<f64>);

fn assemble(input: &ResolvedInput, order: u32) -> Result<DistributionExpansion, CliError> {
    Ok(match &input.descriptor {
        InputDescriptor::Fock(n) => assemble_fock(*n, order)?,
        InputDescriptor::Mixture(w) => assemble_mixture(w, order)?,
    })
}

fn term_rows(terms: &std::collections::BTreeMap<(u32, u32), shg_core::ExactRational>, n: Option<u32>, digits: Option<u32>) -> Vec<TermRow> {
    terms
        .iter()
        .map(|(&(v, power), c)| TermRow {
            target_v: v,
            n_prime: n.map(|n| n - 2 * v),
            gamma_power: power,
            coefficient: Coefficient::new(c, digits),
        })
        .collect()
}

fn cmd_expand(
    input: &InputArgs,
    mixture: &MixtureArgs,
    order: u32,
    format: Format,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let resolved = input::resolve(input, mixture)?;
    let e = assemble(&resolved, order)?;
    let (fock_n, digits) = match &resolved.descriptor {
        InputDescriptor::Fock(n) => (Some(*n), None),
        InputDescriptor::Mixture(_) => (None, Some(resolved.digits)),
    };
    let tail = resolved.tail_bound();
    let report = ExpandReport {
        schema: SCHEMA,
        tool_version: TOOL_VERSION,
        command: "expand",
        input: &resolved.meta,
        max_order: order,
        tail_bound: Rational::from(&tail),
        precision: digits,
        terms: term_rows(&e.terms, fock_n, digits),
        joint: e
            .joint
            .iter()
            .map(|(&n, terms)| JointRow { n, terms: term_rows(terms, Some(n), digits) })
            .collect(),
    };
    let header = ["target_v", "gamma_power", "coefficient"];
    let bytes = match format {
        Format::Json => json(&report),
        Format::Csv => csv_table(&header, &term_cells(&report.terms))?,
        Format::Text => {
            let mut preamble = vec![input_line(&resolved.meta), format!("max_order: {order}")];
            preamble.push(format!("tail_bound: {}", fraction(&tail)));
            if let Some(d) = digits {
                preamble.push(format!("precision: {d} significant digits"));
            }
            text_table(&preamble, &header, &term_cells(&report.terms))
        }
    };
    sink::emit(output, &bytes)
}

fn blocks_tag(k: &ProcessVector) -> String {
    if k.is_identity() {
        "0".into()
    } else {
        k.blocks().iter().map(u32::to_string).collect::<Vec<_>>().join("-")
    }
}

/// Stable per-pair file name, e.g. `R12_0003_k2-1-4-1_kp4.tex`.
fn diagram_file_name(order: u32, index: usize, pair: &DiagramPair, kind: RenderKind) -> String {
    let ext = match kind {
        RenderKind::Ascii => "txt",
        RenderKind::Latex => "tex",
    };
    format!("R{order:02}_{index:04}_k{}_kp{}.{ext}", blocks_tag(&pair.left), blocks_tag(&pair.right))
}

fn cmd_diagrams(args: &DiagramArgs) -> Result<(), CliError> {
    let from = args.from.unwrap_or(args.order.min(2));
    if from > args.order {
        return Err(CliError::Config(format!("--from {from} exceeds --order {}", args.order)));
    }
    if let (Some(dir), Some(_)) = (&args.out_dir, args.render) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
    }
    let mut rows = Vec::new();
    for order in (from..=args.order).step_by(2) {
        for (index, pair) in enumerate_pairs(order)?.iter().enumerate() {
            let coefficient = match args.n {
                Some(n) => Some(Rational::from(&diagram_term(pair, n)?.coefficient)),
                None => None,
            };
            let file = match (args.render, &args.out_dir) {
                (Some(kind), Some(dir)) => {
                    let name = diagram_file_name(order, index, pair, kind);
                    let body = match kind {
                        RenderKind::Ascii => render_ascii(pair),
                        RenderKind::Latex => render_latex(pair),
                    };
                    sink::write_file(&dir.join(&name), body.as_bytes())?;
                    Some(name)
                }
                _ => None,
            };
            rows.push(DiagramRow {
                order,
                index,
                left: pair.left.to_string(),
                right: pair.right.to_string(),
                r: pair.left_order(),
                r_prime: pair.right_order(),
                target_v: pair.net_photons(),
                multiplicity: pair.multiplicity,
                coefficient,
                file,
            });
        }
    }
    if args.render.is_some() && !args.list {
        eprintln!("wrote {} diagram files", rows.len());
        return Ok(());
    }

    let mut header = vec!["R", "index", "k", "k'", "r", "r'", "v'", "multiplicity"];
    if args.n.is_some() {
        header.push("coefficient");
    }
    if args.render.is_some() {
        header.push("file");
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|d| {
            let mut row = vec![
                d.order.to_string(),
                d.index.to_string(),
                d.left.clone(),
                d.right.clone(),
                d.r.to_string(),
                d.r_prime.to_string(),
                d.target_v.to_string(),
                d.multiplicity.to_string(),
            ];
            if let Some(c) = &d.coefficient {
                row.push(if c.den == "1" { c.num.clone() } else { format!("{}/{}", c.num, c.den) });
            }
            if let Some(f) = &d.file {
                row.push(f.clone());
            }
            row
        })
        .collect();
    let bytes = match args.format {
        Format::Json => json(&DiagramReport {
            schema: SCHEMA,
            tool_version: TOOL_VERSION,
            command: "diagrams",
            from_order: from,
            max_order: args.order,
            n: args.n,
            pairs: rows,
        }),
        Format::Csv => csv_table(&header, &cells)?,
        Format::Text => {
            let mut preamble = vec![format!("orders {from}..={} ({} pairs)", args.order, cells.len())];
            if let Some(n) = args.n {
                preamble.push(format!("coefficients for |{n},0>, multiplicity included"));
            }
            text_table(&preamble, &header, &cells)
        }
    };
    sink::emit(args.output.as_deref(), &bytes)
}

fn cmd_validate(input: &InputArgs, mixture: &MixtureArgs, order: u32) -> Result<(), CliError> {
    let resolved = input::resolve(input, mixture)?;
    let InputDescriptor::Fock(n) = resolved.descriptor else {
        return Err(CliError::Config("validate supports --fock input only".into()));
    };
    let got = assemble_fock(n, order)?.terms;
    let want = taylor_oracle(n, order);
    let keys: std::collections::BTreeSet<_> = got.keys().chain(want.keys()).collect();
    for key in &keys {
        let (a, b) = (got.get(key), want.get(key));
        if a != b {
            let show = |x: Option<&shg_core::ExactRational>| x.map_or_else(|| "0".to_string(), fraction);
            println!("MISMATCH at v'={} R={}: expansion {} oracle {}", key.0, key.1, show(a), show(b));
            return Err(CliError::Mismatch);
        }
    }
    println!("EXACT MATCH ({} coefficients)", keys.len());
    Ok(())
}

fn gammas(args: &NumericArgs) -> Result<Vec<f64>, CliError> {
    match (&args.gamma, &args.gamma_sweep) {
        (Some(g), None) => Ok(vec![*g]),
        (None, Some(grid)) => Ok(grid.0.clone()),
        _ => Err(CliError::Config("give exactly one of --gamma or --gamma-sweep".into())),
    }
}

fn numeric_preamble(resolved: &ResolvedInput, order: u32) -> Vec<String> {
    vec![
        input_line(&resolved.meta),
        format!("max_order: {order}"),
        format!("tail_bound: {}", fraction(&resolved.tail_bound())),
    ]
}

fn cmd_evaluate(args: &NumericArgs) -> Result<(), CliError> {
    let resolved = input::resolve(&args.input, &args.mixture)?;
    let e = assemble(&resolved, args.order)?;
    let mut rows = Vec::new();
    for gamma in gammas(args)? {
        for ev in evaluate(&e, gamma) {
            rows.push(EvaluationRow {
                gamma,
                target_v: ev.target_v,
                probability: ev.probability,
                remainder_estimate: ev.remainder_estimate,
                in_range: ev.in_range(),
            });
        }
    }
    let header = ["gamma", "target_v", "probability", "remainder_estimate", "in_range"];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.gamma.to_string(),
                r.target_v.to_string(),
                r.probability.to_string(),
                r.remainder_estimate.to_string(),
                r.in_range.to_string(),
            ]
        })
        .collect();
    let bytes = match args.format {
        Format::Json => json(&NumericReport {
            schema: SCHEMA,
            tool_version: TOOL_VERSION,
            command: "evaluate",
            input: &resolved.meta,
            max_order: args.order,
            tail_bound: Rational::from(&resolved.tail_bound()),
            rows,
        }),
        Format::Csv => csv_table(&header, &cells)?,
        Format::Text => text_table(&numeric_preamble(&resolved, args.order), &header, &cells),
    };
    sink::emit(args.output.as_deref(), &bytes)
}

fn cmd_moments(args: &NumericArgs) -> Result<(), CliError> {
    let resolved = input::resolve(&args.input, &args.mixture)?;
    let e = assemble(&resolved, args.order)?;
    let rows: Vec<MomentsRow> = gammas(args)?
        .into_iter()
        .map(|gamma| {
            let m = moments(&e, gamma);
            MomentsRow { gamma, mean: m.mean, variance: m.variance, mandel_q: m.mandel_q }
        })
        .collect();
    let header = ["gamma", "mean", "variance", "mandel_q"];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.gamma.to_string(),
                r.mean.to_string(),
                r.variance.to_string(),
                r.mandel_q.map_or_else(String::new, |q| q.to_string()),
            ]
        })
        .collect();
    let bytes = match args.format {
        Format::Json => json(&NumericReport {
            schema: SCHEMA,
            tool_version: TOOL_VERSION,
            command: "moments",
            input: &resolved.meta,
            max_order: args.order,
            tail_bound: Rational::from(&resolved.tail_bound()),
            rows,
        }),
        Format::Csv => csv_table(&header, &cells)?,
        Format::Text => text_table(&numeric_preamble(&resolved, args.order), &header, &cells),
    };
    sink::emit(args.output.as_deref(), &bytes)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Expand { input, mixture, order, format, output } => {
            cmd_expand(input, mixture, *order, *format, output.as_deref())
        }
        Command::Diagrams(args) => cmd_diagrams(args),
        Command::Validate { input, mixture, order } => cmd_validate(input, mixture, *order),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Moments(args) => cmd_moments(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("shg-perturb: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
