//! `dgop`: command-line front end for the operad engine.
//!
//! Inputs are files or names of bundled data (`ass`, `lu_ass`, `s1d3s4`, ...).
//! Exit status is 0 on success, 1 on invalid input and 2 when an internal
//! invariant breaks.

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dgop::corpus;
use dgop::dgoperad::{chainify, lu_generating, Presentation, TruncatedOperad};
use dgop::homology::{homology_table, minimal_homology_generators};
use dgop::minmodel::{ainfty_reference, is_minimal, minimal_resolution, resolution_defects};
use dgop::symtree::GenId;
use dgop::syntax::{bundled, format_presentation, parse_element, parse_presentation};
use dgop::transfer::{h1_end_vanishes, AlgebraStructure, PivotOrder, S1D3S4};
use dgop::{Error, Result};

/// Largest arity accepted by `dims`, `homology`, `chainify` and `link`.
const ARITY_CAP: usize = 7;
const SYMMETRIC_RESOLUTION_CAP: usize = 5;
const PLANAR_RESOLUTION_CAP: usize = 6;
/// Caps the rayon worker pool.
const THREADS_VAR: &str = "DGOP_THREADS";

#[derive(Parser)]
#[command(name = "dgop", version, about = "Presented dg operads: homology, transfer and minimal models")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OperadArgs {
    /// Presentation file, or the name of a bundled presentation.
    operad: String,
    /// Coefficient field (`Q`, `Fp:5`, `F5`); overrides the file.
    #[arg(long)]
    field: Option<String>,
    #[arg(long, default_value_t = 4)]
    max_arity: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of the truncated operad, slot by slot.
    Dims(OperadArgs),
    /// Homology table (arity, degree, dim).
    Homology {
        #[command(flatten)]
        input: OperadArgs,
        /// Include representatives in the JSON output.
        #[arg(long)]
        representatives: bool,
        /// Also list minimal generators of the homology.
        #[arg(long)]
        generators: bool,
    },
    /// Prints the chainification of a presentation without differential.
    Chainify(OperadArgs),
    /// Prints `lu_G` of a presentation for the named generators.
    Link {
        #[command(flatten)]
        input: OperadArgs,
        /// Comma-separated generator names; all generators by default.
        #[arg(long, value_delimiter = ',')]
        generators: Vec<String>,
    },
    /// Evaluates a secondary operation on homology classes of an algebra.
    Transfer {
        /// Presentation file or bundled name.
        operad: String,
        /// Chain-complex JSON file, or `s1d3s4`.
        complex: String,
        /// `NAME([x],[y],...)`, where NAME is a class of the operad file or an
        /// element of its lu operad, e.g. `rho([S1],[S1],[S1])`.
        expression: String,
        #[arg(long, value_enum, default_value_t = Pivot::Forward)]
        pivot: Pivot,
    },
    /// Minimal model by iterated linking.
    Minmodel {
        operad: String,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        /// Treat the operad as non-symmetric.
        #[arg(long)]
        planar: bool,
        /// Compare slot dimensions with associahedron face counts.
        #[arg(long)]
        compare_ainfty: bool,
    },
    /// Runs the bundled acceptance checks.
    Corpus {
        /// Only these check ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Print the detail lines of every check.
        #[arg(long, short)]
        verbose: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Pivot {
    Forward,
    Reverse,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let outcome = std::panic::catch_unwind(|| run(&cli));
    match outcome {
        Ok(Ok(out)) => {
            print!("{}", out.text);
            ExitCode::from(out.status)
        }
        Ok(Err(e @ Error::Internal(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(_) => ExitCode::from(2),
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Invalid(format!("{THREADS_VAR}={v} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Invalid(e.to_string()))
}

struct Output {
    text: String,
    status: u8,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, status: 0 }
    }

    fn json(v: Value) -> Output {
        Output::ok(format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")))
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Dims(a) => dims(a, cli.json),
        Command::Homology {
            input,
            representatives,
            generators,
        } => homology(input, *representatives, *generators, cli.json),
        Command::Chainify(a) => {
            let p = chainify(&load(a)?)?;
            if cli.json {
                Ok(Output::json(json!({
                    "presentation": format_presentation(&p),
                    "components": components(&p, a.max_arity),
                })))
            } else {
                Ok(Output::ok(format_presentation(&p)))
            }
        }
        Command::Link { input, generators } => {
            let p = load(input)?;
            let gens: Vec<GenId> = if generators.is_empty() {
                p.signature().ids().collect()
            } else {
                generators.iter().map(|g| p.generator(g)).collect::<Result<_>>()?
            };
            let lu = lu_generating(&p, &gens)?;
            if cli.json {
                Ok(Output::json(json!({
                    "presentation": format_presentation(&lu),
                    "components": components(&lu, input.max_arity),
                })))
            } else {
                Ok(Output::ok(format_presentation(&lu)))
            }
        }
        Command::Transfer {
            operad,
            complex,
            expression,
            pivot,
        } => transfer(operad, complex, expression, *pivot, cli.json),
        Command::Minmodel {
            operad,
            max_arity,
            planar,
            compare_ainfty,
        } => minmodel(operad, *max_arity, *planar, *compare_ainfty, cli.json),
        Command::Corpus { only, verbose } => run_corpus(only, *verbose, cli.json),
    }
}

fn read_source(name: &str) -> Result<String> {
    if Path::new(name).is_file() {
        return std::fs::read_to_string(name).map_err(|e| Error::Invalid(format!("{name}: {e}")));
    }
    Err(Error::Invalid(format!("{name}: no such file")))
}

/// Bundled data is looked up by file stem, so `data/ass.op` finds `ass`.
fn stem(name: &str) -> &str {
    Path::new(name).file_stem().and_then(|s| s.to_str()).unwrap_or(name)
}

fn presentation_text(name: &str) -> Result<String> {
    if Path::new(name).is_file() {
        return read_source(name);
    }
    let p = bundled(stem(name)).map_err(|_| Error::Invalid(format!("{name}: no such file or bundled presentation")))?;
    Ok(format_presentation(&p))
}

/// Parses a presentation, replacing its `field` line when `field` is given.
fn parse_with_field(text: &str, field: Option<&str>) -> Result<Presentation> {
    match field {
        None => parse_presentation(text),
        Some(f) => {
            dgop::syntax::parse_field(f).ok_or_else(|| Error::Invalid(format!("unknown field `{f}`")))?;
            // keep line numbers of parse errors aligned with the file
            let body: Vec<&str> = text
                .lines()
                .map(|l| if l.trim_start().starts_with("field ") { "" } else { l })
                .collect();
            parse_presentation(&format!("field {f}\n{}", body.join("\n")))
                .map_err(|e| match e {
                    Error::Parse { line, column, token, message } => Error::Parse {
                        line: line - 1,
                        column,
                        token,
                        message,
                    },
                    e => e,
                })
        }
    }
}

fn load(a: &OperadArgs) -> Result<Presentation> {
    if a.max_arity == 0 || a.max_arity > ARITY_CAP {
        return Err(Error::Invalid(format!("--max-arity must be in 1..={ARITY_CAP}")));
    }
    parse_with_field(&presentation_text(&a.operad)?, a.field.as_deref())
}

fn components(p: &Presentation, max_arity: usize) -> Vec<Value> {
    let mut op = TruncatedOperad::new(p);
    let sig = p.signature().clone();
    let mut out = Vec::new();
    for n in 1..=max_arity {
        for d in op.degrees(n) {
            let slot = op.slot(n, d);
            if slot.dim() == 0 {
                continue;
            }
            let basis: Vec<String> = slot.basis_trees().map(|t| t.format(&sig)).collect();
            let mut triples = Vec::new();
            for (col, v) in op.differential(n, d).iter().enumerate() {
                for (row, c) in v.entries() {
                    triples.push(json!([row, col, c.to_string()]));
                }
            }
            out.push(json!({ "arity": n, "degree": d, "dim": slot.dim(), "basis": basis, "d": triples }));
        }
    }
    out
}

fn dims(a: &OperadArgs, as_json: bool) -> Result<Output> {
    let p = load(a)?;
    if as_json {
        return Ok(Output::json(json!({ "name": p.name, "components": components(&p, a.max_arity) })));
    }
    let mut op = TruncatedOperad::new(&p);
    let mut text = String::from("arity\tdegree\tdim\n");
    for n in 1..=a.max_arity {
        for d in op.degrees(n) {
            text.push_str(&format!("{n}\t{d}\t{}\n", op.dim(n, d)));
        }
    }
    Ok(Output::ok(text))
}

fn homology(a: &OperadArgs, reps: bool, generators: bool, as_json: bool) -> Result<Output> {
    let p = load(a)?;
    let t = homology_table(&p, a.max_arity)?;
    let g = if generators { Some(minimal_homology_generators(&t)?) } else { None };
    if as_json {
        let mut v = t.to_json(reps);
        if let Some(g) = &g {
            v["generators"] = g.module.to_json();
        }
        return Ok(Output::json(v));
    }
    let mut text = t.to_tsv();
    if let Some(g) = &g {
        text.push_str("# minimal generators: arity\tdegree\tdim\n");
        for (n, d, k) in g.nonzero() {
            text.push_str(&format!("{n}\t{d}\t{k}\n"));
        }
    }
    Ok(Output::ok(text))
}

/// Splits `NAME(ARG, ...)` at the parenthesis matching the final `)`.
fn split_call(expr: &str) -> Result<(&str, Vec<&str>)> {
    let expr = expr.trim();
    let bad = || Error::Invalid(format!("expected `NAME([x],[y],...)`, got `{expr}`"));
    if !expr.ends_with(')') {
        return Err(bad());
    }
    let bytes = expr.as_bytes();
    let mut depth = 0i32;
    let mut open = None;
    for i in (0..bytes.len()).rev() {
        match bytes[i] {
            b')' => depth += 1,
            b'(' => {
                depth -= 1;
                if depth == 0 {
                    open = Some(i);
                    break;
                }
            }
            _ => {}
        }
    }
    let open = open.ok_or_else(bad)?;
    let head = expr[..open].trim();
    if head.is_empty() {
        return Err(bad());
    }
    let inner = &expr[open + 1..expr.len() - 1];
    let mut args = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                args.push(inner[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    args.push(inner[start..].trim());
    Ok((head, args))
}

fn transfer(operad: &str, complex: &str, expression: &str, pivot: Pivot, as_json: bool) -> Result<Output> {
    let p = parse_presentation(&presentation_text(operad)?)?;
    let json_text = if stem(complex) == "s1d3s4" && !Path::new(complex).is_file() {
        S1D3S4.to_string()
    } else {
        read_source(complex)?
    };
    let value: Value = serde_json::from_str(&json_text).map_err(|e| Error::Invalid(format!("{complex}: {e}")))?;
    let a = AlgebraStructure::from_json(p.clone(), &value)?;
    let gens: Vec<GenId> = p.signature().ids().collect();
    let lu = lu_generating(&p, &gens)?;
    let (head, args) = split_call(expression)?;
    let element_text = p
        .classes()
        .iter()
        .find(|(name, _)| name == head)
        .map(|(_, e)| e.as_str())
        .unwrap_or(head);
    let e = parse_element(element_text, lu.signature(), p.field)?;
    let inputs = args.iter().map(|s| a.complex.parse_vector(s)).collect::<Result<Vec<_>>>()?;
    let order = match pivot {
        Pivot::Forward => PivotOrder::Forward,
        Pivot::Reverse => PivotOrder::Reverse,
    };
    let r = a.realize(&lu, &a.lift(order)?)?;
    let class = r.induced_operation(&e, &inputs)?;
    let shown = r.homology.format_class(&a.complex, &class);
    if as_json {
        let coords: Vec<Value> = class.entries().iter().map(|(i, c)| json!([i, c.to_string()])).collect();
        return Ok(Output::json(json!({
            "expression": expression,
            "element": e.format(lu.signature()),
            "class": shown,
            "coords": coords,
            "unique": h1_end_vanishes(&a.complex, 2)?,
        })));
    }
    Ok(Output::ok(format!("{shown}\n")))
}

fn minmodel(operad: &str, max_arity: usize, planar: bool, compare: bool, as_json: bool) -> Result<Output> {
    let mut p = parse_presentation(&presentation_text(operad)?)?;
    if planar && !p.planar {
        let text = format!("planar\n{}", format_presentation(&p));
        p = parse_presentation(&text)?;
    }
    let cap = if p.planar { PLANAR_RESOLUTION_CAP } else { SYMMETRIC_RESOLUTION_CAP };
    if max_arity < 2 || max_arity > cap {
        return Err(Error::Invalid(format!("--max-arity must be in 2..={cap} for this operad")));
    }
    let res = minimal_resolution(&p, max_arity)?;
    let report = is_minimal(&res.spec)?;
    let defects = resolution_defects(&res, &p)?;
    let mut comparison = Vec::new();
    if compare {
        let mut op = TruncatedOperad::new(&res.presentation()?);
        for n in 2..=max_arity {
            let reference = ainfty_reference(n);
            let mut degrees = op.degrees(n);
            degrees.extend(reference.keys());
            degrees.sort_unstable();
            degrees.dedup();
            for d in degrees {
                let expected = if p.planar { reference.get(&d).copied().unwrap_or(0) } else { 0 };
                comparison.push((n, d, op.dim(n, d), expected));
            }
        }
    }
    if as_json {
        let modules: Vec<Value> = res
            .adjoined
            .iter()
            .map(|m| json!({ "step": m.step, "arity": m.arity, "degree": m.degree, "dim": m.dim }))
            .collect();
        return Ok(Output::json(json!({
            "modules": modules,
            "minimal": report.minimal,
            "arities_increase": report.arities_increase,
            "indecomposable": report.indecomposable,
            "homology_defects": defects,
            "ainfty": comparison.iter().map(|(n, d, f, e)| json!({ "arity": n, "degree": d, "dim": f, "reference": e })).collect::<Vec<_>>(),
            "presentation": format_presentation(&res.presentation()?),
        })));
    }
    let mut text = String::from("step\tarity\tdegree\tdim\n");
    for m in &res.adjoined {
        text.push_str(&format!("{}\t{}\t{}\t{}\n", m.step, m.arity, m.degree, m.dim));
    }
    text.push_str(&format!(
        "# minimal: {} (arities increase: {}, indecomposable: {:?})\n",
        report.minimal, report.arities_increase, report.indecomposable
    ));
    if defects.is_empty() {
        text.push_str(&format!("# homology equals the target through arity {max_arity}\n"));
    } else {
        text.push_str(&format!("# homology defects (arity, degree, found, expected): {defects:?}\n"));
    }
    if compare {
        text.push_str("# A-infinity comparison: arity\tdegree\tdim\treference\n");
        for (n, d, f, e) in comparison {
            text.push_str(&format!("{n}\t{d}\t{f}\t{e}\n"));
        }
    }
    Ok(Output::ok(text))
}

fn run_corpus(only: &[String], verbose: bool, as_json: bool) -> Result<Output> {
    let checks = if only.is_empty() {
        corpus::run_all()
    } else {
        only.iter().map(|id| corpus::run(id)).collect::<Result<Vec<_>>>()?
    };
    let unexpected = checks.iter().any(|c| c.passed == c.known_failure());
    let status = if unexpected { 1 } else { 0 };
    if as_json {
        let items: Vec<Value> = checks
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "title": c.title,
                    "status": c.status(),
                    "known_failure": c.known_failure(),
                    "details": c.details,
                })
            })
            .collect();
        let mut out = Output::json(json!({ "checks": items }));
        out.status = status;
        return Ok(out);
    }
    Ok(Output {
        text: corpus::report(&checks, verbose),
        status,
    })
}
