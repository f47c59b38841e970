//! Command-line front end. Exit codes: 0 success or accept, 1 mismatch or
//! reject, 2 invalid input (or a violated acceptance promise), 3 cap exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::arith::Cyclotomic;
use crate::circuit::LayeredCircuit;
use crate::equiv::{check_realization_capped, EquivError, REALIZATION_LINE_CAP};
use crate::lang::{decide, AcceptanceQuery, Engine, LangError, Mode, Verdict};
use crate::sim::{apply_circuit_capped, SimError, StateVector, SPARSE_LINE_CAP};
use crate::synth::registry::{construct, Params, CONSTRUCTIONS};
use crate::synth::{lower_result, lower_to_primitives, ConstructionResult, SynthError, TargetSpec};
use crate::tgraph::{
    amplitude_dp_capped, build_from_circuit_capped, colored_example, two_path_example, GraphError,
    TensorGraph, COLOR_SUM_CAP, NODE_CAP,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "qacc", version, about = "Exact constant-depth circuit constructions, checks and tensor graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleGraph {
    TwoPath,
    Colored,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a named construction and print its report
    Synth {
        /// Construction name (see --list)
        name: Option<String>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<u32>,
        /// Write the circuit file here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Expand qudigit and MOD_q gates first
        #[arg(long)]
        lower: bool,
        /// Print the report as JSON
        #[arg(long)]
        json: bool,
        /// List construction names
        #[arg(long)]
        list: bool,
    },
    /// Run a circuit file on a basis input and dump the output state
    Simulate {
        circuit: PathBuf,
        /// Input bits over all lines, line 0 first (default all zero)
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = SPARSE_LINE_CAP)]
        max_lines: usize,
    },
    /// Check that a construction realizes its target on every allowed input
    Verify {
        /// Construction name; omit when using --circuit and --target
        name: Option<String>,
        #[arg(long)]
        circuit: Option<PathBuf>,
        /// Reference circuit on the leading lines of --circuit
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        /// Inclusive range such as 1..5
        #[arg(long)]
        n_range: Option<String>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        lower: bool,
        #[arg(long, default_value_t = REALIZATION_LINE_CAP)]
        max_lines: usize,
    },
    /// Build the tensor graph of a circuit applied to |z>
    Graph {
        circuit: Option<PathBuf>,
        /// Use a built-in example graph instead of a circuit (z is not applied)
        #[arg(long, value_enum)]
        example: Option<ExampleGraph>,
        #[arg(long)]
        z: Option<String>,
        /// Also print the amplitude of this basis state
        #[arg(long)]
        x: Option<String>,
        #[arg(long, value_enum, default_value_t = GraphFormat::Text)]
        format: GraphFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        lower: bool,
        #[arg(long, default_value_t = NODE_CAP)]
        max_nodes: usize,
        #[arg(long, default_value_t = COLOR_SUM_CAP)]
        max_color_terms: usize,
    },
    /// Decide acceptance of input x with observed state z
    Decide {
        circuit: PathBuf,
        #[arg(long)]
        z: String,
        /// Input bits (may be empty)
        #[arg(long, default_value = "")]
        x: String,
        /// N, E or B
        #[arg(long)]
        mode: Mode,
        /// sim or graph
        #[arg(long, default_value = "sim")]
        engine: Engine,
    },
    /// Run the acceptance checks
    Selftest {
        /// Run only this check
        #[arg(long)]
        only: Option<u8>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Cap(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Cap(_) => EXIT_CAP,
            _ => EXIT_INVALID,
        }
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<EquivError> for CliError {
    fn from(e: EquivError) -> Self {
        match e {
            EquivError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            EquivError::Sim(s) => s.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<LangError> for CliError {
    fn from(e: LangError) -> Self {
        match e {
            LangError::Graph(g) => g.into(),
            LangError::Sim(s) => s.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

/// Parses and runs one command, writing results to `out` and errors to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{e}");
            return EXIT_INVALID;
        }
        Err(e) => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    let name = command_name(&cli.command);
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error in {name}: {e}");
            e.exit_code()
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Synth { .. } => "synth",
        Command::Simulate { .. } => "simulate",
        Command::Verify { .. } => "verify",
        Command::Graph { .. } => "graph",
        Command::Decide { .. } => "decide",
        Command::Selftest { .. } => "selftest",
    }
}

fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

fn read_circuit(path: &Path) -> Result<LayeredCircuit, CliError> {
    let text = std::fs::read_to_string(path).map_err(io(format!("reading {}", path.display())))?;
    LayeredCircuit::from_json(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(io(format!("writing {}", path.display())))
}

/// Bit string (line 0 first) of exactly `len` characters.
pub fn parse_bits(s: &str, len: usize) -> Result<u64, CliError> {
    if s.len() != len || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(CliError::Invalid(format!("expected {len} bits, got {s:?}")));
    }
    if len > 63 {
        return Err(CliError::Invalid(format!("{len} bits do not fit a basis index")));
    }
    Ok(s.chars().fold(0, |acc, c| (acc << 1) | u64::from(c == '1')))
}

fn parse_range(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Invalid(format!("bad range {s:?}; expected a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

/// Rationals as `p/q`, everything else exactly.
fn show(c: &Cyclotomic) -> String {
    match c.to_rational() {
        Some(r) => r.to_string(),
        None => c.to_string(),
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    let w = |e| CliError::Io {
        context: "writing output".into(),
        source: e,
    };
    match cmd {
        Command::Synth { name, q, n, r, out: file, lower, json, list } => {
            if list {
                for e in CONSTRUCTIONS {
                    writeln!(out, "{:<22} {:<6} {}", e.name, e.params, e.summary).map_err(w)?;
                }
                return Ok(EXIT_OK);
            }
            let name = name.ok_or_else(|| CliError::Invalid("missing construction name".into()))?;
            let mut res = construct(&name, &Params { q, n, r })?;
            if lower {
                res = lower_result(&res)?;
            }
            if let Some(path) = file {
                write_file(&path, &res.circuit.to_json())?;
            }
            let report = res.report();
            if json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                writeln!(out, "{text}").map_err(w)?;
            } else {
                writeln!(out, "{report}").map_err(w)?;
            }
            Ok(EXIT_OK)
        }
        Command::Simulate { circuit, input, out: file, max_lines } => {
            let c = read_circuit(&circuit)?;
            let lines = c.num_lines();
            let x = match input {
                Some(s) => parse_bits(&s, lines)?,
                None => 0,
            };
            let state = apply_circuit_capped(&StateVector::basis(lines, x), &c, max_lines)?;
            let dump = state.dump();
            match file {
                Some(path) => write_file(&path, &dump)?,
                None => write!(out, "{dump}").map_err(w)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify { name, circuit, target, q, n, n_range, r, lower, max_lines } => {
            let mut results: Vec<ConstructionResult> = Vec::new();
            match (name, circuit, target) {
                (Some(name), None, None) => {
                    let ns: Vec<Option<usize>> = match (n_range, n) {
                        (Some(s), _) => parse_range(&s)?.into_iter().map(Some).collect(),
                        (None, n) => vec![n],
                    };
                    for n in ns {
                        results.push(construct(&name, &Params { q, n, r })?);
                    }
                }
                (None, Some(cpath), Some(tpath)) => {
                    let (c, t) = (read_circuit(&cpath)?, read_circuit(&tpath)?);
                    let nt = t.num_lines();
                    if nt > c.num_lines() {
                        return Err(CliError::Invalid("target has more lines than the circuit".into()));
                    }
                    results.push(ConstructionResult::new(
                        cpath.display().to_string(),
                        format!("checked against {}", tpath.display()),
                        c,
                        nt,
                        TargetSpec::Circuit(t),
                    ));
                }
                _ => {
                    return Err(CliError::Invalid(
                        "give a construction name, or both --circuit and --target".into(),
                    ))
                }
            }
            let mut code = EXIT_OK;
            for res in results {
                let res = if lower { lower_result(&res)? } else { res };
                let rep = check_realization_capped(&res, max_lines)?;
                writeln!(out, "{rep}").map_err(w)?;
                if !rep.realized() {
                    code = EXIT_MISMATCH;
                }
            }
            Ok(code)
        }
        Command::Graph { circuit, example, z, x, format, out: file, lower, max_nodes, max_color_terms } => {
            let g: TensorGraph = match (circuit, example) {
                (Some(path), None) => {
                    let c = read_circuit(&path)?;
                    let c = if lower { lower_to_primitives(&c)? } else { c };
                    let lines = c.num_lines();
                    let z = match z {
                        Some(s) => parse_bits(&s, lines)?,
                        None => 0,
                    };
                    build_from_circuit_capped(&c, z, max_nodes)?
                }
                (None, Some(which)) => {
                    let g = match which {
                        ExampleGraph::TwoPath => two_path_example(),
                        ExampleGraph::Colored => colored_example(),
                    };
                    // the examples are fixed graphs; z is only checked for shape
                    if let Some(s) = z {
                        parse_bits(&s, g.num_lines())?;
                    }
                    g
                }
                _ => return Err(CliError::Invalid("give a circuit file or --example".into())),
            };
            let text = match format {
                GraphFormat::Dot => g.to_dot(),
                GraphFormat::Text => g.dump(),
            };
            match file {
                Some(path) => write_file(&path, &text)?,
                None => write!(out, "{text}").map_err(w)?,
            }
            if let Some(xs) = x {
                let x = parse_bits(&xs, g.num_lines())?;
                let a = amplitude_dp_capped(&g, x, max_color_terms)?;
                writeln!(out, "amplitude {xs}: {}", show(&a)).map_err(w)?;
            }
            Ok(EXIT_OK)
        }
        Command::Decide { circuit, z, x, mode, engine } => {
            let c = read_circuit(&circuit)?;
            let q = AcceptanceQuery {
                z: parse_bits(&z, c.num_lines())?,
                x: parse_bits(&x, c.num_inputs)?,
                circuit: c,
                mode,
            };
            let d = decide(&q, engine)?;
            writeln!(out, "verdict: {}", d.verdict).map_err(w)?;
            writeln!(out, "amplitude: {}", show(&d.amplitude)).map_err(w)?;
            writeln!(out, "probability: {}", show(&d.probability)).map_err(w)?;
            Ok(match d.verdict {
                Verdict::Accept => EXIT_OK,
                Verdict::Reject => EXIT_MISMATCH,
                Verdict::Invalid => EXIT_INVALID,
            })
        }
        Command::Selftest { only } => {
            let results = match only {
                Some(id) => crate::selftest::run_one(id)
                    .map(|r| vec![r])
                    .ok_or_else(|| CliError::Invalid(format!("no check numbered {id}")))?,
                None => crate::selftest::run(),
            };
            let mut code = EXIT_OK;
            for r in &results {
                writeln!(out, "{r}").map_err(w)?;
                if !r.passed {
                    code = EXIT_MISMATCH;
                }
            }
            Ok(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("qacc").chain(args.iter().copied()), &mut out, &mut err);
        out.extend(err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn synth_reports_depth() {
        let (code, out) = run_str(&["synth", "parity-from-fanout", "--n", "3"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("depth: 3"), "{out}");
    }

    #[test]
    fn bad_input_exits_2() {
        assert_eq!(run_str(&["synth", "no-such-thing", "--n", "3"]).0, EXIT_INVALID);
        assert_eq!(run_str(&["decide"]).0, EXIT_INVALID);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn colored_example_amplitude() {
        let (code, out) = run_str(&["graph", "--example", "colored", "--x", "100"]);
        assert_eq!(code, 0);
        assert!(out.ends_with("amplitude 100: 1/2\n"), "{out}");
    }

    #[test]
    fn verify_range_and_cap() {
        let (code, out) = run_str(&["verify", "modq-from-parity", "--q", "3", "--n-range", "1..2"]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(out.matches("verdict: realized").count(), 2);
        let (code, _) = run_str(&["verify", "modq-from-parity", "--q", "3", "--n", "2", "--max-lines", "4"]);
        assert_eq!(code, EXIT_CAP);
    }

    #[test]
    fn bits_and_ranges() {
        assert_eq!(parse_bits("101", 3).unwrap(), 5);
        assert_eq!(parse_bits("", 0).unwrap(), 0);
        assert!(parse_bits("10", 3).is_err());
        assert_eq!(parse_range("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_range("2..=2").unwrap(), vec![2]);
        assert!(parse_range("3..1").is_err());
    }
}
