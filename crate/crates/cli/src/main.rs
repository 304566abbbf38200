//! Command-line front end for the countfn library.
//!
//! Exit codes: 0 for trivial/equal/none-found, 1 for nontrivial/unequal/
//! witness-found, 2 for any error. JSON output carries `"schema": 1` and
//! serializes rationals as strings.

mod expr;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use countfn::certificates::{certificate, default_witness_bound, homogenized_evaluate, witness_search};
use countfn::decision::{
    basis_words, brooks_plus_words, equivalent, expand_pure, tree_algorithm, try_decide,
    verify_basis, BasisCheck, BasisFamily, Verdict, Witness,
};
use countfn::formal::b_relation;
use countfn::graphs::TransitionGraph;
use countfn::oracle::{enumerate_words, growth_profile, naive_rank};
use countfn::trees::{complete_reduce, partial_reduce, render_ascii, render_dot, transfer, Brotherhood, WeightedTree};
use countfn::words::{count, cyclic_count, cyclic_reduce, parse_letters};
use countfn::{CyclicWord, FormalSum, Mode, Rat64, Word};
use serde_json::{json, Value};

#[derive(Debug)]
pub enum CliError {
    Parse { position: usize, message: String },
    Core(countfn::Error),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { position, message } => {
                write!(f, "parse error at byte {position}: {message}")
            }
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(message) => write!(f, "{message}"),
        }
    }
}

impl From<countfn::Error> for CliError {
    fn from(e: countfn::Error) -> CliError {
        CliError::Core(e)
    }
}

#[derive(Parser)]
#[command(name = "countfn", version, about = "Exact computation with sums of subword-counting functions")]
struct Cli {
    /// Ambient structure: free monoid or free group.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Monoid)]
    mode: ModeArg,
    /// Number of generators (at least 2).
    #[arg(long, global = true, default_value_t = 2)]
    rank: u32,
    /// Output format; dot applies to graph and tree only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized operations; reserved, nothing draws from it yet.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Process expressions from a file, one per line (decide, paper-algo,
    /// witness). Results are emitted in input order.
    #[arg(long, global = true, value_name = "FILE")]
    batch: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Monoid,
    Group,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Variant {
    Pure,
    Compatible,
    CompatibleLevel,
}

#[derive(Subcommand)]
enum Command {
    /// Occurrences of a pattern in a word, over all shifts.
    Count { pattern: String, word: String },
    /// Occurrences of a pattern around a cyclic word, wrapping as needed.
    CyclicCount { pattern: String, cycle: String },
    /// Decide whether a sum denotes a bounded function.
    Decide {
        /// Read the whole expression in Brooks space.
        #[arg(long)]
        brooks: bool,
        /// Include the operation log in the output.
        #[arg(long)]
        trace: bool,
        expression: Option<String>,
    },
    /// Decide whether two sums denote the same class.
    Equal { left: String, right: String },
    /// Decide whether two Brooks-space sums denote the same class.
    BrooksEqual { left: String, right: String },
    /// Coordinates of a sum in the canonical pure basis at a level.
    Expand {
        #[arg(long)]
        level: usize,
        expression: String,
    },
    /// Print a basis family, optionally checking its independence.
    Basis {
        #[arg(long, value_enum, default_value_t = Variant::Pure)]
        variant: Variant,
        #[arg(long)]
        level: usize,
        /// Run the independence check and report any dependency.
        #[arg(long)]
        verify: bool,
        /// Use the Brooks-space family instead (group mode).
        #[arg(long)]
        brooks_plus: bool,
    },
    /// Run the weighted-tree decision procedure (sound on monoids; on
    /// groups a nontrivial answer may be a false negative).
    PaperAlgo {
        /// Include the operation log in the output.
        #[arg(long)]
        trace: bool,
        expression: Option<String>,
    },
    /// Render a sum as a weighted tree, optionally applying one operation
    /// first: transfer:<father>, reduce:<father>, or partial:<father>:<letter>.
    Tree {
        #[arg(long, value_name = "OP")]
        apply: Option<String>,
        expression: String,
    },
    /// Emit the level transition graph.
    Graph {
        #[arg(long)]
        level: usize,
        /// Erase loops and collapse parallel edges.
        #[arg(long)]
        simple: bool,
    },
    /// Cyclic-subword multiplicities of a cyclic word at a level.
    Certificate {
        #[arg(long)]
        cycle: String,
        #[arg(long)]
        level: usize,
    },
    /// Homogenized value of a sum at a cyclic word.
    HomogEval {
        #[arg(long)]
        cycle: String,
        expression: String,
    },
    /// Search for a short cyclic word with nonzero homogenized value.
    Witness {
        /// Maximum cycle length; defaults to the level-graph vertex count.
        #[arg(long)]
        bound: Option<usize>,
        expression: Option<String>,
    },
    /// Oracle helpers for reproducing validation runs.
    #[command(subcommand)]
    Dev(DevCommand),
}

#[derive(Subcommand)]
enum DevCommand {
    /// Per-length maxima of |evaluate| up to a horizon.
    Growth {
        #[arg(long)]
        horizon: usize,
        expression: String,
    },
    /// Rank of the level relation matrix and the quotient dimension.
    Rank {
        #[arg(long)]
        level: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            report_error(format, &e);
            ExitCode::from(2)
        }
    }
}

fn report_error(format: Format, e: &CliError) {
    if format == Format::Json {
        let payload = match e {
            CliError::Parse { position, message } => {
                json!({"kind": "parse", "position": position, "message": message})
            }
            CliError::Core(e) => json!({"kind": "domain", "message": e.to_string()}),
            CliError::Usage(message) => json!({"kind": "usage", "message": message}),
        };
        println!("{}", json!({"schema": 1, "error": payload}));
    } else {
        eprintln!("error: {e}");
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let mode = match cli.mode {
        ModeArg::Monoid => Mode::monoid(cli.rank)?,
        ModeArg::Group => Mode::group(cli.rank)?,
    };
    let format = cli.format;
    if format == Format::Dot && !matches!(cli.command, Command::Graph { .. } | Command::Tree { .. }) {
        return Err(CliError::Usage(
            "dot output is only available for graph and tree".into(),
        ));
    }

    if let Some(path) = &cli.batch {
        return run_batch(mode, format, &cli.command, path);
    }
    dispatch(mode, format, &cli.command)
}

fn dispatch(mode: Mode, format: Format, command: &Command) -> Result<u8, CliError> {
    match command {
        Command::Decide { expression, .. }
        | Command::PaperAlgo { expression, .. }
        | Command::Witness { expression, .. } => {
            let text = require_expression(expression)?;
            run_line(mode, format, command, text)
        }
        Command::Count { pattern, word } => {
            let v = Word::parse(mode, pattern)?;
            let (u, reduced) = Word::parse_reducing(mode, word)?;
            let n = count(&v, &u)?;
            if reduced && format == Format::Text {
                eprintln!("note: argument reduced to {u}");
            }
            emit(format, json!({"schema": 1, "count": n, "reduced": reduced}), n.to_string());
            Ok(0)
        }
        Command::CyclicCount { pattern, cycle } => {
            let v = Word::parse(mode, pattern)?;
            let (c, reduced) = parse_cycle(mode, cycle)?;
            let n = cyclic_count(&v, &c)?;
            if reduced && format == Format::Text {
                eprintln!("note: cycle reduced to {c}");
            }
            emit(format, json!({"schema": 1, "count": n, "reduced": reduced}), n.to_string());
            Ok(0)
        }
        Command::Equal { left, right } => {
            let f = expr::parse_sum(mode, left, false)?;
            let g = expr::parse_sum(mode, right, false)?;
            equality_output(format, &equivalent(&f, &g)?)
        }
        Command::BrooksEqual { left, right } => {
            let f = expr::parse_sum(mode, left, true)?;
            let g = expr::parse_sum(mode, right, true)?;
            equality_output(format, &equivalent(&f, &g)?)
        }
        Command::Expand { level, expression } => {
            let f = expr::parse_sum(mode, expression, false)?;
            let coords = expand_pure(&f, *level)?;
            let entries: Vec<Value> = coords
                .entries()
                .map(|(w, c)| json!({"word": w.to_string(), "coefficient": c.to_string()}))
                .collect();
            let text = coords
                .entries()
                .map(|(w, c)| format!("{w} {c}"))
                .collect::<Vec<_>>()
                .join("\n");
            emit(format, json!({"schema": 1, "level": level, "coordinates": entries}), text);
            Ok(0)
        }
        Command::Basis { variant, level, verify, brooks_plus } => {
            let (name, words) = if *brooks_plus {
                ("brooks-plus", brooks_plus_words(mode, *level)?)
            } else {
                let family = match variant {
                    Variant::Pure => BasisFamily::Pure,
                    Variant::Compatible => BasisFamily::Compatible,
                    Variant::CompatibleLevel => BasisFamily::CompatibleLevel,
                };
                (variant_name(*variant), basis_words(mode, *level, family)?)
            };
            let mut payload = json!({
                "schema": 1,
                "variant": name,
                "level": level,
                "words": words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            });
            let mut text: Vec<String> = words.iter().map(|w| w.to_string()).collect();
            let mut exit = 0;
            if *verify {
                match verify_basis::<Rat64>(&words, *level)? {
                    BasisCheck::Independent => {
                        payload["check"] = json!({"status": "independent"});
                        text.push("independent".into());
                    }
                    BasisCheck::Dependent(witness) => {
                        payload["check"] = json!({
                            "status": "dependent",
                            "witness": sum_terms(&witness),
                            "expression": witness.to_string(),
                        });
                        text.push(format!("dependent: {witness}"));
                        exit = 1;
                    }
                }
            }
            emit(format, payload, text.join("\n"));
            Ok(exit)
        }
        Command::Tree { apply, expression } => {
            let f = expr::parse_sum(mode, expression, false)?;
            let mut t = WeightedTree::new(f);
            if let Some(op) = apply {
                t = apply_tree_op(mode, &t, op)?;
            }
            match format {
                Format::Dot => print!("{}", render_dot(&t)),
                Format::Text => print!("{}", render_ascii(&t)),
                Format::Json => {
                    println!("{}", json!({"schema": 1, "weights": sum_terms(t.weights())}));
                }
            }
            Ok(0)
        }
        Command::Graph { level, simple } => {
            let g = TransitionGraph::build(mode, *level)?;
            if *simple {
                let s = g.loop_erase();
                match format {
                    Format::Dot => print!("{}", s.to_dot()),
                    Format::Text => {
                        let mut lines = vec![format!(
                            "vertices: {}",
                            join_words(s.vertices())
                        )];
                        for (a, b) in s.edge_words() {
                            lines.push(format!("edge {a} -- {b}"));
                        }
                        println!("{}", lines.join("\n"));
                    }
                    Format::Json => {
                        let edges: Vec<Value> = s
                            .edge_words()
                            .iter()
                            .map(|(a, b)| json!({"from": a.to_string(), "to": b.to_string()}))
                            .collect();
                        println!(
                            "{}",
                            json!({
                                "schema": 1,
                                "level": level,
                                "simple": true,
                                "vertices": word_strings(s.vertices()),
                                "edges": edges,
                            })
                        );
                    }
                }
            } else {
                match format {
                    Format::Dot => print!("{}", g.to_dot()),
                    Format::Text => {
                        let mut lines = vec![format!(
                            "vertices: {}",
                            join_words(g.vertices())
                        )];
                        for (i, e) in g.edges().iter().enumerate() {
                            let (s, t) = g.endpoints(i);
                            lines.push(format!(
                                "edge {e}: {} -> {}",
                                g.vertices()[s],
                                g.vertices()[t]
                            ));
                        }
                        println!("{}", lines.join("\n"));
                    }
                    Format::Json => {
                        let edges: Vec<Value> = g
                            .edges()
                            .iter()
                            .enumerate()
                            .map(|(i, e)| {
                                let (s, t) = g.endpoints(i);
                                json!({
                                    "word": e.to_string(),
                                    "from": g.vertices()[s].to_string(),
                                    "to": g.vertices()[t].to_string(),
                                })
                            })
                            .collect();
                        println!(
                            "{}",
                            json!({
                                "schema": 1,
                                "level": level,
                                "simple": false,
                                "vertices": word_strings(g.vertices()),
                                "edges": edges,
                            })
                        );
                    }
                }
            }
            Ok(0)
        }
        Command::Certificate { cycle, level } => {
            let (c, reduced) = parse_cycle(mode, cycle)?;
            if reduced && format == Format::Text {
                eprintln!("note: cycle reduced to {c}");
            }
            let cert = certificate(&c, *level)?;
            let entries: Vec<Value> = cert
                .entries()
                .map(|(w, n)| json!({"word": w.to_string(), "count": n}))
                .collect();
            let mut text: Vec<String> =
                cert.entries().map(|(w, n)| format!("{w} {n}")).collect();
            text.push(format!("total: {}", cert.total()));
            emit(
                format,
                json!({
                    "schema": 1,
                    "cycle": c.to_string(),
                    "level": level,
                    "entries": entries,
                    "total": cert.total(),
                }),
                text.join("\n"),
            );
            Ok(0)
        }
        Command::HomogEval { cycle, expression } => {
            let (c, reduced) = parse_cycle(mode, cycle)?;
            if reduced && format == Format::Text {
                eprintln!("note: cycle reduced to {c}");
            }
            let f = expr::parse_sum(mode, expression, false)?;
            let value = homogenized_evaluate(&f, &c)?;
            emit(
                format,
                json!({
                    "schema": 1,
                    "cycle": c.to_string(),
                    "value": value.to_string(),
                    "reduced": reduced,
                }),
                value.to_string(),
            );
            Ok(0)
        }
        Command::Dev(DevCommand::Growth { horizon, expression }) => {
            let f = expr::parse_sum(mode, expression, false)?;
            let profile = growth_profile(&f, *horizon)?;
            let maxima: Vec<String> = profile.maxima().iter().map(|m| m.to_string()).collect();
            let text = maxima
                .iter()
                .enumerate()
                .map(|(l, m)| format!("{l}: {m}"))
                .collect::<Vec<_>>()
                .join("\n");
            emit(format, json!({"schema": 1, "horizon": horizon, "maxima": maxima}), text);
            Ok(0)
        }
        Command::Dev(DevCommand::Rank { level }) => {
            if *level == 0 {
                return Err(CliError::Usage("--level must be at least 1".into()));
            }
            let rows: Vec<FormalSum<Rat64>> = enumerate_words(mode, level - 1)?
                .iter()
                .map(b_relation)
                .collect();
            let rank = naive_rank(&rows, *level)?;
            let edges = TransitionGraph::build(mode, *level)?.edges().len();
            let dimension = edges - rank;
            emit(
                format,
                json!({
                    "schema": 1,
                    "level": level,
                    "rank": rank,
                    "edges": edges,
                    "dimension": dimension,
                }),
                format!("rank: {rank}\nedges: {edges}\ndimension: {dimension}"),
            );
            Ok(0)
        }
    }
}

fn run_batch(mode: Mode, format: Format, command: &Command, path: &PathBuf) -> Result<u8, CliError> {
    if !matches!(
        command,
        Command::Decide { .. } | Command::PaperAlgo { .. } | Command::Witness { .. }
    ) {
        return Err(CliError::Usage(
            "--batch applies to decide, paper-algo, and witness".into(),
        ));
    }
    let inline = match command {
        Command::Decide { expression, .. }
        | Command::PaperAlgo { expression, .. }
        | Command::Witness { expression, .. } => expression,
        _ => unreachable!(),
    };
    if inline.is_some() {
        return Err(CliError::Usage(
            "--batch replaces the expression argument".into(),
        ));
    }
    let content = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut worst = 0;
    for line in content.lines() {
        if line.trim().is_empty() {
            continue;
        }
        worst = worst.max(run_line(mode, format, command, line)?);
    }
    Ok(worst)
}

/// Runs one expression through decide, paper-algo, or witness, printing one
/// result (one line in json format) and returning the exit code.
fn run_line(mode: Mode, format: Format, command: &Command, text: &str) -> Result<u8, CliError> {
    match command {
        Command::Decide { brooks, trace, .. } => {
            let f = expr::parse_sum(mode, text, *brooks)?;
            let verdict = try_decide(&f)?;
            verdict_output(format, &verdict, *trace, ("trivial", "nontrivial"));
            Ok(exit_of(&verdict))
        }
        Command::PaperAlgo { trace, .. } => {
            let f = expr::parse_sum(mode, text, false)?;
            let verdict = tree_algorithm(&WeightedTree::new(f));
            verdict_output(format, &verdict, *trace, ("trivial", "nontrivial"));
            Ok(exit_of(&verdict))
        }
        Command::Witness { bound, .. } => {
            let f = expr::parse_sum(mode, text, false)?;
            let bound = bound.unwrap_or_else(|| default_witness_bound(&f));
            let found = witness_search(&f, bound);
            match &found {
                Some(c) => {
                    let value = homogenized_evaluate(&f, c)?;
                    emit(
                        format,
                        json!({
                            "schema": 1,
                            "bound": bound,
                            "witness": {"cycle": c.to_string(), "value": value.to_string()},
                        }),
                        format!("cycle {c}, value {value}"),
                    );
                    Ok(1)
                }
                None => {
                    emit(
                        format,
                        json!({"schema": 1, "bound": bound, "witness": Value::Null}),
                        "none".into(),
                    );
                    Ok(0)
                }
            }
        }
        _ => unreachable!("run_line only serves expression commands"),
    }
}

fn require_expression(expression: &Option<String>) -> Result<&str, CliError> {
    expression
        .as_deref()
        .ok_or_else(|| CliError::Usage("an expression argument is required without --batch".into()))
}

fn exit_of(verdict: &Verdict<Rat64>) -> u8 {
    if verdict.is_trivial() {
        0
    } else {
        1
    }
}

fn verdict_output(format: Format, verdict: &Verdict<Rat64>, trace: bool, names: (&str, &str)) {
    let name = if verdict.is_trivial() { names.0 } else { names.1 };
    let mut payload = json!({
        "schema": 1,
        "verdict": name,
        "witness": witness_value(verdict.witness()),
    });
    if trace {
        payload["trace"] = json!(verdict.trace());
    }
    let mut text = vec![name.to_string()];
    if let Some(w) = verdict.witness() {
        text.push(format!("witness: cycle {}, value {}", w.cycle(), w.value()));
    }
    if trace {
        for line in verdict.trace() {
            text.push(format!("trace: {line}"));
        }
    }
    emit(format, payload, text.join("\n"));
}

fn equality_output(format: Format, verdict: &Verdict<Rat64>) -> Result<u8, CliError> {
    verdict_output(format, verdict, false, ("equal", "unequal"));
    Ok(exit_of(verdict))
}

fn witness_value(w: Option<&Witness<Rat64>>) -> Value {
    match w {
        None => Value::Null,
        Some(w) => json!({"cycle": w.cycle().to_string(), "value": w.value().to_string()}),
    }
}

fn sum_terms(f: &FormalSum<Rat64>) -> Vec<Value> {
    f.terms()
        .map(|(w, c)| json!({"word": w.to_string(), "coefficient": c.to_string()}))
        .collect()
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Pure => "pure",
        Variant::Compatible => "compatible",
        Variant::CompatibleLevel => "compatible-level",
    }
}

/// Reads a cycle argument: freely reduces, then closes up. The flag reports
/// whether the input differed from its cyclic core.
fn parse_cycle(mode: Mode, text: &str) -> Result<(CyclicWord, bool), CliError> {
    let (word, freely_reduced) = Word::parse_reducing(mode, text)?;
    let (_, conjugator) = cyclic_reduce(&word);
    Ok((CyclicWord::new(&word), freely_reduced || !conjugator.is_empty()))
}

fn apply_tree_op(
    mode: Mode,
    t: &WeightedTree<Rat64>,
    op: &str,
) -> Result<WeightedTree<Rat64>, CliError> {
    let parts: Vec<&str> = op.split(':').collect();
    let usage = || {
        CliError::Usage(format!(
            "bad --apply {op:?}: expected transfer:<father>, reduce:<father>, or partial:<father>:<letter>"
        ))
    };
    let father = |text: &str| -> Result<Brotherhood, CliError> {
        Ok(Brotherhood::with_father(&Word::parse(mode, text)?))
    };
    match parts.as_slice() {
        ["transfer", f] => Ok(transfer(t, &father(f)?)?),
        ["reduce", f] => Ok(complete_reduce(t, &father(f)?)?),
        ["partial", f, s] => {
            let letters = parse_letters(s)?;
            let [letter] = letters.as_slice() else {
                return Err(usage());
            };
            Ok(partial_reduce(t, &father(f)?, *letter)?)
        }
        _ => Err(usage()),
    }
}

fn word_strings(words: &[Word]) -> Vec<String> {
    words.iter().map(|w| w.to_string()).collect()
}

fn join_words(words: &[Word]) -> String {
    word_strings(words).join(" ")
}

fn emit(format: Format, payload: Value, text: String) {
    match format {
        Format::Json => println!("{payload}"),
        _ => {
            if !text.is_empty() {
                println!("{text}");
            }
        }
    }
}
