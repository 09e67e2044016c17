//! Command-line front end for the decorated-tree library.
//!
//! Exit codes: 0 on success, 1 when the library rejects the input or a suite
//! fails, 2 on usage errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dtree::genus::{genus_formula_check, root_decompose};
use dtree::harness::{default_params, run_suite, suite_names};
use dtree::invariants::{f_arrow, multiplicities, ArrowSubset};
use dtree::rooted::{degree, subtree_tx};
use dtree::simplify::normalize;
use dtree::split::{
    ensplit_at_edge, ensplit_at_vertex, split_at_edge, split_at_vertex, TwoPrepartition,
};
use dtree::textio::{serialize_rooted, to_dot, DotOptions};
use dtree::{parse, serialize, summary, DecoratedTree, Edge, Parsed, SplitOutcome};

#[derive(Parser)]
#[command(
    name = "dtree",
    version,
    about = "Decorated trees: invariants, splittings and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file describes a valid decorated tree.
    Validate { file: PathBuf },
    /// Print M, F, g and δ (and the degree for rooted trees).
    Invariants {
        file: PathBuf,
        /// Also print N_v for every vertex and zero arrow, and F(α) for every nonzero arrow.
        #[arg(long)]
        per_node: bool,
    },
    /// Apply the simplification rules until none applies.
    Simplify {
        file: PathBuf,
        /// Write the result here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Split at an edge or a vertex and write the two trees.
    Split(SplitArgs),
    /// EN-split at an edge or a vertex and write the two trees.
    Ensplit(SplitArgs),
    /// Print the subtree spanned by the root and the given arrows.
    Subtree {
        file: PathBuf,
        /// Comma-separated arrow ids.
        #[arg(long, value_delimiter = ',', required = true)]
        arrows: Vec<String>,
    },
    /// Decompose a rooted tree at its root and check the genus formula.
    Decompose {
        file: PathBuf,
        /// Path prefix of the written pieces; defaults to the input path without extension.
        #[arg(long)]
        prefix: Option<PathBuf>,
    },
    /// Run a property suite on random trees.
    Check {
        /// Suite name; `list` prints the available suites.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
    },
    /// Print the tree in DOT format.
    Dot {
        file: PathBuf,
        /// Leave vertices with N_v = 0 unfilled.
        #[arg(long)]
        no_fill: bool,
        /// Omit node ids.
        #[arg(long)]
        no_ids: bool,
    },
}

#[derive(Args)]
struct SplitArgs {
    file: PathBuf,
    /// Split at the edge joining these two nodes, written `A,B`.
    #[arg(long, conflicts_with_all = ["vertex", "part"])]
    edge: Option<String>,
    /// Split at this vertex.
    #[arg(long, requires = "part")]
    vertex: Option<String>,
    /// The two groups of neighbours of the vertex, written `a,b;c,d`.
    #[arg(long, requires = "vertex")]
    part: Option<String>,
    /// Path prefix of the written trees; defaults to the input path without extension.
    #[arg(long)]
    prefix: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<dtree::Error> for Failure {
    fn from(e: dtree::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = std::result::Result<String, Failure>;

fn read(path: &Path) -> std::result::Result<Parsed, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn prefix_of(file: &Path, prefix: &Option<PathBuf>) -> PathBuf {
    prefix.clone().unwrap_or_else(|| file.with_extension(""))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn invariants(file: &Path, per_node: bool) -> Outcome {
    let parsed = read(file)?;
    let t = parsed.tree();
    let s = summary(t)?;
    let mut out = String::new();
    writeln!(out, "M: {}", s.m).unwrap();
    writeln!(out, "F: {}", s.f).unwrap();
    writeln!(out, "g: {}", s.g).unwrap();
    writeln!(out, "delta: {}", s.delta).unwrap();
    if let Some(r) = parsed.rooted() {
        writeln!(out, "root: {}", r.root()).unwrap();
        writeln!(out, "deg: {}", degree(r)).unwrap();
    }
    if per_node {
        for (v, n) in multiplicities(t) {
            writeln!(out, "N[{v}]: {n}").unwrap();
        }
        for a in t.nonzero_arrows() {
            writeln!(out, "F[{a}]: {}", f_arrow(t, a)?).unwrap();
        }
    }
    Ok(out)
}

fn parse_edge(s: &str) -> std::result::Result<Edge, Failure> {
    match s.split(',').map(str::trim).collect::<Vec<_>>()[..] {
        [a, b] if !a.is_empty() && !b.is_empty() && a != b => Ok(Edge::new(a, b)),
        _ => Err(Failure::Usage(format!("--edge expects `A,B`, got `{s}`"))),
    }
}

fn parse_part(
    tree: &DecoratedTree,
    v: &str,
    s: &str,
) -> std::result::Result<TwoPrepartition, Failure> {
    let groups: Vec<&str> = s.split(';').collect();
    if groups.len() != 2 {
        return Err(Failure::Usage(format!("--part expects `E1;E2`, got `{s}`")));
    }
    let ids = |g: &str| -> Vec<String> {
        g.split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(String::from)
            .collect()
    };
    let parts = TwoPrepartition {
        first: ids(groups[0]).into_iter().collect(),
        second: ids(groups[1]).into_iter().collect(),
    };
    parts.check(tree, v)?;
    Ok(parts)
}

fn split(args: &SplitArgs, en: bool) -> Outcome {
    let parsed = read(&args.file)?;
    let t = parsed.tree();
    let s: SplitOutcome = match (&args.edge, &args.vertex, &args.part) {
        (Some(e), None, None) => {
            let e = parse_edge(e)?;
            if en {
                ensplit_at_edge(t, &e)?
            } else {
                split_at_edge(t, &e)?
            }
        }
        (None, Some(v), Some(p)) => {
            let parts = parse_part(t, v, p)?;
            if en {
                ensplit_at_vertex(t, v, &parts)?
            } else {
                split_at_vertex(t, v, &parts)?
            }
        }
        _ => {
            return Err(Failure::Usage(
                "give either --edge or both --vertex and --part".into(),
            ))
        }
    };
    let prefix = prefix_of(&args.file, &args.prefix);
    let mut out = String::new();
    writeln!(out, "degree: {}", s.degree).unwrap();
    if let Some(k) = s.kind {
        writeln!(out, "type: {k}").unwrap();
    }
    for (i, part) in [(1, &s.t1), (2, &s.t2)] {
        let path = with_suffix(&prefix, &format!(".t{i}.dtree"));
        write_file(&path, &serialize(part))?;
        let sm = summary(part)?;
        writeln!(out, "t{i}: {}", path.display()).unwrap();
        writeln!(out, "M{i}: {}", sm.m).unwrap();
        writeln!(out, "F{i}: {}", sm.f).unwrap();
    }
    Ok(out)
}

fn require_rooted(parsed: &Parsed, file: &Path) -> std::result::Result<(), Failure> {
    match parsed.rooted() {
        Some(_) => Ok(()),
        None => Err(Failure::Domain(format!(
            "{}: no `root` line",
            file.display()
        ))),
    }
}

fn subtree(file: &Path, arrows: &[String]) -> Outcome {
    let parsed = read(file)?;
    require_rooted(&parsed, file)?;
    let x: ArrowSubset = arrows.iter().cloned().collect();
    let tx = subtree_tx(parsed.rooted().expect("checked"), &x)?;
    Ok(serialize_rooted(&tx))
}

fn decompose(file: &Path, prefix: &Option<PathBuf>) -> Outcome {
    let parsed = read(file)?;
    require_rooted(&parsed, file)?;
    let r = parsed.rooted().expect("checked");
    let pieces = root_decompose(r)?;
    let prefix = prefix_of(file, prefix);
    let mut out = String::new();
    writeln!(out, "root: {}", r.root()).unwrap();
    writeln!(out, "d: {}", degree(r)).unwrap();
    for (i, piece) in pieces.iter().enumerate() {
        let path = with_suffix(&prefix, &format!(".T{}.dtree", i + 1));
        write_file(&path, &serialize(&piece.tree))?;
        writeln!(out, "T{}: {}", i + 1, path.display()).unwrap();
        writeln!(out, "delta{}: {}", i + 1, summary(&piece.tree)?.delta).unwrap();
    }
    match genus_formula_check(r) {
        Ok((g, rhs)) => {
            writeln!(out, "g: {g}").unwrap();
            writeln!(out, "formula: {rhs}").unwrap();
            writeln!(out, "balanced: {}", g == rhs).unwrap();
        }
        Err(e) => writeln!(out, "formula: not applicable ({e})").unwrap(),
    }
    Ok(out)
}

fn check(suite: &str, seed: u64, count: usize) -> Outcome {
    if suite == "list" {
        return Ok(suite_names()
            .into_iter()
            .map(|s| format!("{s}\n"))
            .collect());
    }
    let params = default_params(suite, seed).ok_or_else(|| {
        Failure::Usage(format!(
            "unknown suite `{suite}`; available: {}",
            suite_names().join(", ")
        ))
    })?;
    let report = run_suite(suite, &params, count)?;
    if report.passed() {
        Ok(report.to_string())
    } else {
        print!("{report}");
        Err(Failure::Domain(format!("suite `{suite}` failed")))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { file } => {
            let parsed = read(&file)?;
            let t = parsed.tree();
            Ok(format!(
                "valid: true\nvertices: {}\narrows: {}\n",
                t.vertices().count(),
                t.arrows().count()
            ))
        }
        Command::Invariants { file, per_node } => invariants(&file, per_node),
        Command::Simplify { file, output } => {
            let parsed = read(&file)?;
            let text = serialize(&normalize(parsed.tree()));
            match output {
                Some(path) => {
                    write_file(&path, &text)?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Split(args) => split(&args, false),
        Command::Ensplit(args) => split(&args, true),
        Command::Subtree { file, arrows } => subtree(&file, &arrows),
        Command::Decompose { file, prefix } => decompose(&file, &prefix),
        Command::Check { suite, seed, count } => check(&suite, seed, count),
        Command::Dot {
            file,
            no_fill,
            no_ids,
        } => {
            let parsed = read(&file)?;
            let opts = DotOptions {
                fill_zero_multiplicity: !no_fill,
                show_ids: !no_ids,
            };
            Ok(to_dot(parsed.tree(), opts))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
