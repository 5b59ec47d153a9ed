//! `ptgr`: realize duration matrices as periodic temporal graphs.
//!
//! Exit codes: 0 success, 1 negative answer (infeasible, mismatch,
//! unsatisfiable), 2 malformed input, 3 search budget exhausted.
//! Machine output goes to stdout, diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use periodic_tgr::delay::path_duration;
use periodic_tgr::exact::{realize_exact_with, ExactOptions, DEFAULT_BUDGET};
use periodic_tgr::io::{graph_to_json, graphs_to_json, matrix_to_json, read_graph, read_matrix, vertex_map_to_json};
use periodic_tgr::reduction::{assignment_to_labeling, nae3sat_to_instance, nae_brute_solve, parse_nae_cnf};
use periodic_tgr::tree::enumerate_tree_labelings;
use periodic_tgr::{fastest_duration_matrix, realize, Error, Method, Realization};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const MALFORMED: u8 = 2;
const UNKNOWN: u8 = 3;

/// Most mismatches `verify` lists.
const MAX_LISTED: usize = 10;

#[derive(Parser)]
#[command(name = "ptgr", version, about = "Periodic temporal graph realization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Tree,
    Cycle,
    Exact,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Tree => Method::Tree,
            MethodArg::Cycle => Method::Cycle,
            MethodArg::Exact => Method::Exact,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Find a labeling whose fastest-path durations equal the matrix.
    Realize {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        delta: u64,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Node budget for the exact search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Emit all delta labelings of a tree instance.
        #[arg(long)]
        all_shifts: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write search statistics as JSON.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Compute the fastest-path duration matrix of a labeled graph.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a labeled graph realizes a matrix.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Build an instance from a not-all-equal 3-SAT formula.
    GenNae {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        delta: u64,
        /// Solve the formula and emit a verified witness labeling.
        #[arg(long)]
        witness: bool,
        /// Write PREFIX.matrix.json, PREFIX.vertexmap.json and PREFIX.witness.json
        /// instead of one combined document on stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Duration of an underlying path under the graph's labeling.
    PathDuration {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated vertices, e.g. "0,1,2".
        #[arg(long)]
        path: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            MALFORMED
        }
    };
    ExitCode::from(code)
}

fn run(cmd: Command) -> Result<u8, Error> {
    match cmd {
        Command::Realize { matrix, delta, method, budget, all_shifts, out, stats } => {
            cmd_realize(&matrix, delta, method.into(), budget, all_shifts, out.as_deref(), stats.as_deref())
        }
        Command::Oracle { graph, out } => {
            let g = read_graph(&graph)?;
            emit(out.as_deref(), &matrix_to_json(&fastest_duration_matrix(&g)?))?;
            Ok(OK)
        }
        Command::Verify { graph, matrix } => cmd_verify(&graph, &matrix),
        Command::GenNae { cnf, delta, witness, out } => cmd_gen_nae(&cnf, delta, witness, out.as_deref()),
        Command::PathDuration { graph, path } => {
            let g = read_graph(&graph)?;
            let vertices = path
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("`{t}` is not a vertex"))))
                .collect::<Result<Vec<_>, _>>()?;
            println!("{}", path_duration(&vertices, &g)?);
            Ok(OK)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_realize(
    matrix: &Path,
    delta: u64,
    method: Method,
    budget: u64,
    all_shifts: bool,
    out: Option<&Path>,
    stats: Option<&Path>,
) -> Result<u8, Error> {
    let d = read_matrix(matrix)?;
    let method = method.resolve(&d)?;
    if all_shifts && method != Method::Tree {
        return Err(Error::NotATree("--all-shifts needs a tree instance".into()));
    }
    let opts = ExactOptions { budget: Some(budget), ..ExactOptions::default() };
    let (result, report) = if method == Method::Exact {
        let outcome = realize_exact_with(&d, delta, opts)?;
        let report = outcome.report_json();
        (outcome.result, report)
    } else {
        let result = realize(&d, delta, method, opts)?;
        let report = format!("{{\"expanded\":0,\"pruned\":0,\"verdict\":\"{}\"}}", result.verdict().as_str());
        (result, report)
    };
    if let Some(p) = stats {
        fs::write(p, report + "\n")?;
    }
    match result {
        Realization::Realized(g) => {
            if all_shifts {
                emit(out, &graphs_to_json(&enumerate_tree_labelings(&d, delta)?))?;
            } else {
                emit(out, &graph_to_json(&g))?;
            }
            Ok(OK)
        }
        Realization::Infeasible(why) => {
            eprintln!("infeasible[{}]: {}", why.kind.code(), why.detail);
            Ok(NEGATIVE)
        }
        Realization::Unknown(why) => {
            eprintln!("unknown: {why}");
            Ok(UNKNOWN)
        }
    }
}

fn cmd_verify(graph: &Path, matrix: &Path) -> Result<u8, Error> {
    let g = read_graph(graph)?;
    let d = read_matrix(matrix)?;
    if g.n() != d.n() {
        return Err(Error::MalformedMatrix(format!("graph has {} vertices, matrix has {}", g.n(), d.n())));
    }
    let computed = fastest_duration_matrix(&g)?;
    let mismatches = d.mismatches(&computed);
    print!("{}", verify_report(&mismatches));
    if mismatches.is_empty() {
        Ok(OK)
    } else {
        eprintln!("{} entries differ", mismatches.len());
        Ok(NEGATIVE)
    }
}

fn verify_report(mismatches: &[(usize, usize, u64, u64)]) -> String {
    let listed: Vec<serde_json::Value> = mismatches
        .iter()
        .take(MAX_LISTED)
        .map(|&(i, j, expected, actual)| serde_json::json!({"i": i, "j": j, "expected": expected, "actual": actual}))
        .collect();
    let report = serde_json::json!({
        "equal": mismatches.is_empty(),
        "mismatchCount": mismatches.len(),
        "mismatches": listed,
    });
    // serde_json's default map is ordered, so keys come out sorted
    serde_json::to_string(&report).expect("json value serializes") + "\n"
}

fn cmd_gen_nae(cnf: &Path, delta: u64, witness: bool, out: Option<&Path>) -> Result<u8, Error> {
    let phi = parse_nae_cnf(&fs::read_to_string(cnf)?)?;
    let (d, map) = nae3sat_to_instance(&phi, delta)?;
    let mut labeling = None;
    if witness {
        let Some(a) = nae_brute_solve(&phi)? else {
            eprintln!("unsatisfiable: no not-all-equal assignment exists");
            return Ok(NEGATIVE);
        };
        let g = assignment_to_labeling(&phi, &a, delta)?;
        let mismatches = d.mismatches(&fastest_duration_matrix(&g)?);
        if !mismatches.is_empty() {
            eprint!("witness does not realize the instance: {}", verify_report(&mismatches));
            return Ok(NEGATIVE);
        }
        labeling = Some(g);
    }
    match out {
        Some(prefix) => {
            let with = |suffix: &str| {
                let mut s = prefix.as_os_str().to_owned();
                s.push(suffix);
                PathBuf::from(s)
            };
            fs::write(with(".matrix.json"), matrix_to_json(&d))?;
            fs::write(with(".vertexmap.json"), vertex_map_to_json(&map))?;
            if let Some(g) = &labeling {
                fs::write(with(".witness.json"), graph_to_json(g))?;
            }
        }
        None => {
            let mut s = format!(
                "{{\n  \"matrix\": {},\n  \"vertexMap\": {}",
                nest(&matrix_to_json(&d)),
                nest(&map_object(&map))
            );
            if let Some(g) = &labeling {
                s.push_str(&format!(",\n  \"witness\": {}", nest(&graph_to_json(g))));
            }
            s.push_str("\n}\n");
            print!("{s}");
        }
    }
    Ok(OK)
}

fn map_object(map: &std::collections::BTreeMap<String, usize>) -> String {
    serde_json::to_string_pretty(map).expect("string map serializes")
}

/// Re-indents a standalone JSON document for use as a field value.
fn nest(doc: &str) -> String {
    doc.trim_end().replace('\n', "\n  ")
}
