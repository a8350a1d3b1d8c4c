//! The `stegnet` command-line front end.
//!
//! Reports are line-oriented and canonical: the same input always produces
//! the same bytes. Exit codes: 0 success, 1 infeasible instance or failed
//! `--check`, 2 usage or input error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};

use crate::attack::{self, plan_cut, verify_disconnection, TerminalSpec};
use crate::comms::{prob_to_additive, steiner_plan, CommsError};
use crate::dominator::{self, action_vector, is_dominating, mwds_exact, mwds_greedy};
use crate::graph::{parse_graph, serialize_graph, Graph, GraphError, GraphGenerator, VertexId};
use crate::oracle::{oracle_min_cut, oracle_mwds, OracleBudget};
use crate::EPSILON;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(
    name = "stegnet",
    version,
    about = "Cuts, dominating sets and low-risk routing on steganographer networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CutMethod {
    Super,
    Contract,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MwdsMethod {
    Exact,
    Greedy,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cheapest edge removal separating encoders from decoders.
    Cut {
        /// SGN file, or `-` for standard input.
        graph: String,
        /// Comma-separated encoder ids.
        #[arg(long)]
        encoders: String,
        /// Comma-separated decoder ids.
        #[arg(long)]
        decoders: String,
        #[arg(long, value_enum, default_value = "contract")]
        method: CutMethod,
        /// Re-verify disconnection and cross-check against the other
        /// reduction and, for small graphs, exhaustive enumeration.
        #[arg(long)]
        check: bool,
    },
    /// Minimum-weight dominating set (encoders for neighbour broadcast).
    Mwds {
        graph: String,
        #[arg(long, value_enum, default_value = "exact")]
        method: MwdsMethod,
        /// Re-verify domination and, for small graphs, compare with
        /// exhaustive enumeration.
        #[arg(long)]
        check: bool,
    },
    /// Low-risk edge set connecting the terminals.
    Steiner {
        graph: String,
        /// Comma-separated terminal ids.
        #[arg(long)]
        terminals: String,
        /// Treat edge weights as success probabilities in (0, 1].
        #[arg(long)]
        from_probabilities: bool,
    },
    /// Emit a seeded random graph in canonical SGN.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        wmin: f64,
        #[arg(long, default_value_t = 10.0)]
        wmax: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw integer weights only.
        #[arg(long)]
        integer: bool,
    },
}

enum Failure {
    Usage(String),
    Infeasible(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses a comma-separated list of vertex ids. Whitespace around items is
/// ignored; empty items are rejected.
pub fn parse_id_list(list: &str) -> Result<Vec<VertexId>, GraphError> {
    list.split(',')
        .map(|item| VertexId::new(item.trim()))
        .collect()
}

fn id_set(g: &Graph, flag: &str, list: &str) -> Result<BTreeSet<VertexId>, Failure> {
    let ids = parse_id_list(list).map_err(|e| Failure::Usage(format!("--{flag}: {e}")))?;
    match ids.iter().find(|v| !g.contains_vertex(v)) {
        Some(v) => Err(Failure::Usage(format!(
            "--{flag}: vertex {v} is not in the graph"
        ))),
        None => Ok(ids.into_iter().collect()),
    }
}

fn load(path: &str, stdin: &mut dyn Read) -> Result<Graph, Failure> {
    let mut bytes = Vec::new();
    let read = if path == "-" {
        stdin.read_to_end(&mut bytes).map(|_| ())
    } else {
        std::fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map(|_| ())
    };
    read.map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    let text =
        String::from_utf8(bytes).map_err(|_| Failure::Usage(format!("{path}: not valid UTF-8")))?;
    parse_graph(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

/// Runs one command line. `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutcome {
                    exit_code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandOutcome {
                    exit_code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut out = CommandOutcome::default();
    let result = match cli.command {
        Command::Cut {
            graph,
            encoders,
            decoders,
            method,
            check,
        } => cmd_cut(&graph, &encoders, &decoders, method, check, stdin, &mut out),
        Command::Mwds {
            graph,
            method,
            check,
        } => cmd_mwds(&graph, method, check, stdin, &mut out),
        Command::Steiner {
            graph,
            terminals,
            from_probabilities,
        } => cmd_steiner(&graph, &terminals, from_probabilities, stdin, &mut out),
        Command::Gen {
            n,
            p,
            wmin,
            wmax,
            seed,
            integer,
        } => cmd_gen(n, p, wmin, wmax, seed, integer, &mut out),
    };
    match result {
        Ok(()) => out.exit_code = EXIT_OK,
        Err(Failure::Usage(msg)) => {
            out.exit_code = EXIT_USAGE;
            writeln!(out.stderr, "error: {msg}").expect("write to string");
        }
        Err(Failure::Infeasible(msg)) => {
            out.exit_code = EXIT_INFEASIBLE;
            writeln!(out.stderr, "error: {msg}").expect("write to string");
        }
    }
    out
}

fn cmd_cut(
    path: &str,
    encoders: &str,
    decoders: &str,
    method: CutMethod,
    check: bool,
    stdin: &mut dyn Read,
    out: &mut CommandOutcome,
) -> Result<(), Failure> {
    let g = load(path, stdin)?;
    let spec = TerminalSpec::new(
        &g,
        id_set(&g, "encoders", encoders)?,
        id_set(&g, "decoders", decoders)?,
    )?;
    let method = match method {
        CutMethod::Super => attack::Method::SuperTerminal,
        CutMethod::Contract => attack::Method::Contraction,
    };
    let plan = plan_cut(&g, &spec, method)?;
    writeln!(out.stdout, "cost {}", plan.total_cost).expect("write to string");
    for e in &plan.removed_edges {
        let w = g.edge_key_weight(e).expect("plan edge in graph");
        writeln!(out.stdout, "cut {} {} {w}", e.first(), e.second()).expect("write to string");
    }
    if !check {
        return Ok(());
    }

    if !verify_disconnection(&g, &spec, &plan.removed_edges)? {
        return Err(Failure::Infeasible(
            "check: removing the cut leaves an encoder-decoder path".into(),
        ));
    }
    let other = plan_cut(&g, &spec, method.other())?;
    if (other.total_cost - plan.total_cost).abs() > EPSILON {
        return Err(Failure::Infeasible(format!(
            "check: {} cost {} differs from {} cost {}",
            method, plan.total_cost, other.method, other.total_cost
        )));
    }
    if OracleBudget::MIN_CUT.admits(&g) {
        let best = oracle_min_cut(&g, &spec)?;
        if (best - plan.total_cost).abs() > EPSILON {
            return Err(Failure::Infeasible(format!(
                "check: cost {} differs from enumerated minimum {best}",
                plan.total_cost
            )));
        }
        writeln!(
            out.stderr,
            "check: ok (disconnected, methods agree, enumeration agrees)"
        )
        .expect("write to string");
    } else {
        writeln!(
            out.stderr,
            "check: ok (disconnected, methods agree; too large to enumerate)"
        )
        .expect("write to string");
    }
    Ok(())
}

fn cmd_mwds(
    path: &str,
    method: MwdsMethod,
    check: bool,
    stdin: &mut dyn Read,
    out: &mut CommandOutcome,
) -> Result<(), Failure> {
    let g = load(path, stdin)?;
    let set = match method {
        MwdsMethod::Exact => mwds_exact(&g)?,
        MwdsMethod::Greedy => mwds_greedy(&g),
    };
    writeln!(out.stdout, "weight {}", set.total_weight).expect("write to string");
    for v in &set.members {
        writeln!(out.stdout, "member {v}").expect("write to string");
    }
    if !check {
        return Ok(());
    }

    if !is_dominating(&g, &set.members)? || !action_vector(&g, &set.members)?.satisfies_coverage(&g)
    {
        return Err(Failure::Infeasible(
            "check: some vertex has no encoding neighbour".into(),
        ));
    }
    if OracleBudget::MWDS.admits(&g) {
        let best = oracle_mwds(&g)?;
        let ok = match set.method {
            dominator::Method::Exact => (set.total_weight - best).abs() <= EPSILON,
            dominator::Method::Greedy => set.total_weight >= best - EPSILON,
        };
        if !ok {
            return Err(Failure::Infeasible(format!(
                "check: {} weight {} inconsistent with enumerated minimum {best}",
                set.method, set.total_weight
            )));
        }
        writeln!(
            out.stderr,
            "check: ok (dominating, enumerated minimum {best})"
        )
        .expect("write to string");
    } else {
        writeln!(out.stderr, "check: ok (dominating; too large to enumerate)")
            .expect("write to string");
    }
    Ok(())
}

fn cmd_steiner(
    path: &str,
    terminals: &str,
    from_probabilities: bool,
    stdin: &mut dyn Read,
    out: &mut CommandOutcome,
) -> Result<(), Failure> {
    let mut g = load(path, stdin)?;
    if from_probabilities {
        g = prob_to_additive(&g)?;
    }
    let terminals = id_set(&g, "terminals", terminals)?;
    let plan = steiner_plan(&g, &terminals).map_err(|e| match e {
        CommsError::NoPath(..) | CommsError::Disconnected => Failure::Infeasible(e.to_string()),
        other => Failure::Usage(other.to_string()),
    })?;
    writeln!(out.stdout, "weight {}", plan.total_weight).expect("write to string");
    for e in &plan.edges {
        let w = g.edge_key_weight(e).expect("plan edge in graph");
        writeln!(out.stdout, "edge {} {} {w}", e.first(), e.second()).expect("write to string");
    }
    writeln!(out.stdout, "variant {}", plan.variant).expect("write to string");
    Ok(())
}

fn cmd_gen(
    n: usize,
    p: f64,
    wmin: f64,
    wmax: f64,
    seed: u64,
    integer: bool,
    out: &mut CommandOutcome,
) -> Result<(), Failure> {
    let g = GraphGenerator::new(n, p, (wmin, wmax), seed)
        .integer_weights(integer)
        .generate()?;
    out.stdout = serialize_graph(&g);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_with(args: &[&str], input: &str) -> CommandOutcome {
        let argv = std::iter::once("stegnet").chain(args.iter().copied());
        run(argv, &mut input.as_bytes())
    }

    const TRIANGLE: &str = "v a\nv b\nv c\ne a b 1\ne b c 2\ne a c 3\n";
    const STAR: &str = "v c 5\nv l1\nv l2\nv l3\ne c l1 1\ne c l2 1\ne c l3 1\n";

    #[test]
    fn id_lists() {
        assert_eq!(parse_id_list("a, b ,c").unwrap().len(), 3);
        assert!(parse_id_list("a,,b").is_err());
        assert!(parse_id_list("").is_err());
        assert!(parse_id_list("a;b").is_err());
    }

    #[test]
    fn cut_triangle() {
        for method in ["super", "contract"] {
            let o = run_with(
                &[
                    "cut",
                    "-",
                    "--encoders",
                    "a",
                    "--decoders",
                    "c",
                    "--method",
                    method,
                    "--check",
                ],
                TRIANGLE,
            );
            assert_eq!(o.exit_code, 0, "{}", o.stderr);
            assert_eq!(o.stdout, "cost 4\ncut a b 1\ncut a c 3\n");
        }
    }

    #[test]
    fn cut_overlap_is_usage_error() {
        let o = run_with(
            &["cut", "-", "--encoders", "a,b", "--decoders", "b"],
            TRIANGLE,
        );
        assert_eq!(o.exit_code, 2);
        assert!(o.stderr.contains("S ∩ T = ∅"), "{}", o.stderr);
        assert!(o.stdout.is_empty());
    }

    #[test]
    fn cut_disconnected() {
        let o = run_with(
            &["cut", "-", "--encoders", "a", "--decoders", "b"],
            "v a\nv b\nv c\ne a c 2\n",
        );
        assert_eq!((o.exit_code, o.stdout.as_str()), (0, "cost 0\n"));
    }

    #[test]
    fn cut_bad_inputs() {
        assert_eq!(
            run_with(
                &["cut", "-", "--encoders", "a", "--decoders", "zz"],
                TRIANGLE
            )
            .exit_code,
            2
        );
        assert_eq!(
            run_with(
                &["cut", "-", "--encoders", "a", "--decoders", "c"],
                "v a\nv a\n"
            )
            .exit_code,
            2
        );
        assert_eq!(
            run_with(&["cut", "-", "--encoders", "a"], TRIANGLE).exit_code,
            2
        );
        assert_eq!(
            run_with(
                &["cut", "/no/such/file", "--encoders", "a", "--decoders", "c"],
                ""
            )
            .exit_code,
            2
        );
    }

    #[test]
    fn mwds_outputs() {
        let o = run_with(&["mwds", "-", "--check"], STAR);
        assert_eq!(
            (o.exit_code, o.stdout.as_str()),
            (0, "weight 3\nmember l1\nmember l2\nmember l3\n")
        );
        let o = run_with(&["mwds", "-"], "v v\n");
        assert_eq!(o.stdout, "weight 1\nmember v\n");
        let o = run_with(&["mwds", "-", "--method", "greedy", "--check"], TRIANGLE);
        assert_eq!(o.exit_code, 0, "{}", o.stderr);
    }

    #[test]
    fn mwds_oversize_exact() {
        let big = serialize_graph(&crate::graph::random_graph(31, 0.1, (1.0, 2.0), 3).unwrap());
        assert_eq!(run_with(&["mwds", "-"], &big).exit_code, 2);
        assert_eq!(
            run_with(&["mwds", "-", "--method", "greedy", "--check"], &big).exit_code,
            0
        );
    }

    #[test]
    fn steiner_outputs() {
        let o = run_with(&["steiner", "-", "--terminals", "a,c"], TRIANGLE);
        assert_eq!(o.stdout, "weight 3\nedge a c 3\nvariant shortest-path\n");
        let o = run_with(&["steiner", "-", "--terminals", "a,b,c"], TRIANGLE);
        assert!(o.stdout.ends_with("variant mst\n"));
        let o = run_with(
            &["steiner", "-", "--terminals", "a,b", "--from-probabilities"],
            "v a\nv b\ne a b 1.5\n",
        );
        assert_eq!(o.exit_code, 2);
        let o = run_with(&["steiner", "-", "--terminals", "a,b"], "v a\nv b\n");
        assert_eq!(o.exit_code, 1);
    }

    #[test]
    fn gen_outputs() {
        let o = run_with(&["gen", "--n", "1"], "");
        assert_eq!((o.exit_code, o.stdout.as_str()), (0, "v v0 1\n"));
        let o = run_with(&["gen", "--n", "3", "--p", "1"], "");
        assert_eq!(o.stdout.lines().filter(|l| l.starts_with("e ")).count(), 3);
        assert_eq!(run_with(&["gen", "--n", "0"], "").exit_code, 2);
        assert_eq!(run_with(&["gen", "--n", "3", "--p", "2"], "").exit_code, 2);
        assert_eq!(
            run_with(&["gen", "--n", "3", "--wmin", "5", "--wmax", "1"], "").exit_code,
            2
        );
    }

    #[test]
    fn help_is_success() {
        let o = run_with(&["--help"], "");
        assert_eq!(o.exit_code, 0);
        assert!(o.stdout.contains("cut"));
        assert_eq!(run_with(&["bogus"], "").exit_code, 2);
    }
}
