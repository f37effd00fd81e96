//! Command-line surface for the teaching-map toolkit: solving, verification,
//! kernelization, lifting, the naive oracle, instance statistics, and the
//! hardness-instance generators.
//!
//! Exit codes: 0 = success / feasible, 1 = infeasible (or conflicts found),
//! 2 = usage or format error. JSON results go to standard output,
//! human-readable diagnostics to standard error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde_json::json;

use nonclash::balls::BallFamily;
use nonclash::graph::Graph;
use nonclash::reductions::{
    extract_assignment_nae, extract_assignment_sat3, gen_nae, gen_sat3, nae_brute,
    nae_witness_map, sat3_brute, table1_map, CnfFormula, Lit, NaeClause, NaeFormula,
};
use nonclash::solver::{oracle_min_dimension, solve, OracleOutcome, SolveStatus};
use nonclash::teaching::{describe_conflicts, verify_with_workers, TeachingMap};
use nonclash::vi::{
    bounds, fpt_solve, reduce_instance, twin_classes, vi_witness, Provenance, Reduced, Retain,
    ViWitness,
};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "nonclash", version, about = "Positive non-clashing teaching maps for balls in graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Fpt,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a teaching map of dimension at most k exists.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        /// Ball family: a file path, or the literal token STRICT.
        #[arg(long)]
        balls: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        /// Twins kept per class during kernelization (fpt only; default is
        /// the provable bound).
        #[arg(long)]
        retain: Option<usize>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Also write the witness map JSON here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a teaching map and report every conflicting ball pair.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        balls: String,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Reduce an instance by dropping surplus twin components.
    Kernelize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        balls: String,
        #[arg(long)]
        retain: Option<usize>,
        /// Output prefix; writes <prefix>.graph.txt, <prefix>.balls.txt and
        /// <prefix>.provenance.json.
        #[arg(long)]
        output: PathBuf,
    },
    /// Lift a reduced-instance teaching map back to the original instance.
    Lift {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        balls: String,
        #[arg(long)]
        reduced_graph: PathBuf,
        #[arg(long)]
        reduced_balls: String,
        #[arg(long)]
        provenance: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Minimum dimension by the naive enumeration oracle (small instances).
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        balls: String,
        /// Largest dimension to try (default: largest ball size).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Structural statistics: size, diameter, split flag, vertex-integrity
    /// witness, twin-class histogram.
    Stats {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "STRICT")]
        balls: String,
        /// Largest vertex-integrity budget to try.
        #[arg(long, default_value_t = 6)]
        p_max: usize,
    },
    /// Generate a hardness-reduction instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Strict split-graph instance from a 3-CNF formula (target dimension 2).
    Sat3 {
        /// DIMACS CNF input.
        #[arg(long)]
        cnf: Option<PathBuf>,
        /// Generate a random formula with this many variables instead.
        #[arg(long)]
        random_vars: Option<usize>,
        #[arg(long)]
        random_clauses: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output prefix; writes <prefix>.graph.txt, <prefix>.balls.txt and
        /// <prefix>.roles.json.
        #[arg(long)]
        output: PathBuf,
        /// Also write the witness map for a satisfying assignment, if one
        /// exists, to <prefix>.map.json.
        #[arg(long, default_value_t = false)]
        witness: bool,
    },
    /// Instance from an NAE integer formula (target dimension = variables).
    Nae {
        /// Formula file: first line d, then `x c_x y c_y z c_z` per clause.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        random_d: Option<usize>,
        #[arg(long)]
        random_vars: Option<usize>,
        #[arg(long)]
        random_clauses: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = false)]
        witness: bool,
    },
}

enum CliError {
    /// Usage or format problem: exit code 2.
    Usage(String),
    /// Well-formed run whose answer is negative: exit code 1.
    Infeasible(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Infeasible(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = read_file(path)?;
    Graph::from_text(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// `balls` is either the literal token STRICT or a path to a family file
/// (whose content may itself be the STRICT token).
fn load_family(graph: &Graph, balls: &str) -> Result<BallFamily, CliError> {
    if balls == "STRICT" {
        return Ok(BallFamily::strict(graph));
    }
    let text = read_file(Path::new(balls))?;
    BallFamily::from_text(graph, &text).map_err(|e| CliError::Usage(format!("{balls}: {e}")))
}

fn load_map(family: &BallFamily, path: &Path) -> Result<TeachingMap, CliError> {
    let text = read_file(path)?;
    TeachingMap::from_json(family, &text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn emit(format: Format, report: &serde_json::Value, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).unwrap()),
        Format::Text => println!("{}", text()),
    }
}

fn map_to_value(map: &TeachingMap, family: &BallFamily) -> serde_json::Value {
    serde_json::from_str(&map.to_json(family)).expect("map JSON is valid")
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            graph,
            balls,
            k,
            method,
            retain,
            workers,
            output,
        } => cmd_solve(cli.format, &graph, &balls, k, method, retain, workers, output),
        Command::Verify {
            graph,
            balls,
            map,
            workers,
        } => cmd_verify(cli.format, &graph, &balls, &map, workers),
        Command::Kernelize {
            graph,
            balls,
            retain,
            output,
        } => cmd_kernelize(cli.format, &graph, &balls, retain, &output),
        Command::Lift {
            graph,
            balls,
            reduced_graph,
            reduced_balls,
            provenance,
            map,
            output,
        } => cmd_lift(
            cli.format,
            &graph,
            &balls,
            &reduced_graph,
            &reduced_balls,
            &provenance,
            &map,
            output,
        ),
        Command::Oracle { graph, balls, cap } => cmd_oracle(cli.format, &graph, &balls, cap),
        Command::Stats {
            graph,
            balls,
            p_max,
        } => cmd_stats(cli.format, &graph, &balls, p_max),
        Command::Gen { kind } => cmd_gen(cli.format, kind),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    format: Format,
    graph: &Path,
    balls: &str,
    k: usize,
    method: Method,
    retain: Option<usize>,
    workers: usize,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    if matches!(method, Method::Exact) && retain.is_some() {
        return Err(CliError::Usage("--retain requires --method fpt".into()));
    }
    let g = load_graph(graph)?;
    let family = load_family(&g, balls)?;
    let _ = workers; // the search itself is single-threaded by contract
    let (status, extra) = match method {
        Method::Exact => (solve(&family, k).status, json!({})),
        Method::Fpt => {
            let retain = match retain {
                None => Retain::PaperBound,
                Some(r) => Retain::Count(r),
            };
            let report = fpt_solve(&family, k, &retain).map_err(CliError::usage)?;
            if matches!(retain, Retain::PaperBound) && !report.was_cut {
                eprintln!(
                    "note: retention bound exceeds every twin-class size; reduction was a no-op"
                );
            }
            let extra = json!({
                "p": report.p,
                "s": report.s,
                "k_effective": report.k_effective,
                "reduced_vertices": report.reduced_vertices,
                "was_cut": report.was_cut,
                "used_fallback": report.used_fallback,
            });
            (report.result.status, extra)
        }
    };
    match status {
        SolveStatus::Found(map) => {
            let mut report = json!({
                "status": "found",
                "k": k,
                "dimension": map.dimension(),
                "map": map_to_value(&map, &family),
            });
            merge(&mut report, extra);
            if let Some(path) = output {
                write_file(&path, &map.to_json(&family))?;
            }
            emit(format, &report, || {
                format!("found: teaching map of dimension {}", map.dimension())
            });
            Ok(())
        }
        SolveStatus::Infeasible => {
            let mut report = json!({ "status": "infeasible", "k": k });
            merge(&mut report, extra);
            emit(format, &report, || format!("infeasible at k = {k}"));
            Err(CliError::Infeasible(format!(
                "no teaching map of dimension at most {k}"
            )))
        }
    }
}

fn merge(into: &mut serde_json::Value, from: serde_json::Value) {
    if let (Some(a), Some(b)) = (into.as_object_mut(), from.as_object()) {
        for (key, value) in b {
            a.insert(key.clone(), value.clone());
        }
    }
}

fn cmd_verify(
    format: Format,
    graph: &Path,
    balls: &str,
    map: &Path,
    workers: usize,
) -> Result<(), CliError> {
    let g = load_graph(graph)?;
    let family = load_family(&g, balls)?;
    let map = load_map(&family, map)?;
    let conflicts = verify_with_workers(&family, &map, workers).map_err(CliError::usage)?;
    let listed: Vec<serde_json::Value> = conflicts
        .iter()
        .map(|c| {
            let a = family.ball(c.first);
            let b = family.ball(c.second);
            json!({
                "first": { "center": a.center(), "radius": a.radius() },
                "second": { "center": b.center(), "radius": b.radius() },
            })
        })
        .collect();
    let report = json!({
        "dimension": map.dimension(),
        "conflicts": listed,
    });
    emit(format, &report, || {
        if conflicts.is_empty() {
            "non-clashing: no conflicts".to_string()
        } else {
            describe_conflicts(&family, &conflicts)
        }
    });
    if conflicts.is_empty() {
        Ok(())
    } else {
        Err(CliError::Infeasible(format!(
            "{} conflicting pair(s)",
            conflicts.len()
        )))
    }
}

/// Smallest vertex-integrity budget with a witness.
fn minimal_witness(g: &Graph) -> ViWitness {
    for p in 1..=g.n().max(1) {
        if let Some(w) = vi_witness(g, p) {
            return w;
        }
    }
    unreachable!("p = n always admits the empty separator")
}

fn cmd_kernelize(
    format: Format,
    graph: &Path,
    balls: &str,
    retain: Option<usize>,
    output: &Path,
) -> Result<(), CliError> {
    let g = load_graph(graph)?;
    let family = load_family(&g, balls)?;
    let witness = minimal_witness(&g);
    let classes = twin_classes(&family, &witness);
    let bnds = bounds(&family, &witness, &classes);
    let retain = match retain {
        None => Retain::PaperBound,
        Some(r) => Retain::Count(r),
    };
    let reduced =
        reduce_instance(&family, &witness, &classes, &retain, &bnds).map_err(CliError::usage)?;
    let prefix = output.to_string_lossy();
    let graph_path = PathBuf::from(format!("{prefix}.graph.txt"));
    let balls_path = PathBuf::from(format!("{prefix}.balls.txt"));
    let prov_path = PathBuf::from(format!("{prefix}.provenance.json"));
    write_file(&graph_path, &reduced.family.graph().to_text())?;
    write_file(&balls_path, &reduced.family.to_text())?;
    write_file(
        &prov_path,
        &reduced.provenance.to_json(&reduced.family, &family),
    )?;
    let report = json!({
        "p": witness.p(),
        "s": bnds.s,
        "original_vertices": g.n(),
        "reduced_vertices": reduced.family.graph().n(),
        "original_balls": family.len(),
        "reduced_balls": reduced.family.len(),
        "was_cut": reduced.was_cut,
        "files": [graph_path, balls_path, prov_path],
    });
    emit(format, &report, || {
        format!(
            "reduced {} -> {} vertices (p = {})",
            g.n(),
            reduced.family.graph().n(),
            witness.p()
        )
    });
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_lift(
    format: Format,
    graph: &Path,
    balls: &str,
    reduced_graph: &Path,
    reduced_balls: &str,
    provenance: &Path,
    map: &Path,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let g = load_graph(graph)?;
    let family = load_family(&g, balls)?;
    let rg = load_graph(reduced_graph)?;
    let reduced_family = load_family(&rg, reduced_balls)?;
    let prov_text = read_file(provenance)?;
    let prov =
        Provenance::from_json(&prov_text, &reduced_family, &family).map_err(CliError::Usage)?;
    let witness = ViWitness::new(&g, prov.p, prov.x_old.clone()).map_err(CliError::usage)?;
    let classes = twin_classes(&family, &witness);
    let bnds = bounds(&family, &witness, &classes);
    let new_x: Vec<usize> = prov
        .x_old
        .iter()
        .map(|&v| prov.kept_old_ids.binary_search(&v).unwrap())
        .collect();
    let reduced_witness = ViWitness::new(&rg, prov.p, new_x).map_err(CliError::usage)?;
    let map_reduced = load_map(&reduced_family, map)?;
    let classes_reduced = twin_classes(&reduced_family, &reduced_witness);
    let compact = nonclash::vi::compactify(
        &reduced_family,
        &map_reduced,
        &reduced_witness,
        &classes_reduced,
        bnds.s,
    )
    .map_err(CliError::usage)?;
    let reduced = Reduced {
        family: reduced_family,
        witness: reduced_witness,
        provenance: prov,
        was_cut: rg.n() != g.n(),
    };
    match nonclash::vi::lift(&family, &witness, &classes, &reduced, &compact, bnds.s) {
        Ok(lifted) => {
            let report = json!({
                "status": "lifted",
                "dimension": lifted.dimension(),
                "map": map_to_value(&lifted, &family),
            });
            if let Some(path) = output {
                write_file(&path, &lifted.to_json(&family))?;
            }
            emit(format, &report, || {
                format!("lifted map of dimension {}", lifted.dimension())
            });
            Ok(())
        }
        Err(e) => Err(CliError::Infeasible(format!("lift failed: {e}"))),
    }
}

fn cmd_oracle(
    format: Format,
    graph: &Path,
    balls: &str,
    cap: Option<usize>,
) -> Result<(), CliError> {
    let g = load_graph(graph)?;
    let family = load_family(&g, balls)?;
    let cap = cap.unwrap_or_else(|| family.max_ball_size());
    match oracle_min_dimension(&family, cap).map_err(CliError::usage)? {
        OracleOutcome::Dimension(d) => {
            let report = json!({ "dimension": d, "cap": cap });
            emit(format, &report, || format!("minimum dimension {d}"));
            Ok(())
        }
        OracleOutcome::ExceedsCap => {
            let report = json!({ "dimension": null, "cap": cap });
            emit(format, &report, || format!("dimension exceeds cap {cap}"));
            Err(CliError::Infeasible(format!("dimension exceeds cap {cap}")))
        }
    }
}

fn cmd_stats(format: Format, graph: &Path, balls: &str, p_max: usize) -> Result<(), CliError> {
    let g = load_graph(graph)?;
    let family = load_family(&g, balls)?;
    let diameter = g.diameter();
    let witness = (1..=p_max).find_map(|p| vi_witness(&g, p));
    let (vi_value, histogram) = match &witness {
        None => (serde_json::Value::Null, serde_json::Value::Null),
        Some(w) => {
            let classes = twin_classes(&family, w);
            let mut hist = std::collections::BTreeMap::new();
            for class in classes.classes() {
                *hist.entry(class.size().to_string()).or_insert(0u64) += 1;
            }
            (
                json!({ "p": w.p(), "X": w.x(), "components": w.components().len() }),
                json!(hist),
            )
        }
    };
    let report = json!({
        "n": g.n(),
        "m": g.m(),
        "balls": family.len(),
        "strict": family.is_strict(),
        "diameter": { "finite": diameter.finite, "infinite": diameter.infinite },
        "split": g.is_split().is_some(),
        "vertex_integrity": vi_value,
        "twin_class_sizes": histogram,
    });
    emit(format, &report, || {
        format!(
            "n = {}, m = {}, balls = {}, split = {}",
            g.n(),
            g.m(),
            family.len(),
            g.is_split().is_some()
        )
    });
    Ok(())
}

fn cmd_gen(format: Format, kind: GenKind) -> Result<(), CliError> {
    match kind {
        GenKind::Sat3 {
            cnf,
            random_vars,
            random_clauses,
            seed,
            output,
            witness,
        } => {
            let phi = match (cnf, random_vars, random_clauses) {
                (Some(path), None, None) => {
                    if seed.is_some() {
                        return Err(CliError::Usage(
                            "--seed only applies to random generation".into(),
                        ));
                    }
                    let text = read_file(&path)?;
                    CnfFormula::from_dimacs(&text)
                        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
                }
                (None, Some(vars), Some(clauses)) => {
                    if vars == 0 {
                        return Err(CliError::Usage("--random-vars must be positive".into()));
                    }
                    let mut rng = ChaCha12Rng::seed_from_u64(seed.unwrap_or(DEFAULT_SEED));
                    let clauses = (0..clauses)
                        .map(|_| {
                            [0, 1, 2].map(|_| Lit {
                                var: rng.gen_range(0..vars),
                                negated: rng.gen_bool(0.5),
                            })
                        })
                        .collect();
                    CnfFormula::new(vars, clauses).map_err(CliError::usage)?
                }
                _ => {
                    return Err(CliError::Usage(
                        "pass either --cnf or both --random-vars and --random-clauses".into(),
                    ))
                }
            };
            let inst = gen_sat3(&phi).map_err(CliError::usage)?;
            let witness_file = if witness {
                match sat3_brute(&phi).map_err(CliError::usage)? {
                    Some(tau) => {
                        let map = table1_map(&inst, &tau).map_err(CliError::usage)?;
                        debug_assert!(extract_assignment_sat3(&inst, &map).is_ok());
                        let path = PathBuf::from(format!("{}.map.json", output.to_string_lossy()));
                        write_file(&path, &map.to_json(&inst.instance.family))?;
                        Some(path)
                    }
                    None => {
                        eprintln!("note: formula unsatisfiable; no witness map written");
                        None
                    }
                }
            } else {
                None
            };
            emit_instance(format, &inst.instance, &output, witness_file)
        }
        GenKind::Nae {
            input,
            random_d,
            random_vars,
            random_clauses,
            seed,
            output,
            witness,
        } => {
            let psi = match (input, random_d, random_vars, random_clauses) {
                (Some(path), None, None, None) => {
                    if seed.is_some() {
                        return Err(CliError::Usage(
                            "--seed only applies to random generation".into(),
                        ));
                    }
                    let text = read_file(&path)?;
                    NaeFormula::from_text(&text)
                        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
                }
                (None, Some(d), Some(vars), Some(clauses)) => {
                    if vars < 3 {
                        return Err(CliError::Usage(
                            "--random-vars must be at least 3 (clauses need distinct variables)"
                                .into(),
                        ));
                    }
                    let mut rng = ChaCha12Rng::seed_from_u64(seed.unwrap_or(DEFAULT_SEED));
                    let clauses = (0..clauses)
                        .map(|_| {
                            let mut vs: Vec<usize> = (0..vars).collect();
                            for i in 0..3 {
                                let j = rng.gen_range(i..vs.len());
                                vs.swap(i, j);
                            }
                            NaeClause {
                                terms: [0, 1, 2].map(|i| (vs[i], rng.gen_range(1..=d))),
                            }
                        })
                        .collect();
                    NaeFormula::new(d, vars, clauses).map_err(CliError::usage)?
                }
                _ => {
                    return Err(CliError::Usage(
                        "pass either --input or all of --random-d, --random-vars, --random-clauses"
                            .into(),
                    ))
                }
            };
            let inst = gen_nae(&psi).map_err(CliError::usage)?;
            let witness_file = if witness {
                match nae_brute(&psi).map_err(CliError::usage)? {
                    Some(sigma) => {
                        let map = nae_witness_map(&inst, &sigma).map_err(CliError::usage)?;
                        debug_assert!(extract_assignment_nae(&inst, &map).is_ok());
                        let path = PathBuf::from(format!("{}.map.json", output.to_string_lossy()));
                        write_file(&path, &map.to_json(&inst.instance.family))?;
                        Some(path)
                    }
                    None => {
                        eprintln!("note: formula not NAE-satisfiable; no witness map written");
                        None
                    }
                }
            } else {
                None
            };
            emit_instance(format, &inst.instance, &output, witness_file)
        }
    }
}

fn emit_instance(
    format: Format,
    inst: &nonclash::reductions::GeneratedInstance,
    output: &Path,
    witness_file: Option<PathBuf>,
) -> Result<(), CliError> {
    let prefix = output.to_string_lossy();
    let graph_path = PathBuf::from(format!("{prefix}.graph.txt"));
    let balls_path = PathBuf::from(format!("{prefix}.balls.txt"));
    let roles_path = PathBuf::from(format!("{prefix}.roles.json"));
    write_file(&graph_path, &inst.graph().to_text())?;
    write_file(&balls_path, &inst.family.to_text())?;
    write_file(&roles_path, &inst.roles_json())?;
    let mut files = vec![graph_path, balls_path, roles_path];
    if let Some(w) = witness_file {
        files.push(w);
    }
    let report = json!({
        "n": inst.graph().n(),
        "m": inst.graph().m(),
        "balls": inst.family.len(),
        "k": inst.k,
        "files": files,
    });
    emit(format, &report, || {
        format!(
            "generated instance: n = {}, m = {}, balls = {}, k = {}",
            inst.graph().n(),
            inst.graph().m(),
            inst.family.len(),
            inst.k
        )
    });
    Ok(())
}
