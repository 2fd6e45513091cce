//! The `korb` command line. Exit codes: 0 success, 1 a failed lemma check
//! or a non-isomorphic pair under `--expect-iso`, 2 usage errors and
//! malformed input, 3 exhausted budgets and undecided isomorphism.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use korb_core::aut::{aut_of_kset, classify_k_defined, k_closure_with, ClosureMode, SearchBudget};
use korb_core::gi::{isomorphic, orbit_partition, Graph, IsoAnswer, OrbitStatus};
use korb_core::korbit::{orbits_k, DEFAULT_TUPLE_BUDGET};
use korb_core::structure::{
    coherence_classify_with, is_rorbit, polycirculant_witness_with, CoherenceOptions, Elementary, PolycircOptions, PolycircOutcome,
};
use korb_core::{Error, PermGroup};
use serde_json::{json, Value};

use crate::catalog::{build_catalog, primitivity_name, Catalog};
use crate::data::{reconstruct_paper_example, EXAMPLE_IDS};
use crate::format::{parse_graph, parse_group, parse_kset, read_file, write_kset};
use crate::lab::{resolve_suites, run_suite, summary, to_json_lines, LabOptions, Verdict, SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "korb", version, about = "k-orbits of permutation groups: closures, coherence, regular elements, graph isomorphism")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Search budget (nodes, or tuples for orbit listing).
    #[arg(long, global = true, env = "KORB_BUDGET")]
    budget: Option<u64>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Direct,
    Intersection,
}

impl From<Mode> for ClosureMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Direct => ClosureMode::Direct,
            Mode::Intersection => ClosureMode::Intersection,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the k-orbits of a group.
    Orbits {
        #[arg(long)]
        group: PathBuf,
        #[arg(short = 'k')]
        k: usize,
    },
    /// The k-closure of a group.
    Closure {
        #[arg(long)]
        group: PathBuf,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long, value_enum, default_value_t = Mode::Direct)]
        mode: Mode,
    },
    /// Closures for k = 1.. until the group is k-defined.
    Classify {
        /// Group file; alternatively `--kset` takes the automorphism group
        /// of a k-set.
        #[arg(long, required_unless_present = "kset", conflicts_with = "kset")]
        group: Option<PathBuf>,
        #[arg(long)]
        kset: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t = Mode::Direct)]
        mode: Mode,
    },
    /// Coherence classification of the k-rorbits.
    Coherence {
        #[arg(long)]
        group: PathBuf,
        /// A single arity; otherwise 2..=kmax.
        #[arg(short = 'k')]
        k: Option<usize>,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
    /// A semiregular element of the 2-closure of a transitive group.
    Polycirc {
        #[arg(long)]
        group: PathBuf,
    },
    /// Orbit partition of one graph, or isomorphism of two.
    Gi {
        #[arg(long, required = true, num_args = 1)]
        graph: Vec<PathBuf>,
        /// Exit 1 when the two graphs are not isomorphic.
        #[arg(long)]
        expect_iso: bool,
    },
    /// Run claim suites over the group catalog.
    Lemmas {
        /// Claim id or `all`; repeatable.
        #[arg(long, default_value = "all")]
        suite: Vec<String>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Load the catalog from a directory written by `--write-catalog`.
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Write the generated catalog to a directory and continue.
        #[arg(long)]
        write_catalog: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        max_degree: usize,
        #[arg(long, default_value_t = 12)]
        samples: usize,
        /// Include per-check runtimes in the output.
        #[arg(long)]
        timings: bool,
    },
    /// Print a bundled example set and its group.
    Example {
        /// One of the bundled ids, e.g. Y10 or X2'.
        id: String,
    },
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } | Error::GroupTooLarge { .. } | Error::DegreeTooLarge { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Runs the command line and returns the exit code; results go to `out`,
/// diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "korb: {}", f.message);
            f.code
        }
    }
}

fn budget(cli: &Cli) -> SearchBudget {
    cli.budget.map(|b| SearchBudget { max_nodes: b }).unwrap_or_default()
}

fn load_group(path: &Path) -> Result<PermGroup, Failure> {
    let text = read_file(path).map_err(usage)?;
    parse_group(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = read_file(path).map_err(usage)?;
    parse_graph(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, format: Format, value: Value, text: String) -> Result<(), Failure> {
    let r = match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&value).expect("serializable")),
        Format::Text => write!(out, "{text}"),
    };
    r.map_err(|e| usage(format!("write failed: {e}")))
}

fn one_based(t: &[u16]) -> Vec<usize> {
    t.iter().map(|&v| v as usize + 1).collect()
}

fn tuple_text(t: &[u16]) -> String {
    one_based(t).iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn gens_of(g: &PermGroup) -> Vec<String> {
    g.generators().iter().filter(|p| !p.is_identity()).map(|p| p.to_string()).collect()
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let fmt = cli.format;
    match &cli.command {
        Command::Orbits { group, k } => {
            let g = Arc::new(load_group(group)?);
            let tuples = cli.budget.map(u128::from).unwrap_or(DEFAULT_TUPLE_BUDGET);
            let orbits = orbits_k(&g, *k, tuples)?;
            let mut text = format!("degree {} order {} k {}: {} orbits\n", g.degree(), g.order()?, k, orbits.len());
            let mut list = Vec::new();
            for (i, o) in orbits.iter().enumerate() {
                text.push_str(&format!("orbit {}: {} tuples\n", i + 1, o.len()));
                for t in o.set.iter() {
                    text.push_str(&format!("  {}\n", tuple_text(t)));
                }
                list.push(json!({"size": o.len(), "tuples": o.set.iter().map(one_based).collect::<Vec<_>>()}));
            }
            let v = json!({"schema": SCHEMA, "command": "orbits", "degree": g.degree(), "order": g.order()?, "k": k, "orbits": list});
            emit(out, fmt, v, text)?;
            Ok(EXIT_OK)
        }
        Command::Closure { group, k, mode } => {
            let g = Arc::new(load_group(group)?);
            let c = k_closure_with(&g, *k, (*mode).into(), usize::MAX, budget(cli))?;
            let (go, co) = (g.order()?, c.order()?);
            let gens = gens_of(&c);
            let text = format!(
                "|G| = {go}, |{k}-closure| = {co} ({})\ngenerators:\n{}",
                if go == co { "G is k-defined" } else { "G is not k-defined" },
                gens.iter().map(|s| format!("  {s}\n")).collect::<String>()
            );
            let v = json!({"schema": SCHEMA, "command": "closure", "k": k, "mode": ClosureMode::from(*mode).name(),
                           "group_order": go, "closure_order": co, "k_defined": go == co, "generators": gens});
            emit(out, fmt, v, text)?;
            Ok(EXIT_OK)
        }
        Command::Classify { group, kset, kmax, mode } => {
            let g = match (group, kset) {
                (Some(p), _) => load_group(p)?,
                (None, Some(p)) => {
                    let text = read_file(p).map_err(usage)?;
                    let x = parse_kset(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                    aut_of_kset(&x)?
                }
                (None, None) => return Err(usage("classify needs --group or --kset")),
            };
            let g = Arc::new(g);
            let r = classify_k_defined(&g, *kmax, (*mode).into(), budget(cli))?;
            let mut text = format!("degree {} order {}\n", r.degree, r.group_order);
            for (k, o) in &r.closure_orders {
                text.push_str(&format!("  |{k}-closure| = {o}\n"));
            }
            match r.least_k {
                Some(l) => text.push_str(&format!("{l}-closed\n")),
                None => text.push_str(&format!("not k-defined for k <= {}\n", r.k_max)),
            }
            let v = json!({"schema": SCHEMA, "command": "classify", "degree": r.degree, "group_order": r.group_order,
                           "mode": r.mode.name(), "kmax": r.k_max, "generators": gens_of(&g),
                           "closure_orders": r.closure_orders.iter().map(|(k, o)| json!({"k": k, "order": o})).collect::<Vec<_>>(),
                           "k_closed": r.least_k, "two_closed": r.is_k_defined(2)});
            emit(out, fmt, v, text)?;
            Ok(EXIT_OK)
        }
        Command::Coherence { group, k, kmax } => {
            let g = Arc::new(load_group(group)?);
            let n = g.degree();
            let ks: Vec<usize> = match k {
                Some(k) => vec![*k],
                None => (2..=(*kmax).min(n.saturating_sub(1))).collect(),
            };
            let mut opts = CoherenceOptions { budget: budget(cli), ..CoherenceOptions::default() };
            opts.scan.seed = cli.seed;
            let mut text = String::new();
            let mut list = Vec::new();
            for &k in &ks {
                for o in orbits_k(&g, k, DEFAULT_TUPLE_BUDGET)? {
                    if !is_rorbit(&o.set, &g)? {
                        continue;
                    }
                    let r = coherence_classify_with(&o, &opts)?;
                    let aut = aut_of_kset(&o.set)?;
                    let prim = primitivity_name(&aut.is_primitive());
                    let (elem, exhaustive) = match &r.elementary {
                        Elementary::Yes { exhaustive } => ("elementary", Some(*exhaustive)),
                        Elementary::No { .. } => ("not elementary", None),
                        Elementary::NotApplicable => ("n/a", None),
                    };
                    text.push_str(&format!(
                        "k {k} rep {} size {}: {}, {elem}{}, |Aut| {} {prim}\n",
                        tuple_text(o.set.tuple(0)),
                        r.size,
                        r.verdict.name(),
                        if exhaustive == Some(false) { " (sampled)" } else { "" },
                        r.aut_order
                    ));
                    list.push(json!({"k": k, "representative": one_based(o.set.tuple(0)), "size": r.size,
                                     "verdict": r.verdict.name(), "elementary": elem, "exhaustive": exhaustive,
                                     "blocks": r.blocks.len(), "aut_order": r.aut_order, "aut_primitivity": prim}));
                }
            }
            let v = json!({"schema": SCHEMA, "command": "coherence", "degree": n, "rorbits": list});
            emit(out, fmt, v, text)?;
            Ok(EXIT_OK)
        }
        Command::Polycirc { group } => {
            let g = load_group(group)?;
            if !g.is_transitive() {
                return Err(usage("polycirc needs a transitive group"));
            }
            let mut opts = PolycircOptions::default();
            opts.scan.seed = cli.seed;
            if let Some(b) = cli.budget {
                opts.max_nodes = b;
            }
            match polycirculant_witness_with(&g, &opts)? {
                PolycircOutcome::Witness(w) => {
                    let (method, p) = (w.method.name(), w.method.prime());
                    let text = format!("regular element {} with cycle length {} ({method}, p = {p}, in G: {})\n", w.element, w.cycle_len, w.in_group);
                    let v = json!({"schema": SCHEMA, "command": "polycirc", "degree": g.degree(), "order": g.order()?,
                                   "witness": {"element": w.element.to_string(), "cycle_length": w.cycle_len,
                                               "method": method, "p": p, "in_group": w.in_group}});
                    emit(out, fmt, v, text)?;
                    Ok(EXIT_OK)
                }
                PolycircOutcome::CounterexampleCandidate { degree, order } => {
                    let text = format!("counterexample candidate: the 2-closure (order {order}) of degree {degree} has no regular element\n");
                    let v = json!({"schema": SCHEMA, "command": "polycirc", "degree": degree, "counterexample_candidate": {"closure_order": order}});
                    emit(out, fmt, v, text)?;
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::Gi { graph, expect_iso } => gi(cli, graph, *expect_iso, out),
        Command::Lemmas { suite, jobs, catalog, write_catalog, max_degree, samples, timings } => {
            let claims = resolve_suites(suite).map_err(usage)?;
            let cat = match catalog {
                Some(dir) => Catalog::load_dir(dir).map_err(usage)?,
                None => build_catalog(*max_degree, *samples, cli.seed),
            };
            if let Some(dir) = write_catalog {
                cat.write_dir(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
            }
            let opts = LabOptions { seed: cli.seed, budget: budget(cli), jobs: *jobs, timings: *timings };
            let checks = run_suite(&cat, &claims, &opts).map_err(usage)?;
            let r = match fmt {
                Format::Json => write!(out, "{}", to_json_lines(&checks)),
                Format::Text => write!(out, "{}", summary(&checks)),
            };
            r.map_err(|e| usage(format!("write failed: {e}")))?;
            if checks.iter().any(|c| c.verdict == Verdict::Fail) {
                Ok(EXIT_FAIL)
            } else if checks.iter().any(|c| c.error.is_some()) {
                Ok(EXIT_BUDGET)
            } else {
                Ok(EXIT_OK)
            }
        }
        Command::Example { id } => {
            let e = reconstruct_paper_example(id).map_err(|e| {
                if e.message == "unknown example id" {
                    usage(format!("unknown example '{id}'; known: {}", EXAMPLE_IDS.join(", ")))
                } else {
                    usage(e.to_string())
                }
            })?;
            let gens = gens_of(&e.group);
            let prim = primitivity_name(&e.group.is_primitive());
            let text = format!(
                "# {}: {}\n# group order {} ({prim}), generators {}\n{}",
                e.id,
                e.description,
                e.group.order()?,
                gens.join(" "),
                write_kset(&e.set)
            );
            let v = json!({"schema": SCHEMA, "command": "example", "id": e.id, "description": e.description,
                           "arity": e.set.arity(), "degree": e.set.degree(), "rows": e.set.iter().map(one_based).collect::<Vec<_>>(),
                           "group_order": e.group.order()?, "group_generators": gens, "group_primitivity": prim, "sha256": e.sha256});
            emit(out, fmt, v, text)?;
            Ok(EXIT_OK)
        }
    }
}

fn partition_json(classes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    classes.iter().map(|c| c.iter().map(|v| v + 1).collect()).collect()
}

fn partition_text(classes: &[Vec<usize>]) -> String {
    classes
        .iter()
        .map(|c| format!("{{{}}}", c.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn gi(cli: &Cli, paths: &[PathBuf], expect_iso: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let b = budget(cli);
    match paths {
        [p] => {
            let g = load_graph(p)?;
            let op = orbit_partition(&g, b)?;
            let (status, exact) = match op.status {
                OrbitStatus::Exact { refinement_exact } => ("exact", Some(refinement_exact)),
                OrbitStatus::RefinementStableUnverified => ("refinement-stable-unverified", None),
            };
            let text = format!(
                "vertex orbits: {}\npair class sizes: {:?}\nstatus: {status}{}\n",
                partition_text(&op.vertex_classes),
                op.pair_class_sizes,
                match exact {
                    Some(true) => ", refinement reached the orbits",
                    Some(false) => ", refinement stabilized coarser than the orbits",
                    None => "",
                }
            );
            let v = json!({"schema": SCHEMA, "command": "gi", "vertices": g.order(), "vertex_partition": partition_json(&op.vertex_classes),
                           "pair_class_sizes": op.pair_class_sizes, "status": status, "refinement_exact": exact,
                           "automorphism_generators": op.generators.iter().map(|p| p.to_string()).collect::<Vec<_>>()});
            emit(out, cli.format, v, text)?;
            Ok(if exact.is_some() { EXIT_OK } else { EXIT_BUDGET })
        }
        [pa, pb] => {
            let (a, bg) = (load_graph(pa)?, load_graph(pb)?);
            let pa_op = orbit_partition(&a, b)?;
            let pb_op = orbit_partition(&bg, b)?;
            let answer = isomorphic(&a, &bg, b)?;
            let (decision, bijection, reason) = match &answer {
                IsoAnswer::Yes { bijection } => ("isomorphic", Some(bijection.iter().map(|v| v + 1).collect::<Vec<_>>()), None),
                IsoAnswer::No { reason } => ("not isomorphic", None, Some(reason.clone())),
                IsoAnswer::Undecided => ("undecided", None, None),
            };
            let mut text = format!(
                "first vertex orbits: {}\nsecond vertex orbits: {}\npair class sizes: {:?} / {:?}\ndecision: {decision}\n",
                partition_text(&pa_op.vertex_classes),
                partition_text(&pb_op.vertex_classes),
                pa_op.pair_class_sizes,
                pb_op.pair_class_sizes
            );
            if let Some(bij) = &bijection {
                text.push_str(&format!("bijection: {}\n", bij.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")));
            }
            if let Some(r) = &reason {
                text.push_str(&format!("reason: {r}\n"));
            }
            let v = json!({"schema": SCHEMA, "command": "gi", "decision": decision, "bijection": bijection, "reason": reason,
                           "vertex_partitions": [partition_json(&pa_op.vertex_classes), partition_json(&pb_op.vertex_classes)],
                           "pair_class_sizes": [pa_op.pair_class_sizes, pb_op.pair_class_sizes]});
            emit(out, cli.format, v, text)?;
            Ok(match answer {
                IsoAnswer::Yes { .. } => EXIT_OK,
                IsoAnswer::No { .. } => {
                    if expect_iso {
                        EXIT_FAIL
                    } else {
                        EXIT_OK
                    }
                }
                IsoAnswer::Undecided => EXIT_BUDGET,
            })
        }
        _ => Err(usage("gi takes one or two --graph files")),
    }
}
