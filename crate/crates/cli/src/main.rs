//! `bundles`: command-line front end for the graph-bundles library.
//!
//! Builds the example connections as files, runs verification checks on
//! connection files, counts closed walks, splits bundle walks into base and
//! fiber parts, exports Graphviz DOT, and sweeps the projection-count
//! closed form. Every command except `export-dot` emits one JSON report;
//! reports are byte-identical across runs unless `--timings` is given.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use graph_bundles::bundle::{Bundle, Connection, Triviality};
use graph_bundles::error::{Error, Result};
use graph_bundles::examples::{ExampleSpec, ExpectedProperties};
use graph_bundles::walks::Path as WalkPath;
use graph_bundles::{io, ricci, symmetry, walks};

#[derive(Parser)]
#[command(
    name = "bundles",
    version,
    about = "Build, verify, and export finite graph bundles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report (or DOT text) to this file instead of standard
    /// output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Echoed into the report for provenance; no command draws randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Add wall-clock duration to the report and print it to standard
    /// error. Off by default so repeated runs emit identical bytes.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named example and write its graph, connection, and property
    /// card files.
    Example(ExampleArgs),
    /// Run selected checks on a connection file, comparing against its
    /// property card when one is found.
    Check(CheckArgs),
    /// Count closed walks of one length based at one vertex of a graph.
    Count(CountArgs),
    /// Split a closed walk in a bundle's total graph into its base and
    /// fiber parts.
    Project(ProjectArgs),
    /// Write a graph file as Graphviz DOT.
    ExportDot(ExportDotArgs),
    /// Check the projection-count closed form on every base-loop and
    /// fiber-path pair up to a total length.
    VerifyLemmas(VerifyLemmasArgs),
}

#[derive(Args)]
struct ExampleArgs {
    /// Example family: eg2, eg3, dvb1, dvb2-torus, or product.
    name: String,
    /// Base cycle length (eg2, eg3, dvb1, product).
    #[arg(long)]
    n: Option<usize>,
    /// Fiber size (eg2, product).
    #[arg(long)]
    m: Option<usize>,
    /// Number of disjoint twist cycles (eg3).
    #[arg(long)]
    i: Option<usize>,
    /// Torus side length (dvb2-torus).
    #[arg(long = "N")]
    side: Option<usize>,
    /// Directory the files are written into.
    #[arg(long, default_value = ".")]
    dir: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    /// Connection file to load.
    connection: PathBuf,
    /// Comma-separated checks: trivial, dvb, transitive, orbits, ricci,
    /// s-ricci, theorem2, theorem4, 4loop.
    #[arg(long, value_delimiter = ',', required = true)]
    checks: Vec<String>,
    /// Property card with expected values; defaults to the connection's
    /// sibling `<stem>.card.json` when that file exists.
    #[arg(long)]
    card: Option<PathBuf>,
    /// Skip card discovery; run the checks without comparing expectations.
    #[arg(long)]
    no_card: bool,
}

#[derive(Args)]
struct CountArgs {
    /// Graph file to load.
    graph: PathBuf,
    /// Base vertex of the counted walks.
    #[arg(long)]
    vertex: usize,
    /// Walk length.
    #[arg(long)]
    length: usize,
    /// Largest length accepted before refusing the computation.
    #[arg(long, default_value_t = 16)]
    max_length: usize,
}

#[derive(Args)]
struct ProjectArgs {
    /// Connection file whose bundle the walk lives in.
    connection: PathBuf,
    /// Comma-separated vertex indices of a walk in the total graph.
    #[arg(long, value_delimiter = ',', required = true)]
    walk: Vec<usize>,
}

#[derive(Args)]
struct ExportDotArgs {
    /// Graph file to render.
    graph: PathBuf,
}

#[derive(Args)]
struct VerifyLemmasArgs {
    /// Connection file whose bundle is swept.
    connection: PathBuf,
    /// Largest combined base-plus-fiber length.
    #[arg(long, default_value_t = 6)]
    max_total: usize,
    /// Base coordinate of the start vertex.
    #[arg(long, default_value_t = 0)]
    base_vertex: usize,
    /// Fiber coordinate of the start vertex.
    #[arg(long, default_value_t = 0)]
    fiber_vertex: usize,
}

/// JSON report wrapper shared by every command that emits one.
#[derive(Serialize)]
struct Report {
    schema: u32,
    command: String,
    args: BTreeMap<String, Value>,
    inputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    expectations: Option<Value>,
    version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    duration_ms: Option<u128>,
}

/// Property card written next to each example and read back by `check`.
#[derive(Serialize, Deserialize)]
struct CardFile {
    schema: u32,
    example: ExampleSpec,
    expected: ExpectedProperties,
}

/// What one command produced: either a JSON results section (plus optional
/// expectation comparisons) or raw text, with the exit code to use.
struct Outcome {
    args: BTreeMap<String, Value>,
    inputs: BTreeMap<String, String>,
    results: Value,
    expectations: Option<Value>,
    raw: Option<String>,
    exit: u8,
}

impl Outcome {
    fn report(args: BTreeMap<String, Value>, inputs: BTreeMap<String, String>, results: Value) -> Outcome {
        Outcome {
            args,
            inputs,
            results,
            expectations: None,
            raw: None,
            exit: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let command = command_name(&cli.command);
    let outcome = match run(&cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            let exit = match e {
                Error::ResourceCap { .. } => 3,
                _ => 2,
            };
            return ExitCode::from(exit);
        }
    };
    let text = match &outcome.raw {
        Some(raw) => raw.clone(),
        None => {
            let report = Report {
                schema: 1,
                command: command.to_string(),
                args: outcome.args,
                inputs: outcome.inputs,
                seed: cli.seed,
                results: outcome.results,
                expectations: outcome.expectations,
                version: env!("CARGO_PKG_VERSION").to_string(),
                duration_ms: cli.timings.then(|| started.elapsed().as_millis()),
            };
            let mut text =
                serde_json::to_string_pretty(&report).expect("reports hold only plain data");
            text.push('\n');
            text
        }
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    } else {
        print!("{text}");
    }
    if cli.timings {
        eprintln!("{command}: {} ms", started.elapsed().as_millis());
    }
    ExitCode::from(outcome.exit)
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Example(_) => "example",
        Command::Check(_) => "check",
        Command::Count(_) => "count",
        Command::Project(_) => "project",
        Command::ExportDot(_) => "export-dot",
        Command::VerifyLemmas(_) => "verify-lemmas",
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Example(a) => cmd_example(a),
        Command::Check(a) => cmd_check(a),
        Command::Count(a) => cmd_count(a),
        Command::Project(a) => cmd_project(a),
        Command::ExportDot(a) => cmd_export_dot(a),
        Command::VerifyLemmas(a) => cmd_verify_lemmas(a),
    }
}

fn digest_file(path: &std::path::Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}

fn shown(path: &std::path::Path) -> String {
    path.display().to_string()
}

fn cmd_example(a: &ExampleArgs) -> Result<Outcome> {
    let mut params: Vec<(&str, usize)> = Vec::new();
    for (key, value) in [("n", a.n), ("m", a.m), ("i", a.i), ("N", a.side)] {
        if let Some(v) = value {
            params.push((key, v));
        }
    }
    let spec = ExampleSpec::new(&a.name, &params);
    let connection = spec.connection()?;
    let bundle = Bundle::build(connection.clone());
    let card = CardFile {
        schema: 1,
        example: spec.clone(),
        expected: spec.expected()?,
    };
    std::fs::create_dir_all(&a.dir)?;

    let stem = spec.stem();
    let base_name = format!("{stem}.base.graph");
    let fiber_name = format!("{stem}.fiber.graph");
    let conn_name = format!("{stem}.conn");
    let bundle_name = format!("{stem}.bundle.graph");
    let card_name = format!("{stem}.card.json");
    io::save_graph(connection.base(), &a.dir.join(&base_name))?;
    io::save_graph(connection.fiber(), &a.dir.join(&fiber_name))?;
    io::save_connection(&connection, &a.dir.join(&conn_name), &base_name, &fiber_name)?;
    io::save_graph(bundle.total(), &a.dir.join(&bundle_name))?;
    let mut card_text =
        serde_json::to_string_pretty(&card).expect("cards hold only plain data");
    card_text.push('\n');
    std::fs::write(a.dir.join(&card_name), &card_text)?;

    let mut files = BTreeMap::new();
    for name in [&base_name, &fiber_name, &conn_name, &bundle_name, &card_name] {
        files.insert(name.clone(), digest_file(&a.dir.join(name))?);
    }
    let mut args = BTreeMap::new();
    args.insert("name".into(), json!(a.name));
    args.insert(
        "params".into(),
        json!(params.iter().copied().collect::<BTreeMap<_, _>>()),
    );
    args.insert("dir".into(), json!(shown(&a.dir)));
    let results = json!({
        "stem": stem,
        "base_vertices": connection.base().vertex_count(),
        "fiber_vertices": connection.fiber().vertex_count(),
        "total_vertices": bundle.total().vertex_count(),
        "files": files,
    });
    Ok(Outcome::report(args, BTreeMap::new(), results))
}

const CHECK_TOKENS: [&str; 9] = [
    "trivial",
    "dvb",
    "transitive",
    "orbits",
    "ricci",
    "s-ricci",
    "theorem2",
    "theorem4",
    "4loop",
];

fn cmd_check(a: &CheckArgs) -> Result<Outcome> {
    for token in &a.checks {
        if !CHECK_TOKENS.contains(&token.as_str()) {
            return Err(Error::InvalidParameter(format!(
                "unknown check {token:?}; expected one of {CHECK_TOKENS:?}"
            )));
        }
    }
    let connection = io::read_connection(&a.connection)?;
    let bundle = Bundle::build(connection.clone());
    let mut inputs = BTreeMap::new();
    inputs.insert(shown(&a.connection), digest_file(&a.connection)?);

    let card_path = if a.no_card {
        None
    } else if let Some(path) = &a.card {
        Some(path.clone())
    } else {
        let sibling = a.connection.with_extension("card.json");
        sibling.exists().then_some(sibling)
    };
    let card: Option<CardFile> = match &card_path {
        Some(path) => {
            inputs.insert(shown(path), digest_file(path)?);
            let text = std::fs::read_to_string(path)?;
            Some(serde_json::from_str(&text).map_err(|e| Error::Parse {
                line: e.line(),
                message: format!("property card {}: {e}", path.display()),
            })?)
        }
        None => None,
    };

    let mut ran: Vec<&str> = Vec::new();
    let mut results = BTreeMap::new();
    let mut actuals: BTreeMap<&str, Value> = BTreeMap::new();
    for token in &a.checks {
        let token = token.as_str();
        if ran.contains(&token) {
            continue;
        }
        ran.push(token);
        let (value, actual) = run_one_check(token, &connection, &bundle)?;
        results.insert(token.to_string(), value);
        if let Some(actual) = actual {
            actuals.insert(token, actual);
        }
    }

    let mut expectations = None;
    let mut exit = 0;
    if let Some(card) = &card {
        let mut entries = Vec::new();
        for (token, actual) in &actuals {
            if let Some(expected) = card_expectation(&card.expected, token) {
                let matched = &expected == actual;
                if !matched {
                    exit = 1;
                }
                entries.push(json!({
                    "check": token,
                    "expected": expected,
                    "actual": actual,
                    "matched": matched,
                }));
            }
        }
        expectations = Some(json!({
            "card": card_path.as_deref().map(shown),
            "entries": entries,
            "all_matched": exit == 0,
        }));
    }

    let mut args = BTreeMap::new();
    args.insert("connection".into(), json!(shown(&a.connection)));
    args.insert("checks".into(), json!(a.checks));
    if let Some(path) = &a.card {
        args.insert("card".into(), json!(shown(path)));
    }
    if a.no_card {
        args.insert("no_card".into(), json!(true));
    }
    Ok(Outcome {
        args,
        inputs,
        results: json!(results),
        expectations,
        raw: None,
        exit,
    })
}

/// Runs one named check. Returns its results value and, when the check has
/// a property-card counterpart, the actual value to compare.
fn run_one_check(token: &str, c: &Connection, b: &Bundle) -> Result<(Value, Option<Value>)> {
    Ok(match token {
        "trivial" => match c.triviality() {
            Triviality::Trivial { vertex_maps } => (
                json!({"trivial": true, "vertex_maps": vertex_maps}),
                Some(json!(true)),
            ),
            Triviality::NonTrivial { witness } => (
                json!({"trivial": false, "witness": witness}),
                Some(json!(false)),
            ),
        },
        "dvb" => {
            let fixed: Vec<usize> = c.null_elements().into_iter().collect();
            let holds = c.is_discrete_vector_bundle();
            (
                json!({"is_discrete_vector_bundle": holds, "null_elements": fixed}),
                Some(json!(holds)),
            )
        }
        "transitive" => {
            let transitive = symmetry::is_vertex_transitive(b.total())?;
            (
                json!({"vertex_transitive": transitive}),
                Some(json!(transitive)),
            )
        }
        "orbits" => {
            let group = symmetry::automorphism_group(b.total())?;
            (
                json!({
                    "orbit_count": group.orbits.count(),
                    "orbit_classes": group.orbits.classes,
                    "group_order": group.order,
                }),
                Some(json!(group.orbits.count())),
            )
        }
        "ricci" => {
            let cert = ricci::certify(b.total(), false)?;
            let found = cert.frames.iter().filter(|f| f.is_some()).count();
            let flat = cert
                .ricci_flat()
                .expect("a plain frame search settles plain flatness");
            (
                json!({
                    "ricci_flat": flat,
                    "frames_found": found,
                    "vertex_count": b.total().vertex_count(),
                }),
                None,
            )
        }
        "s-ricci" => {
            let cert = ricci::certify(b.total(), true)?;
            let found = cert.frames.iter().filter(|f| f.is_some()).count();
            let flat = cert
                .s_ricci_flat()
                .expect("a commuting frame search settles commuting flatness");
            (
                json!({
                    "s_ricci_flat": flat,
                    "frames_found": found,
                    "vertex_count": b.total().vertex_count(),
                }),
                Some(json!(flat)),
            )
        }
        "theorem2" => {
            let report = walks::separation_report(b)?;
            (
                serde_json::to_value(&report).expect("reports hold only plain data"),
                None,
            )
        }
        "theorem4" => {
            let report = ricci::certify_noncayley(b)?;
            (
                serde_json::to_value(&report).expect("reports hold only plain data"),
                None,
            )
        }
        "4loop" => {
            let report = ricci::check_4loop_balanced(c)?;
            let balanced = report.balanced;
            (
                serde_json::to_value(&report).expect("reports hold only plain data"),
                Some(json!(balanced)),
            )
        }
        other => {
            return Err(Error::Internal(format!(
                "check token {other:?} escaped validation"
            )))
        }
    })
}

fn card_expectation(expected: &ExpectedProperties, token: &str) -> Option<Value> {
    match token {
        "trivial" => expected.trivial.map(Value::from),
        "dvb" => expected.dvb.map(Value::from),
        "transitive" => expected.transitive.map(Value::from),
        "orbits" => expected.orbits.map(|n| json!(n)),
        "4loop" => expected.four_loop_balanced.map(Value::from),
        "s-ricci" => expected.s_ricci_flat.map(Value::from),
        _ => None,
    }
}

fn cmd_count(a: &CountArgs) -> Result<Outcome> {
    if a.length > a.max_length {
        return Err(Error::ResourceCap {
            cap: "closed-walk length",
            limit: a.max_length as u64,
        });
    }
    let g = io::read_graph(&a.graph)?;
    let count = walks::closed_walk_count(&g, a.vertex, a.length)?;
    let mut inputs = BTreeMap::new();
    inputs.insert(shown(&a.graph), digest_file(&a.graph)?);
    let mut args = BTreeMap::new();
    args.insert("graph".into(), json!(shown(&a.graph)));
    args.insert("vertex".into(), json!(a.vertex));
    args.insert("length".into(), json!(a.length));
    args.insert("max_length".into(), json!(a.max_length));
    let results = json!({
        "vertex": a.vertex,
        "length": a.length,
        "count": walks::Count(count),
    });
    Ok(Outcome::report(args, inputs, results))
}

fn cmd_project(a: &ProjectArgs) -> Result<Outcome> {
    let connection = io::read_connection(&a.connection)?;
    let bundle = Bundle::build(connection);
    let path = WalkPath::new(bundle.total(), a.walk.clone())?;
    let pair = walks::project_bundle(&bundle, &path)?;
    let mut inputs = BTreeMap::new();
    inputs.insert(shown(&a.connection), digest_file(&a.connection)?);
    let mut args = BTreeMap::new();
    args.insert("connection".into(), json!(shown(&a.connection)));
    args.insert("walk".into(), json!(a.walk));
    let results = json!({
        "walk_length": path.length(),
        "base_part": pair.base_part.vertices(),
        "base_length": pair.base_part.length(),
        "base_is_loop": pair.base_part.is_loop(),
        "fiber_part": pair.fiber_part.vertices(),
        "fiber_length": pair.fiber_part.length(),
        "fiber_is_loop": pair.fiber_part.is_loop(),
    });
    Ok(Outcome::report(args, inputs, results))
}

fn cmd_export_dot(a: &ExportDotArgs) -> Result<Outcome> {
    let g = io::read_graph(&a.graph)?;
    let mut inputs = BTreeMap::new();
    inputs.insert(shown(&a.graph), digest_file(&a.graph)?);
    let mut args = BTreeMap::new();
    args.insert("graph".into(), json!(shown(&a.graph)));
    Ok(Outcome {
        args,
        inputs,
        results: Value::Null,
        expectations: None,
        raw: Some(io::to_dot(&g)),
        exit: 0,
    })
}

fn cmd_verify_lemmas(a: &VerifyLemmasArgs) -> Result<Outcome> {
    let connection = io::read_connection(&a.connection)?;
    let bundle = Bundle::build(connection);
    let report =
        walks::lemma_projection_sweep(&bundle, (a.base_vertex, a.fiber_vertex), a.max_total)?;
    let verified = report.mismatches.is_empty();
    let mut results = serde_json::to_value(&report).expect("reports hold only plain data");
    results["verified"] = json!(verified);
    let mut inputs = BTreeMap::new();
    inputs.insert(shown(&a.connection), digest_file(&a.connection)?);
    let mut args = BTreeMap::new();
    args.insert("connection".into(), json!(shown(&a.connection)));
    args.insert("base_vertex".into(), json!(a.base_vertex));
    args.insert("fiber_vertex".into(), json!(a.fiber_vertex));
    args.insert("max_total".into(), json!(a.max_total));
    Ok(Outcome {
        args,
        inputs,
        results,
        expectations: None,
        raw: None,
        exit: if verified { 0 } else { 1 },
    })
}
