//! `hlgap`: HOMO-LUMO gaps, bridged graphs and exact optimal bridging.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use hlgap::bridge::{build_bridged, BridgedGraph};
use hlgap::format::{bridged_to_dot, graph_to_dot, parse_bridge_json, parse_vertex_list, GraphSource};
use hlgap::optimizer::{describe_bridge, optimize_with, BridgeSearchSpec, SearchOptions, SearchResult};
use hlgap::sdp::{certify_bridged_lmi, certify_relaxation_tightness, gap_analytic, GapCertificate};
use hlgap::{table2, Error, Result};

#[derive(Parser, Debug)]
#[command(name = "hlgap", version, about = "HOMO-LUMO spectral gaps and gap-maximizing graph bridging")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues (descending) and HOMO/LUMO levels of a graph.
    Spectrum(GraphArgs),
    /// HOMO-LUMO spectral gap of a graph.
    Gap(GraphArgs),
    /// Build the bridged graph of two voltage graphs and report its gap.
    Bridge(BridgeArgs),
    /// Find the gap-maximizing bridge by exhaustive search.
    Optimize(OptimizeArgs),
    /// Check the bridged LMI certificate and relaxation tightness for a bridge.
    Certify(CertifyArgs),
    /// Reproduce the optimal-bridging table for fulvene and benzene.
    Table2(Table2Args),
}

#[derive(Args, Debug)]
struct Common {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Numerical tolerance for voltage recovery from graph files.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Graph JSON file or `builtin:NAME`.
    #[arg(short = 'g', long = "graph")]
    graph: String,
    /// Write the graph in DOT format to this path.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Graph G_A (file or `builtin:NAME`).
    #[arg(long = "a")]
    a: String,
    /// Graph G_B (file or `builtin:NAME`).
    #[arg(long = "b")]
    b: String,
}

#[derive(Args, Debug)]
struct BridgeArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Bridge JSON file.
    #[arg(long = "h")]
    h: PathBuf,
    /// Write the bridged graph in DOT format to this path.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Bridge-set vertices of G_B, 1-based, comma separated.
    #[arg(long = "bridge-set")]
    bridge_set: String,
    /// Maximal binary vertex degree in the bridged graph.
    #[arg(long = "max-degree")]
    max_degree: Option<usize>,
    /// Admit the empty bridge as a candidate.
    #[arg(long = "allow-empty-bridge")]
    allow_empty_bridge: bool,
    /// Write one JSON line per evaluated candidate to this path.
    #[arg(long)]
    audit: Option<PathBuf>,
    /// Write the optimal bridged graph in DOT format to this path.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Worker threads for candidate evaluation.
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Bridge JSON file.
    #[arg(long = "h")]
    h: PathBuf,
    /// Multiplier μ; defaults to the smallest positive eigenvalue of the bridged graph.
    #[arg(long)]
    mu: Option<f64>,
    /// Multiplier η; defaults to minus the largest negative eigenvalue.
    #[arg(long)]
    eta: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Table2Args {
    /// Worker threads for candidate evaluation.
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    common: Common,
}

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt6(x)).collect::<Vec<_>>().join(" ")
}

fn with_schema(value: impl Serialize) -> Value {
    let mut v = serde_json::to_value(value).expect("output serializes");
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(1));
    }
    v
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("output serializes") + "\n"
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(Error::Io(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_bridged(pair: &PairArgs, h: &Path, tol: f64) -> Result<(GraphSource, GraphSource, BridgedGraph)> {
    let ga = GraphSource::load(&pair.a)?;
    let gb = GraphSource::load(&pair.b)?;
    let text = std::fs::read_to_string(h).map_err(|e| Error::Io(format!("{}: {e}", h.display())))?;
    let spec = parse_bridge_json(&text, ga.graph.n(), gb.graph.n())?;
    let bm = spec.to_matrix(&ga.voltage(tol)?, &gb.voltage(tol)?)?;
    let c = build_bridged(&ga.graph, &gb.graph, &bm)?;
    Ok((ga, gb, c))
}

fn spectrum(args: &GraphArgs) -> Result<String> {
    let src = GraphSource::load(&args.graph)?;
    let s = src.graph.spectrum()?;
    let hl = src.graph.homo_lumo()?;
    if let Some(path) = &args.dot {
        write_file(path, &graph_to_dot(&src.graph))?;
    }
    if args.common.json {
        return Ok(json_text(&json!({
            "schema": 1,
            "graph": src.name,
            "n": src.graph.n(),
            "spectrum": s,
            "homo_lumo": hl,
        })));
    }
    let mut out = String::new();
    writeln!(out, "graph: {} ({} vertices)", src.name, src.graph.n()).unwrap();
    writeln!(out, "spectrum: {}", fmt_list(&s)).unwrap();
    writeln!(out, "HOMO: {}", fmt6(hl.lambda_homo)).unwrap();
    writeln!(out, "LUMO: {}", fmt6(hl.lambda_lumo)).unwrap();
    Ok(out)
}

fn gap(args: &GraphArgs) -> Result<String> {
    let src = GraphSource::load(&args.graph)?;
    let cert = gap_analytic(src.graph.adjacency())?;
    if let Some(path) = &args.dot {
        write_file(path, &graph_to_dot(&src.graph))?;
    }
    if args.common.json {
        let mut v = with_schema(&cert);
        v["graph"] = json!(src.name);
        return Ok(json_text(&v));
    }
    Ok(format!("{}\n", fmt6(cert.gap)))
}

fn bridge(args: &BridgeArgs) -> Result<String> {
    let (_, _, c) = load_bridged(&args.pair, &args.h, args.common.tol)?;
    let bm = c.bridge();
    let description = describe_bridge(bm.htilde(), bm.h(), bm.bridge_set());
    let spectrum = c.graph().spectrum()?;
    let cert = gap_analytic(c.adjacency())?;
    if let Some(path) = &args.dot {
        write_file(path, &bridged_to_dot(&c))?;
    }
    if args.common.json {
        return Ok(json_text(&json!({
            "schema": 1,
            "n_a": c.n_a(),
            "n_b": c.n_b(),
            "bridging": description,
            "htilde": bm.htilde(),
            "h": bm.h(),
            "spectrum": spectrum,
            "gap": cert.gap,
            "mu": cert.mu,
            "eta": cert.eta,
        })));
    }
    let mut out = String::new();
    writeln!(out, "vertices: {} + {}", c.n_a(), c.n_b()).unwrap();
    writeln!(out, "bridging: {description}").unwrap();
    writeln!(out, "spectrum: {}", fmt_list(&spectrum)).unwrap();
    writeln!(out, "gap: {}", fmt6(cert.gap)).unwrap();
    Ok(out)
}

fn fmt_margins(margins: &[f64]) -> String {
    margins.iter().map(|m| format!("{m:.3e}")).collect::<Vec<_>>().join(" ")
}

fn result_text(r: &SearchResult) -> String {
    let mut out = String::new();
    writeln!(out, "best gap: {}", fmt6(r.best_gap)).unwrap();
    writeln!(out, "bridging: {}", r.bridging_description).unwrap();
    writeln!(out, "encoding: {}", r.encoding).unwrap();
    writeln!(
        out,
        "candidates: {} evaluated, {} pruned, {} infeasible",
        r.candidates_evaluated, r.candidates_pruned, r.candidates_infeasible
    )
    .unwrap();
    writeln!(out, "optima: {}", r.optima_count).unwrap();
    writeln!(
        out,
        "certificate: mu {} eta {} margins {}",
        fmt6(r.certificate.mu),
        fmt6(r.certificate.eta),
        fmt_margins(&r.certificate.margins)
    )
    .unwrap();
    writeln!(out, "relaxation tight: {}", r.relaxation_tight).unwrap();
    out
}

fn optimize(args: &OptimizeArgs) -> Result<String> {
    let tol = args.common.tol;
    let ga = GraphSource::load(&args.pair.a)?;
    let gb = GraphSource::load(&args.pair.b)?;
    let set = parse_vertex_list(&args.bridge_set)?;
    let spec = BridgeSearchSpec::new(ga.graph.clone(), gb.graph.clone(), ga.voltage(tol)?, gb.voltage(tol)?, set)?
        .with_max_degree(args.max_degree)
        .with_require_bridge(!args.allow_empty_bridge);
    let options = SearchOptions { no_pruning: false, workers: args.workers };
    let result = match &args.audit {
        Some(path) => {
            let io_err = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
            let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
            let r = optimize_with(&spec, &options, Some(&mut w))?;
            w.flush().map_err(io_err)?;
            r
        }
        None => optimize_with(&spec, &options, None)?,
    };
    if let Some(path) = &args.dot {
        let bm = spec.bridge_matrix(&result.best_htilde)?;
        write_file(path, &bridged_to_dot(&build_bridged(spec.ga(), spec.gb(), &bm)?))?;
    }
    if args.common.json {
        return Ok(json_text(&with_schema(&result)));
    }
    Ok(result_text(&result))
}

#[derive(Serialize)]
struct CertifyReport {
    bridging: String,
    certificate: GapCertificate,
    /// Gap of the bridged graph itself.
    gap: f64,
    relaxation_tight: bool,
    /// Whether the LMIs still hold with μ or η raised by 1e-3.
    perturbed_mu_feasible: bool,
    perturbed_eta_feasible: bool,
}

fn certify(args: &CertifyArgs) -> Result<String> {
    let tol = args.common.tol;
    let (ga, gb, c) = load_bridged(&args.pair, &args.h, tol)?;
    let bm = c.bridge();
    let opt = gap_analytic(c.adjacency())?;
    let (mu, eta) = (args.mu.unwrap_or(opt.mu), args.eta.unwrap_or(opt.eta));
    let certificate = certify_bridged_lmi(&ga.graph, &gb.graph, bm, mu, eta)?;
    let feasible = |mu: f64, eta: f64| match certify_bridged_lmi(&ga.graph, &gb.graph, bm, mu, eta) {
        Ok(_) => Ok(true),
        Err(Error::InfeasiblePoint { .. }) => Ok(false),
        Err(e) => Err(e),
    };
    let report = CertifyReport {
        bridging: describe_bridge(bm.htilde(), bm.h(), bm.bridge_set()),
        gap: opt.gap,
        relaxation_tight: certify_relaxation_tightness(bm.htilde(), &ga.voltage(tol)?, &gb.voltage(tol)?)?,
        perturbed_mu_feasible: feasible(mu + 1e-3, eta)?,
        perturbed_eta_feasible: feasible(mu, eta + 1e-3)?,
        certificate,
    };
    if args.common.json {
        return Ok(json_text(&with_schema(&report)));
    }
    let verdict = |ok: bool| if ok { "feasible" } else { "infeasible" };
    let mut out = String::new();
    writeln!(out, "bridging: {}", report.bridging).unwrap();
    writeln!(out, "gap: {}", fmt6(report.gap)).unwrap();
    writeln!(
        out,
        "certificate at mu {} eta {}: feasible, margins {}",
        fmt6(mu),
        fmt6(eta),
        fmt_margins(&report.certificate.margins)
    )
    .unwrap();
    writeln!(out, "mu + 1e-3: {}", verdict(report.perturbed_mu_feasible)).unwrap();
    writeln!(out, "eta + 1e-3: {}", verdict(report.perturbed_eta_feasible)).unwrap();
    writeln!(out, "relaxation tight: {}", report.relaxation_tight).unwrap();
    Ok(out)
}

fn table(args: &Table2Args) -> Result<(String, bool)> {
    let report = table2::run(&SearchOptions { no_pruning: false, workers: args.workers })?;
    let text = if args.common.json { report.to_json() + "\n" } else { report.to_text() };
    Ok((text, report.passes))
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let (text, ok) = match &cli.command {
        Command::Spectrum(a) => (spectrum(a)?, true),
        Command::Gap(a) => (gap(a)?, true),
        Command::Bridge(a) => (bridge(a)?, true),
        Command::Optimize(a) => (optimize(a)?, true),
        Command::Certify(a) => (certify(a)?, true),
        Command::Table2(a) => table(a)?,
    };
    emit(&text)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.code());
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
