//! Command-line front end: build tail-biting trellises from text files,
//! compare constructions, check the complexity calculus and run
//! randomized verification sweeps.
//!
//! Exit codes: 0 on success, 1 when a semantic check fails (verdict
//! mismatch, formula mismatch, failed random run), 2 on unreadable or
//! invalid input.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use tbtrellis::algebraic;
use tbtrellis::bcjr;
use tbtrellis::code::{derive_parity, parse_matrix, parse_span_list, CodeSpec};
use tbtrellis::emsgm;
use tbtrellis::kv;
use tbtrellis::metrics;
use tbtrellis::sample::{random_spec, SampleConfig};
use tbtrellis::trellis::{IsoOutcome, Trellis};
use tbtrellis::verify::{describe_spec, run_suite, DEFAULT_ISO_BUDGET};

const SEMANTIC_FAILURE: u8 = 1;

#[derive(Parser)]
#[command(
    name = "tbt",
    version,
    about = "Tail-biting trellises for binary linear block codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one trellis and print it as JSON, DOT or a summary.
    Build(BuildArgs),
    /// Build two trellises and report identical, isomorphic or distinct.
    Compare(CompareArgs),
    /// Check the complexity formulas, plus the duality identities when
    /// dual inputs are given.
    Metrics(MetricsArgs),
    /// Sample random specifications and run the whole check suite.
    Proptest(ProptestArgs),
}

#[derive(Args)]
struct SpecArgs {
    /// Generator matrix file.
    #[arg(long = "g", value_name = "PATH")]
    g: PathBuf,
    /// Parity-check matrix file; derived from the generator when omitted.
    #[arg(long = "h", value_name = "PATH")]
    h: Option<PathBuf>,
    /// Span list file.
    #[arg(long = "spans", value_name = "PATH")]
    spans: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Syndrome-labeled construction.
    Tbbcjr,
    /// Quotient of the message space by state-matrix kernels.
    Algebraic,
    /// Product of elementary trellises.
    Kv,
    /// Direct construction from span activity sets.
    Emsgm,
    /// Dual-code trellis on the transposed state chain.
    Dual,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Tbbcjr => "tbbcjr",
            Method::Algebraic => "algebraic",
            Method::Kv => "kv",
            Method::Emsgm => "emsgm",
            Method::Dual => "dual",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Summary,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Identical,
    Isomorphic,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Identical,
    Isomorphic,
    Distinct,
    Inconclusive,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Construction to run.
    #[arg(long, value_enum)]
    method: Method,
    /// Output format.
    #[arg(long, value_enum, default_value = "summary")]
    format: Format,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Construction for the left-hand trellis.
    #[arg(long = "method-a", value_enum)]
    method_a: Method,
    /// Construction for the right-hand trellis.
    #[arg(long = "method-b", value_enum)]
    method_b: Method,
    /// Generator for the right-hand trellis (defaults to --g).
    #[arg(long = "g2", value_name = "PATH")]
    g2: Option<PathBuf>,
    /// Parity-check for the right-hand trellis.
    #[arg(long = "h2", value_name = "PATH")]
    h2: Option<PathBuf>,
    /// Span list for the right-hand trellis (defaults to --spans).
    #[arg(long = "spans2", value_name = "PATH")]
    spans2: Option<PathBuf>,
    /// Exit 1 unless the verdict is at least this strong.
    #[arg(long, value_enum)]
    expect: Option<Expect>,
}

#[derive(Args)]
struct MetricsArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Construction whose counts are checked.
    #[arg(long, value_enum, default_value = "tbbcjr")]
    method: Method,
    /// Dual-code generator file; enables the duality checks.
    #[arg(long = "dual-h", value_name = "PATH")]
    dual_h: Option<PathBuf>,
    /// Dual-code span list file.
    #[arg(long = "dual-spans", value_name = "PATH")]
    dual_spans: Option<PathBuf>,
}

#[derive(Args)]
struct ProptestArgs {
    /// Seed for the specification sampler.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of specifications to draw.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Largest message dimension to sample.
    #[arg(long = "limit-k", default_value_t = 5)]
    limit_k: usize,
    /// Mark the first draw as failed to exercise the report path.
    #[arg(long = "inject-fault", hide = true)]
    inject_fault: bool,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Proptest(args) => cmd_proptest(args),
    }
}

fn read_text(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes to stdout, ending the process quietly when a downstream pipe
/// has been closed.
fn say_raw(text: &str) {
    let mut out = io::stdout().lock();
    let outcome = out.write_all(text.as_bytes()).and_then(|_| out.flush());
    if let Err(e) = outcome {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {e}");
        std::process::exit(2);
    }
}

fn say(line: &str) {
    say_raw(line);
    say_raw("\n");
}

fn load_spec(args: &SpecArgs) -> Result<CodeSpec, String> {
    let g = parse_matrix(&read_text(&args.g)?)
        .map_err(|e| format!("{}: {e}", args.g.display()))?;
    let h = match &args.h {
        Some(path) => {
            parse_matrix(&read_text(path)?).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => derive_parity(&g).map_err(|e| e.to_string())?,
    };
    let spans = parse_span_list(&read_text(&args.spans)?, g.cols())
        .map_err(|e| format!("{}: {e}", args.spans.display()))?;
    let spec = CodeSpec::new(g, h, spans).map_err(|e| e.to_string())?;
    let validation = spec.validate();
    if !validation.is_valid() {
        return Err(format!(
            "specification rejected: {}",
            validation.violations.join("; ")
        ));
    }
    Ok(spec)
}

fn build_with(method: Method, spec: &CodeSpec) -> Result<Trellis, String> {
    let built = match method {
        Method::Tbbcjr => bcjr::build_tbbcjr(spec),
        Method::Algebraic => algebraic::build_algebraic(spec),
        Method::Kv => kv::build_product(spec),
        Method::Emsgm => emsgm::build_emsgm(spec),
        Method::Dual => bcjr::build_dual(spec),
    };
    built.map_err(|e| e.to_string())
}

fn counts_text(counts: &[usize]) -> String {
    counts
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn verdict_text(ok: bool) -> &'static str {
    if ok {
        "OK"
    } else {
        "MISMATCH"
    }
}

fn cmd_build(args: BuildArgs) -> Result<ExitCode, String> {
    let spec = load_spec(&args.spec)?;
    let trellis = build_with(args.method, &spec)?;
    let profile = trellis.profile();
    match args.format {
        Format::Json => {
            let envelope = json!({
                "command": "build",
                "method": args.method.name(),
                "n": spec.n(),
                "k": spec.k(),
                "vertex_counts": profile.vertex_counts,
                "edge_counts": profile.edge_counts,
                "trellis": serde_json::from_str::<serde_json::Value>(&trellis.to_json())
                    .expect("freshly serialized trellis"),
            });
            let text = serde_json::to_string_pretty(&envelope).expect("JSON envelope");
            say(&text);
        }
        Format::Dot => say_raw(&trellis.to_dot()),
        Format::Summary => {
            say(&format!("method {}", args.method.name()));
            say(&format!("n {}  k {}", spec.n(), spec.k()));
            say(&format!("vertices {}", counts_text(&profile.vertex_counts)));
            say(&format!("edges    {}", counts_text(&profile.edge_counts)));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare(args: CompareArgs) -> Result<ExitCode, String> {
    let spec_a = load_spec(&args.spec)?;
    let spec_b = match (&args.g2, &args.spans2) {
        (None, None) => {
            if args.h2.is_some() {
                return Err("--h2 requires --g2 and --spans2".into());
            }
            spec_a.clone()
        }
        (Some(g2), Some(spans2)) => load_spec(&SpecArgs {
            g: g2.clone(),
            h: args.h2.clone(),
            spans: spans2.clone(),
        })?,
        _ => return Err("--g2 and --spans2 must be given together".into()),
    };

    let a = build_with(args.method_a, &spec_a)?;
    let b = build_with(args.method_b, &spec_b)?;

    let verdict = if a.identical(&b) {
        say("identical");
        Verdict::Identical
    } else {
        match a.isomorphic(&b, DEFAULT_ISO_BUDGET) {
            Ok(IsoOutcome::Isomorphic(witness)) => {
                let mapped: usize = witness.map.iter().map(Vec::len).sum();
                say(&format!("isomorphic (witness maps {mapped} vertices)"));
                Verdict::Isomorphic
            }
            Ok(IsoOutcome::NotIsomorphic { level }) => {
                say(&format!("distinct (first differing level {level})"));
                Verdict::Distinct
            }
            Err(e) => {
                say(&format!("inconclusive ({e})"));
                Verdict::Inconclusive
            }
        }
    };

    let ok = match args.expect {
        None => verdict != Verdict::Inconclusive,
        Some(Expect::Identical) => verdict == Verdict::Identical,
        Some(Expect::Isomorphic) => {
            matches!(verdict, Verdict::Identical | Verdict::Isomorphic)
        }
    };
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(SEMANTIC_FAILURE)
    })
}

fn cmd_metrics(args: MetricsArgs) -> Result<ExitCode, String> {
    if args.method == Method::Dual {
        return Err("metrics checks primal constructions; pick a non-dual method".into());
    }
    let spec = load_spec(&args.spec)?;
    let trellis = build_with(args.method, &spec)?;
    let report = metrics::compare(&spec, &trellis).map_err(|e| e.to_string())?;
    say_raw(&report.render());
    let failed_level = report.levels.iter().find(|l| !l.holds()).map(|l| l.level);

    let mut dual_ok = true;
    match (&args.dual_h, &args.dual_spans) {
        (None, None) => {}
        (Some(dual_h), Some(dual_spans_path)) => {
            let dual_g = parse_matrix(&read_text(dual_h)?)
                .map_err(|e| format!("{}: {e}", dual_h.display()))?;
            let dual_spans = parse_span_list(&read_text(dual_spans_path)?, spec.n())
                .map_err(|e| format!("{}: {e}", dual_spans_path.display()))?;

            let vertex = metrics::check_dual_vertex_equality(&spec).map_err(|e| e.to_string())?;
            say("dual vertex counts");
            for level in &vertex.levels {
                say(&format!(
                    "  level {}: primal {} dual {} {}",
                    level.level,
                    level.primal,
                    level.dual,
                    verdict_text(level.primal == level.dual)
                ));
            }

            let table = emsgm::activity_table(spec.spans());
            let dual_table = emsgm::activity_table(&dual_spans);
            let ab = metrics::check_alpha_beta_duality(&table, &dual_table)
                .map_err(|e| e.to_string())?;
            say("activity-count identity");
            for p in &ab.positions {
                say(&format!(
                    "  position {}: alpha {} alpha^ {} {}",
                    p.position,
                    p.alpha,
                    p.alpha_dual,
                    verdict_text(p.from_dual && p.from_primal)
                ));
            }

            let edges = metrics::check_edge_dimension_duality(&spec, &dual_g, &dual_spans)
                .map_err(|e| e.to_string())?;
            say("edge-dimension identity");
            for p in &edges.positions {
                say(&format!(
                    "  position {}: edge_dim={} dual_edge_dim={} {}",
                    p.position,
                    p.primal_edge_dim,
                    p.dual_edge_dim,
                    verdict_text(p.first_identity && p.second_identity && p.alpha_bridge)
                ));
            }
            dual_ok = vertex.holds() && ab.holds() && edges.holds();
        }
        _ => return Err("--dual-h and --dual-spans must be given together".into()),
    }

    if let Some(level) = failed_level {
        eprintln!("mismatch at level {level}");
        return Ok(ExitCode::from(SEMANTIC_FAILURE));
    }
    if !dual_ok {
        eprintln!("duality check failed");
        return Ok(ExitCode::from(SEMANTIC_FAILURE));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_proptest(args: ProptestArgs) -> Result<ExitCode, String> {
    let cfg = SampleConfig {
        max_n: 10,
        max_k: args.limit_k,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut failures: Vec<(usize, String, Vec<String>)> = Vec::new();
    for index in 0..args.count {
        let spec = random_spec(&mut rng, &cfg).map_err(|e| e.to_string())?;
        let report = run_suite(&spec);
        let mut failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        if args.inject_fault && index == 0 {
            failed.push("injected fault".into());
        }
        if !failed.is_empty() {
            failures.push((index, describe_spec(&spec), failed));
        }
    }

    say(&format!("seed {}  count {}", args.seed, args.count));
    say(&format!("{} passed, {} failed", args.count - failures.len(), failures.len()));
    if failures.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    for (index, description, failed) in &failures {
        say(&format!("run {index} failed:"));
        for line in failed {
            say(&format!("  {line}"));
        }
        for line in description.lines() {
            say(&format!("  {line}"));
        }
    }
    Ok(ExitCode::from(SEMANTIC_FAILURE))
}
