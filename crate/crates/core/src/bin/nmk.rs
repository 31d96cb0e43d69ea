use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nmk_core::cli::{betti_cached, run_suite, Cache, CliError, RunManifest, SweepOptions, EXIT_FAILURE, EXIT_PASS, SUITES};
use nmk_core::complex::{build_nm_complex, enumerate_family, FamilySpec, DEFAULT_ENUMERATION_CAP};
use nmk_core::graph::Graph;
use nmk_core::homology::{check_leray, check_near_leray, FieldSpec, LerayMode, LerayReport, SamplePolicy};
use nmk_core::morse::verify_family;
use nmk_core::rainbow::{is_bipartite_edges, search_tightness, verify_theorem, HostClass, RainbowError, RainbowInstance, TheoremVerdict};

#[derive(Parser)]
#[command(name = "nmk", version, about = "Homology, Morse matchings and rainbow matchings for non-matching complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Betti numbers of NM_k of a graph.
    Homology {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "gf2")]
        field: FieldSpec,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Leray and near-Leray checks on NM_k of a graph.
    Leray(LerayArgs),
    /// Builds and checks the matching on one of the special families.
    MorseVerify {
        /// JSON file, or inline JSON starting with '{'.
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "gf2")]
        field: FieldSpec,
    },
    /// Rainbow matchings.
    #[command(subcommand)]
    Rainbow(RainbowCommand),
    /// Runs a registered suite.
    Sweep {
        suite: String,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the full summary as JSON instead of the table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct LerayArgs {
    file: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, allow_negative_numbers = true)]
    d0: isize,
    /// Links of non-empty faces only.
    #[arg(long)]
    near: bool,
    #[arg(long, conflicts_with = "sample")]
    exhaustive: bool,
    /// Check this many random faces (with --near).
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "gf2")]
    field: FieldSpec,
    /// Induced subcomplexes instead of links (without --near).
    #[arg(long)]
    induced: bool,
}

#[derive(Subcommand)]
enum RainbowCommand {
    /// Checks the hypotheses and searches for a rainbow k-matching.
    Verify {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Searches for m sets meeting the hypotheses with no rainbow k-matching.
    Tightness {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// `bipartite:a,b` or `complete:n`.
        #[arg(long)]
        host: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(v: &Value) -> Result<(), CliError> {
    emit(&(serde_json::to_string_pretty(v)? + "\n"));
    Ok(())
}

fn record(command: &str, params: Value, seed: u64, field: Option<FieldSpec>, result: &Value) -> Result<(), CliError> {
    let cache = Cache::from_env()?;
    RunManifest::new(command, params, seed, field.map(|f| f.to_string()), result)?.persist(&cache)?;
    Ok(())
}

fn homology(file: &Path, k: usize, field: FieldSpec, format: Format) -> Result<i32, CliError> {
    let g = Graph::parse_edge_list(&read(file)?)?;
    let cache = Cache::from_env()?;
    let (t, _) = betti_cached(Some(&cache), &g, k, field)?;
    let bipartite = is_bipartite_edges(g.edges());
    let from = if bipartite { 2 * k as isize - 2 } else { 3 * k as isize - 3 };
    let holds = t.vanishes_from(from);
    let result = json!({ "k": k, "betti": t, "vanishing_bound": { "from": from, "bipartite": bipartite, "holds": holds } });
    match format {
        Format::Json => print_json(&result)?,
        Format::Csv => {
            emit(&t.to_csv());
            eprintln!("vanishing bound: zero from dimension {from} ({})", if holds { "holds" } else { "VIOLATED" });
        }
    }
    record("homology", json!({ "graph": g.to_edge_list(), "k": k }), 0, Some(field), &result)?;
    Ok(if holds { EXIT_PASS } else { EXIT_FAILURE })
}

fn leray(a: &LerayArgs) -> Result<i32, CliError> {
    let g = Graph::parse_edge_list(&read(&a.file)?)?;
    let complex = build_nm_complex(&g, a.k, DEFAULT_ENUMERATION_CAP)?;
    let report: LerayReport = if a.near {
        if a.induced {
            return Err(CliError::Usage("--induced applies to the plain check only".into()));
        }
        let policy = match a.sample {
            Some(count) => SamplePolicy::Sampled { count, seed: a.seed },
            None => SamplePolicy::Exhaustive,
        };
        check_near_leray(&complex, a.d0, a.field, policy)?
    } else {
        if a.sample.is_some() {
            return Err(CliError::Usage("--sample applies to --near only".into()));
        }
        check_leray(&complex, a.d0, a.field, if a.induced { LerayMode::Induced } else { LerayMode::Links })?
    };
    let failing_dims: Vec<Vec<isize>> = report.violations.iter().map(|v| v.betti.support()).collect();
    let result = json!({
        "verdict": if report.passed() { "PASS" } else { "FAIL" },
        "near": a.near,
        "report": report,
        "nonzero_dimensions": failing_dims,
    });
    print_json(&result)?;
    let params = json!({ "graph": g.to_edge_list(), "k": a.k, "d0": a.d0, "near": a.near, "sample": a.sample, "induced": a.induced });
    record("leray", params, a.seed, Some(a.field), &result)?;
    Ok(if report.passed() { EXIT_PASS } else { EXIT_FAILURE })
}

fn morse_verify(family: &str, field: FieldSpec) -> Result<i32, CliError> {
    let text = if family.trim_start().starts_with('{') { family.to_string() } else { read(Path::new(family))? };
    let spec: FamilySpec = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad family spec: {e}")))?;
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let (result, code) = if enumerate_family(&spec, DEFAULT_ENUMERATION_CAP)?.is_empty() {
        (json!({ "verdict": "EMPTY_FAMILY", "spec": spec }), EXIT_PASS)
    } else {
        let v = verify_family(&spec, field)?;
        let passed = v.passed();
        let mut body = serde_json::to_value(&v)?;
        body["verdict"] = json!(if passed { "PASS" } else { "FAIL" });
        (body, if passed { EXIT_PASS } else { EXIT_FAILURE })
    };
    print_json(&result)?;
    record("morse-verify", json!({ "family": spec }), 0, Some(field), &result)?;
    Ok(code)
}

fn parse_host(s: &str) -> Result<HostClass, CliError> {
    let bad = || CliError::Usage(format!("host '{s}' is not bipartite:a,b or complete:n"));
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    match kind {
        "bipartite" => {
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            Ok(HostClass::CompleteBipartite(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        }
        "complete" => Ok(HostClass::Complete(rest.trim().parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn rainbow(cmd: &RainbowCommand) -> Result<i32, CliError> {
    match cmd {
        RainbowCommand::Verify { file, k } => {
            let inst = RainbowInstance::parse(&read(file)?, *k)?;
            let (result, code) = match verify_theorem(&inst) {
                Ok(v) => {
                    let code = if v.is_satisfied() { EXIT_PASS } else { EXIT_FAILURE };
                    if let TheoremVerdict::Violation { .. } = v {
                        let cache = Cache::from_env()?;
                        let name = format!("rainbow-violation-{}.txt", nmk_core::cli::digest_hex(&[&inst.to_text()]));
                        let path = cache.store_text(&name, &inst.to_text())?;
                        eprintln!("violation written to {}", path.display());
                    }
                    (serde_json::to_value(&v)?, code)
                }
                Err(RainbowError::Hypothesis(reason)) => (json!({ "verdict": "HYPOTHESIS_FAILED", "reason": reason }), EXIT_FAILURE),
                Err(e) => return Err(e.into()),
            };
            print_json(&result)?;
            record("rainbow-verify", json!({ "instance": inst.to_text(), "k": k }), 0, None, &result)?;
            Ok(code)
        }
        RainbowCommand::Tightness { k, m, host, seed } => {
            let class = parse_host(host)?;
            let result = match search_tightness(*k, &class, *m, *seed)? {
                Some(w) => json!({ "verdict": "WITNESS", "k": k, "m": m, "instance": w.to_text() }),
                None => json!({ "verdict": "NO_WITNESS", "k": k, "m": m }),
            };
            print_json(&result)?;
            record("rainbow-tightness", json!({ "k": k, "m": m, "host": host }), *seed, None, &result)?;
            Ok(EXIT_PASS)
        }
    }
}

fn sweep(suite: &str, jobs: Option<usize>, seed: u64, as_json: bool) -> Result<i32, CliError> {
    if !SUITES.iter().any(|s| s.0 == suite) {
        let mut msg = format!("unknown suite '{suite}'. Available suites:\n");
        for (name, about) in SUITES {
            msg += &format!("  {name:<20} {about}\n");
        }
        return Err(CliError::Usage(msg.trim_end().to_string()));
    }
    let summary = run_suite(suite, &SweepOptions { seed, jobs, cache: Some(Cache::from_env()?) })?;
    if as_json {
        emit(&(serde_json::to_string_pretty(&summary)? + "\n"));
    } else {
        emit(&summary.table());
    }
    Ok(if summary.all_passed() { EXIT_PASS } else { EXIT_FAILURE })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Homology { file, k, field, format } => homology(&file, k, field, format),
        Command::Leray(a) => leray(&a),
        Command::MorseVerify { family, field } => morse_verify(&family, field),
        Command::Rainbow(cmd) => rainbow(&cmd),
        Command::Sweep { suite, jobs, seed, json } => sweep(&suite, jobs, seed, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
