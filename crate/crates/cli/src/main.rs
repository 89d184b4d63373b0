use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qutrit_core::extremal::{find_stationary, verdict, ExtremalResult, InteriorVerdict, DEFAULT_TOL};
use qutrit_core::ledger::{run_ledger, Report, Status};
use qutrit_core::measure::{eta_breakdown, schmidt};
use qutrit_core::patterns::{census, table_representative, CensusRow, GroupMode, SymmetryGroup};
use qutrit_core::slocc::{ilo_witness, matrix_pairs, IloWitness};
use qutrit_core::state::{BuiltState, CMatrix3, StateFile, SupportPattern};

const EXIT_INPUT: u8 = 1;
const EXIT_CHECK: u8 = 2;
const THREADS_VAR: &str = "QUTRIT_ENT_THREADS";

#[derive(Parser)]
#[command(name = "qutrit-ent", version, about = "Entanglement analysis of bipartite qutrit pure states")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Numerical tolerance: Schmidt rank cutoff (relative) and gradient norm.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Pattern symmetry group: `rowcol` or `rowcol+swap`.
    #[arg(long, global = true, default_value = "rowcol+swap")]
    group: GroupMode,
    /// Exit with status 2 when a discrepancy is reported.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement measure, entropies and Schmidt data of a state file.
    Eta {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Orbit table of all k-cell support patterns.
    Census {
        #[arg(long)]
        terms: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Multi-start search for stationary points of the measure on a pattern.
    Extremize {
        /// Comma-separated cells, e.g. "U1,U2,V1,V2", or a table type label such as "IV_4".
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 200)]
        starts: usize,
        #[arg(long)]
        json: bool,
    },
    /// SLOCC comparison of two state files with an explicit witness.
    Witness {
        #[arg(long)]
        state_a: PathBuf,
        #[arg(long)]
        state_b: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Recompute every claim in the ledger.
    Verify {
        /// Write the JSON report to PATH, or to stdout when no path is given.
        #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
        json: Option<String>,
    },
}

/// Error carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    fn check(message: impl Into<String>) -> Self {
        Failure { code: EXIT_CHECK, message: message.into() }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_INPUT);
    }
    let g = &cli.global;
    let outcome = match &cli.command {
        Command::Eta { file, json } => cmd_eta(g, file, *json),
        Command::Census { terms, json, csv } => cmd_census(g, *terms, *json, *csv),
        Command::Extremize { pattern, starts, json } => cmd_extremize(g, pattern, *starts, *json),
        Command::Witness { state_a, state_b, json } => cmd_witness(g, state_a, state_b, *json),
        Command::Verify { json } => cmd_verify(g, json.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn load_state(path: &Path) -> Result<BuiltState, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("error: {}: {e}", path.display())))?;
    let built = StateFile::from_json(&text)
        .and_then(|f| f.build())
        .map_err(|e| Failure::input(format!("error: {}: {e}", path.display())))?;
    if built.norm_warning {
        eprintln!("warning: {}: input norm {} was renormalized", path.display(), built.input_norm);
    }
    Ok(built)
}

fn rank_tol(g: &Global) -> f64 {
    g.tol.unwrap_or(qutrit_core::measure::DEFAULT_SCHMIDT_TOL)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", items.join(", "))
}

fn cmd_eta(g: &Global, file: &Path, json: bool) -> CmdResult {
    let built = load_state(file)?;
    let b = eta_breakdown(&built.state);
    let sd = schmidt(&built.state, rank_tol(g));
    if json {
        print_json(&json!({
            "eta": b.eta,
            "s_a": b.s_a,
            "s_b": b.s_b,
            "product": b.is_product(),
            "schmidt_sq": sd.sigma_sq(),
            "rank": sd.rank,
            "input_norm": built.input_norm,
        }));
        return Ok(());
    }
    if b.is_product() {
        println!("eta = {:.6} (product state)", b.eta);
    } else {
        println!("eta = {:.6}", b.eta);
    }
    println!("S_A = {:.6}", b.s_a);
    println!("S_B = {:.6}", b.s_b);
    println!("schmidt_sq = {}", fmt_list(&sd.sigma_sq()));
    println!("rank = {}", sd.rank);
    Ok(())
}

fn cmd_census(g: &Global, k: usize, json: bool, csv: bool) -> CmdResult {
    let group = SymmetryGroup::new(g.group);
    let orbits = census(k, &group, g.seed).map_err(|e| Failure::input(format!("error: --terms: {e}")))?;
    let rows: Vec<CensusRow> = orbits.iter().map(CensusRow::from).collect();
    if json {
        print_json(&json!({"terms": k, "group": g.group.to_string(), "seed": g.seed, "orbits": rows}));
    } else if csv {
        let mut w = csv::Writer::from_writer(std::io::stdout());
        let io = |e: csv::Error| Failure::input(format!("error: {e}"));
        w.write_record(["canonical", "size", "labels", "forced_separable", "generic_rank", "discrepancy"])
            .map_err(io)?;
        for r in &rows {
            w.write_record([
                r.canonical.clone(),
                r.size.to_string(),
                r.labels.join(";"),
                r.forced_separable.to_string(),
                r.generic_rank.to_string(),
                r.discrepancy.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Failure::input(format!("error: {e}")))?;
    } else {
        println!("{k}-term patterns under {} (order {}), {} orbits", g.group, group.order(), rows.len());
        println!("{:<22} {:>5}  {:<12} {:<10} {:>4}  flag", "canonical", "size", "types", "separable", "rank");
        for r in &rows {
            let labels = if r.labels.is_empty() { "-".to_string() } else { r.labels.join("/") };
            let flag = if r.discrepancy { "DISCREPANCY" } else { "" };
            println!(
                "{:<22} {:>5}  {:<12} {:<10} {:>4}  {flag}",
                r.canonical,
                r.size,
                labels,
                if r.forced_separable { "yes" } else { "no" },
                r.generic_rank
            );
        }
    }
    let flagged: Vec<String> = rows
        .iter()
        .filter(|r| r.discrepancy)
        .map(|r| {
            if r.labels.is_empty() {
                format!("{} (entangled orbit with no table type)", r.canonical)
            } else {
                format!("{} share one orbit", r.labels.join(" and "))
            }
        })
        .collect();
    if g.strict && !flagged.is_empty() {
        return Err(Failure::check(format!("discrepancy: {}", flagged.join("; "))));
    }
    Ok(())
}

fn result_line(r: &ExtremalResult) -> String {
    let kind = serde_json::to_value(r.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let grad = r.grad_residual.map_or("-".to_string(), |g| format!("{g:.1e}"));
    format!(
        "{kind:<20} eta = {:.6}  m = {}  phases = {}  cycles = {}  grad = {grad}  runs = {}",
        r.eta,
        fmt_list(&r.params.magnitudes),
        fmt_list(&r.params.phases),
        fmt_list(&r.cycle_invariants),
        r.runs
    )
}

fn cmd_extremize(g: &Global, pattern: &str, starts: usize, json: bool) -> CmdResult {
    let p = match table_representative(pattern) {
        Some(p) => p,
        None => SupportPattern::parse(pattern).map_err(|e| Failure::input(format!("error: --pattern: {e}")))?,
    };
    if starts == 0 {
        return Err(Failure::input("error: --starts must be at least 1"));
    }
    let tol = g.tol.unwrap_or(DEFAULT_TOL);
    let results = find_stationary(p, starts, g.seed, tol);
    let v = verdict(&results, starts, g.seed);
    if json {
        let tag = serde_json::to_value(&v).ok().and_then(|x| x.get("verdict").cloned()).unwrap_or(Value::Null);
        print_json(&json!({
            "pattern": p.to_string(),
            "starts": starts,
            "seed": g.seed,
            "tol": tol,
            "verdict": tag,
            "results": results,
        }));
        return Ok(());
    }
    println!("pattern {p}: {starts} starts, seed {}", g.seed);
    for r in &results {
        println!("{}", result_line(r));
    }
    match v {
        InteriorVerdict::Found { results } => println!("{} interior stationary point(s)", results.len()),
        InteriorVerdict::NoneDetected { .. } => {
            println!("no interior stationary point detected (heuristic evidence, seed {})", g.seed)
        }
        InteriorVerdict::Inconclusive { .. } => println!(
            "no interior stationary point detected (inconclusive: fewer than {} starts)",
            qutrit_core::extremal::MIN_STARTS_FOR_VERDICT
        ),
    }
    Ok(())
}

fn print_matrix(name: &str, m: &CMatrix3) {
    println!("{name} =");
    for row in matrix_pairs(m) {
        let cells: Vec<String> = row.iter().map(|[re, im]| format!("{re:>10.6}{im:+.6}i")).collect();
        println!("  [{}]", cells.join(", "));
    }
}

fn cmd_witness(g: &Global, a: &Path, b: &Path, json: bool) -> CmdResult {
    let psi = load_state(a)?.state;
    let phi = load_state(b)?.state;
    let tol = rank_tol(g);
    let (ra, rb) = (schmidt(&psi, tol).rank, schmidt(&phi, tol).rank);
    let w: Option<IloWitness> = ilo_witness(&psi, &phi, tol);
    let valid = w.as_ref().is_some_and(IloWitness::is_valid);
    if json {
        let verdict = match (&w, valid) {
            (None, _) => "inequivalent",
            (Some(_), true) => "equivalent",
            (Some(_), false) => "witness_invalid",
        };
        print_json(&json!({"ranks": [ra, rb], "verdict": verdict, "witness": w}));
    } else {
        println!("rank A = {ra}, rank B = {rb}");
        match &w {
            None => println!("inequivalent (ranks {ra} vs {rb})"),
            Some(w) => {
                println!(
                    "{} (rank {ra}), residual = {:.3e}",
                    if valid { "equivalent" } else { "witness invalid" },
                    w.residual
                );
                print_matrix("Q_A", &w.q_a);
                print_matrix("Q_B", &w.q_b);
                println!("scale = {:.6}", w.scale);
            }
        }
    }
    if w.is_some() && !valid {
        return Err(Failure::check("error: constructed witness failed validation"));
    }
    Ok(())
}

fn print_report(r: &Report) {
    for c in &r.claims {
        println!("{:<20} {:<36} {}", c.status.as_str(), c.id, c.description);
    }
    println!();
    let notable: Vec<_> = r
        .claims
        .iter()
        .filter(|c| matches!(c.status, Status::Discrepancy | Status::Corrected | Status::Fail))
        .collect();
    if !notable.is_empty() {
        println!("needs attention:");
        for c in notable {
            println!("  {} [{}]: expected {}, got {}", c.id, c.status.as_str(), c.expected, c.actual);
        }
        println!();
    }
    let counts: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
    println!("{} claims (seed {}, version {}): {}", r.claims.len(), r.seed, r.version, counts.join(", "));
}

fn cmd_verify(g: &Global, json: Option<&str>) -> CmdResult {
    let report = run_ledger(g.seed);
    match json {
        Some("-") => print_json(&serde_json::to_value(&report).expect("report serializes")),
        Some(path) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            fs::write(path, text + "\n").map_err(|e| Failure::input(format!("error: {path}: {e}")))?;
            print_report(&report);
        }
        None => print_report(&report),
    }
    if report.has_failures() {
        return Err(Failure::check(format!("{} claim(s) failed", report.count(Status::Fail))));
    }
    if g.strict && report.count(Status::Discrepancy) > 0 {
        return Err(Failure::check(format!("{} discrepancy claim(s)", report.count(Status::Discrepancy))));
    }
    Ok(())
}
