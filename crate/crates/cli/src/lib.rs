//! Command-line front end: argument parsing, dispatch, report assembly.
//!
//! Exit codes: 0 success or pass, 1 a suite found a violation, 2 usage,
//! parse or input error, 3 capacity exceeded.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use schreier_core::checks;
use schreier_core::config::CAPACITY_ENV;
use schreier_core::estimates::{self, domination_constant, Mode};
use schreier_core::indices::{self, cb_rank_finite, derivative_member, h_rho_member, ExplicitFamily, FamilyOracle};
use schreier_core::num::{approx, parse_q, q_json, Q};
use schreier_core::ordinal::{parse_ordinal, FUNDAMENTAL_SEQUENCE_CONVENTION};
use schreier_core::spaces::{parse_space, parse_vector};
use schreier_core::suite::{SuiteConfig, SuiteReport};
use schreier_core::tensor::{self, injective_norm, TensorOp};
use schreier_core::{Capacity, Error, FinSet, NormEngine, Ordinal, RatVec, Schreier};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

/// Suites in report order.
pub const SUITES: [&str; 15] = [
    "SCHREIER", "REGULARITY", "NORMS", "P31", "RDOM", "R212", "L211", "L213", "P24", "DERIV", "P46", "HRHO", "TENSOR",
    "P61", "L66",
];

#[derive(Parser, Debug)]
#[command(name = "schreier-lab", version, about = "Exact computations on Schreier families and the spaces built from them")]
pub struct Cli {
    /// Master seed for every sampled check.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Capacity overrides such as `schreier=24,zv=16`, applied after the environment.
    #[arg(long, global = true)]
    pub capacity: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Schreier family membership and enumeration.
    #[command(subcommand)]
    Schreier(SchreierCmd),
    /// Exact norm of a finitely supported vector.
    Norm(NormArgs),
    /// Domination constants.
    #[command(subcommand)]
    Estimate(EstimateCmd),
    /// Run one verification suite, or `all`.
    Verify(VerifyArgs),
    /// Derivatives, ranks and ℓ1 lower certificates.
    #[command(subcommand)]
    Index(IndexCmd),
    /// Injective tensor norms.
    #[command(subcommand)]
    Tensor(TensorCmd),
}

#[derive(Subcommand, Debug)]
pub enum SchreierCmd {
    Member {
        #[arg(long)]
        alpha: String,
        /// Comma-separated increasing set, e.g. `2,3,6`; empty for ∅.
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
    Enum {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        window: u32,
        #[arg(long)]
        maximal: bool,
    },
}

#[derive(Args, Debug)]
pub struct NormArgs {
    #[arg(long)]
    pub space: String,
    /// File holding `[[i, num, den], ...]` or `i:value, ...`.
    #[arg(long)]
    pub vector: Option<PathBuf>,
    /// Inline vector, e.g. `2:1/2, 3:-1`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "vector")]
    pub coords: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum EstimateCmd {
    /// Least C with ‖Σ a x_n‖_X ≤ C ‖Σ a v_{k_n}‖_V.
    Dominate {
        #[arg(long)]
        x_space: String,
        /// JSON file with an array of vectors.
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long)]
        refs: String,
        #[arg(long)]
        v_space: String,
        #[arg(long, value_enum, default_value_t = EstimateMode::Exact)]
        mode: EstimateMode,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EstimateMode {
    Exact,
    Sampled,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite id or `all`.
    pub suite: String,
    /// Ordinals for the Schreier-based suites; repeatable.
    #[arg(long)]
    pub alpha: Vec<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Replaces the bound under test.
    #[arg(long)]
    pub bound: Option<String>,
    /// `SUITE=bound` for a single suite inside `all`; repeatable.
    #[arg(long = "inject-bound")]
    pub inject_bound: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum IndexCmd {
    /// F ∈ S_α^{(k)}.
    Derive {
        #[arg(long)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        stages: u32,
        #[arg(long, default_value_t = indices::DEFAULT_HORIZON)]
        horizon: u32,
    },
    /// Exact minimum of ‖Σ a x_n‖ over the simplex, against ρ.
    Hrho {
        #[arg(long)]
        space: String,
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long)]
        rho: String,
    },
    /// Cantor-Bendixson rank of an explicit hereditary family.
    Cb {
        /// JSON array of sets, e.g. `[[], [1], [1, 2]]`.
        #[arg(long)]
        family: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum TensorCmd {
    Norm {
        #[arg(long)]
        file: PathBuf,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Capacity { .. }) { EXIT_CAPACITY } else { EXIT_USAGE };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// The result of one command before formatting.
struct Output {
    /// Goes under `result` in JSON.
    body: Value,
    text: String,
    /// Flat suite rows for CSV.
    rows: Option<Vec<SuiteReport>>,
    code: i32,
}

/// Runs the command line `argv` (program name first), writing the report to
/// `out` (or the `--output` file) and diagnostics to `err`.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli, argv) {
        Ok((code, rendered)) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &rendered).map_err(|e| e.to_string()),
                None => out.write_all(rendered.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot write report: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn capacity_for(cli: &Cli) -> Outcome<(Capacity, Option<String>)> {
    let env = std::env::var(CAPACITY_ENV).ok();
    let mut cap = Capacity::from_env()?;
    if let Some(spec) = &cli.capacity {
        cap = cap.with_overrides(spec)?;
    }
    Ok((cap, env))
}

fn execute(cli: &Cli, argv: &[String]) -> Outcome<(i32, String)> {
    let (capacity, env) = capacity_for(cli)?;
    let output = match &cli.command {
        Command::Schreier(cmd) => schreier_cmd(cmd, &capacity)?,
        Command::Norm(args) => norm_cmd(args, &capacity)?,
        Command::Estimate(cmd) => estimate_cmd(cmd, &capacity)?,
        Command::Verify(args) => verify_cmd(args, cli.seed, &capacity)?,
        Command::Index(cmd) => index_cmd(cmd, &capacity)?,
        Command::Tensor(cmd) => tensor_cmd(cmd, &capacity)?,
    };
    let rendered = match cli.format {
        Format::Text => output.text,
        Format::Json => {
            let mut m = Map::new();
            m.insert("header".into(), header(cli, argv, &capacity, env));
            m.insert("result".into(), output.body);
            let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => match output.rows {
            Some(rows) => csv(&rows),
            None => return Err(usage("csv output is only available for verify")),
        },
    };
    Ok((output.code, rendered))
}

/// Reproducibility header: everything that determines the report.
fn header(cli: &Cli, argv: &[String], capacity: &Capacity, env: Option<String>) -> Value {
    json!({
        "tool": "schreier-lab",
        "version": env!("CARGO_PKG_VERSION"),
        "fundamental_sequences": FUNDAMENTAL_SEQUENCE_CONVENTION,
        "capacity": capacity,
        "capacity_env": {"variable": CAPACITY_ENV, "value": env},
        "seed": cli.seed,
        "argv": argv.get(1..).unwrap_or_default(),
    })
}

fn csv(rows: &[SuiteReport]) -> String {
    let mut s = String::from("suite,pass,samples,violations,bound,max_ratio\n");
    let frac = |v: &Option<Q>| v.as_ref().map_or(String::new(), |q| q.to_string());
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.suite,
            r.pass,
            r.samples,
            r.violations,
            frac(&r.bound),
            frac(&r.max_ratio)
        ));
    }
    s
}

fn ordinal(text: &str) -> Outcome<Ordinal> {
    Ok(parse_ordinal(text)?)
}

fn read_file(path: &PathBuf) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn read_json(path: &PathBuf) -> Outcome<Value> {
    serde_json::from_str(&read_file(path)?).map_err(|e| usage(format!("{} is not valid JSON: {e}", path.display())))
}

fn read_vectors(path: &PathBuf) -> Outcome<Vec<RatVec>> {
    let v = read_json(path)?;
    let items = v
        .as_array()
        .ok_or_else(|| usage(format!("{} must hold an array of vectors", path.display())))?;
    Ok(items.iter().map(RatVec::from_json).collect::<schreier_core::Result<_>>()?)
}

fn decimal(q: &Q) -> String {
    format!("{q} (≈{:.6})", approx(q))
}

fn plain(body: Value, text: String) -> Output {
    Output { body, text, rows: None, code: EXIT_OK }
}

fn schreier_cmd(cmd: &SchreierCmd, capacity: &Capacity) -> Outcome<Output> {
    let oracle = Schreier::new(capacity.schreier_window);
    match cmd {
        SchreierCmd::Member { alpha, set } => {
            let alpha = ordinal(alpha)?;
            let set = FinSet::parse(set)?;
            let member = oracle.member(&set, &alpha);
            let cert = oracle.partition_witness(&set, &alpha);
            let body = json!({
                "alpha": alpha.to_string(),
                "set": set.as_slice(),
                "member": member,
                "certificate": cert.map(|c| serde_json::to_value(c).expect("serializable")),
            });
            Ok(plain(body, format!("{member}\n")))
        }
        SchreierCmd::Enum { alpha, window, maximal } => {
            let alpha = ordinal(alpha)?;
            let sets = oracle.enumerate_admissible(*window, &alpha, *maximal)?;
            let text: String = sets.iter().map(|s| format!("{s}\n")).collect();
            let body = json!({
                "alpha": alpha.to_string(),
                "window": window,
                "maximal_only": maximal,
                "count": sets.len(),
                "sets": sets.iter().map(|s| s.as_slice().to_vec()).collect::<Vec<_>>(),
            });
            Ok(plain(body, text))
        }
    }
}

fn norm_cmd(args: &NormArgs, capacity: &Capacity) -> Outcome<Output> {
    let space = parse_space(&args.space)?;
    let x = match (&args.vector, &args.coords) {
        (Some(path), _) => parse_vector(&read_file(path)?)?,
        (None, Some(c)) => parse_vector(c)?,
        (None, None) => return Err(usage("give --vector FILE or --coords")),
    };
    let engine = NormEngine::new(capacity.clone());
    let n = engine.norm(&space, &x)?;
    let body = json!({"space": space.to_string(), "vector": x.to_json(), "norm": q_json(&n)});
    Ok(plain(body, format!("{}\n", decimal(&n))))
}

fn parse_refs(text: &str) -> Outcome<Vec<u32>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| usage(format!("`{s}` is not a positive index"))))
        .collect()
}

fn estimate_cmd(cmd: &EstimateCmd, capacity: &Capacity) -> Outcome<Output> {
    let EstimateCmd::Dominate { x_space, vectors, refs, v_space, mode, samples } = cmd;
    let x_space = parse_space(x_space)?;
    let v_space = parse_space(v_space)?;
    let xs = read_vectors(vectors)?;
    let refs = parse_refs(refs)?;
    let mode = match mode {
        EstimateMode::Exact => Mode::ExactVertex,
        EstimateMode::Sampled => Mode::Sampled { samples: *samples, seed: 0 },
    };
    let engine = NormEngine::new(capacity.clone());
    let report = domination_constant(&engine, &xs, &x_space, &refs, &v_space, mode)?;
    let text = match &report.upper_bound {
        Some(u) => format!("C = {}\n", decimal(u)),
        None => format!("C ≥ {} (sampled lower bound, unverified)\n", decimal(&report.lower_bound)),
    };
    Ok(plain(report.to_json(), text))
}

fn suite_config(args: &VerifyArgs, seed: u64, capacity: &Capacity) -> Outcome<SuiteConfig> {
    Ok(SuiteConfig {
        seed,
        samples: args.samples,
        alphas: args.alpha.iter().map(|a| ordinal(a)).collect::<Outcome<_>>()?,
        bound: args.bound.as_deref().map(parse_q).transpose()?,
        capacity: capacity.clone(),
    })
}

/// Runs one suite by id.
pub fn run_suite(id: &str, cfg: &SuiteConfig) -> schreier_core::Result<SuiteReport> {
    match id {
        "SCHREIER" => checks::suite_membership(cfg, 30, 15),
        "REGULARITY" => checks::suite_regularity(cfg, 10),
        "NORMS" => checks::suite_norms(cfg),
        "RDOM" => checks::suite_right_dominance(cfg),
        "P31" => estimates::suite_p31(cfg),
        "P24" => estimates::suite_p24(cfg),
        "L211" => estimates::suite_l211(cfg),
        "R212" => estimates::suite_r212(cfg),
        "L213" => estimates::suite_l213(cfg),
        "DERIV" => indices::suite_derivatives(cfg),
        "P46" => indices::suite_p46(cfg),
        "HRHO" => indices::suite_hrho(cfg),
        "TENSOR" => tensor::suite_tensor_identities(cfg),
        "P61" => tensor::suite_p61(cfg),
        "L66" => tensor::suite_l66(cfg),
        other => Err(Error::Invalid(format!("unknown suite `{other}`; known: {}", SUITES.join(", ")))),
    }
}

/// Every suite with the master seed, in [`SUITES`] order. A failing suite
/// (including a capacity error) does not stop the others.
pub fn run_all(base: &SuiteConfig, injected: &[(String, Q)]) -> (bool, Vec<Value>, Vec<SuiteReport>) {
    let mut pass = true;
    let mut values = Vec::new();
    let mut reports = Vec::new();
    for id in SUITES {
        let mut cfg = base.clone();
        cfg.bound = injected.iter().find(|(s, _)| s == id).map(|(_, b)| b.clone());
        match run_suite(id, &cfg) {
            Ok(r) => {
                pass &= r.pass;
                values.push(r.to_json());
                reports.push(r);
            }
            Err(e) => {
                pass = false;
                values.push(json!({"suite": id, "pass": false, "error": e.to_string()}));
            }
        }
    }
    (pass, values, reports)
}

fn verify_cmd(args: &VerifyArgs, seed: u64, capacity: &Capacity) -> Outcome<Output> {
    let cfg = suite_config(args, seed, capacity)?;
    let mut injected = Vec::new();
    for item in &args.inject_bound {
        let (id, b) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("--inject-bound expects SUITE=bound, got `{item}`")))?;
        let id = id.trim().to_ascii_uppercase();
        if !SUITES.contains(&id.as_str()) {
            return Err(usage(format!("unknown suite `{id}`")));
        }
        injected.push((id, parse_q(b)?));
    }
    if args.suite.eq_ignore_ascii_case("all") {
        let (pass, values, reports) = run_all(&cfg, &injected);
        let mut text = String::new();
        for v in &values {
            text.push_str(&summary_line(v));
        }
        text.push_str(&format!("aggregate: {}\n", if pass { "PASS" } else { "FAIL" }));
        let code = if pass {
            EXIT_OK
        } else if values.iter().any(|v| v.get("error").is_some_and(|e| e.as_str().is_some_and(|s| s.starts_with("capacity")))) && reports.iter().all(|r| r.pass) {
            EXIT_CAPACITY
        } else {
            EXIT_VIOLATION
        };
        return Ok(Output { body: json!({"pass": pass, "suites": values}), text, rows: Some(reports), code });
    }
    if !injected.is_empty() {
        return Err(usage("--inject-bound applies to `verify all`; use --bound for a single suite"));
    }
    let id = args.suite.to_ascii_uppercase();
    if !SUITES.contains(&id.as_str()) {
        return Err(usage(format!("unknown suite `{}`; known: {}", args.suite, SUITES.join(", "))));
    }
    let report = run_suite(&id, &cfg)?;
    let v = report.to_json();
    let code = if report.pass { EXIT_OK } else { EXIT_VIOLATION };
    Ok(Output { text: summary_line(&v), body: v, rows: Some(vec![report]), code })
}

fn summary_line(v: &Value) -> String {
    let id = v["suite"].as_str().unwrap_or("?");
    if let Some(e) = v.get("error") {
        return format!("{id}: ERROR {}\n", e.as_str().unwrap_or(""));
    }
    let verdict = if v["pass"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
    let pair = |k: &str| {
        v.get(k)
            .and_then(|p| schreier_core::num::json_q(p).ok())
            .map(|q| format!(" {k}={}", decimal(&q)))
            .unwrap_or_default()
    };
    format!(
        "{id}: {verdict} samples={} violations={}{}{}\n",
        v["samples"],
        v["violations"],
        pair("max_ratio"),
        pair("bound")
    )
}

fn index_cmd(cmd: &IndexCmd, capacity: &Capacity) -> Outcome<Output> {
    match cmd {
        IndexCmd::Derive { alpha, set, stages, horizon } => {
            let alpha = ordinal(alpha)?;
            let set = FinSet::parse(set)?;
            let oracle = Schreier::new(capacity.schreier_window);
            let d = derivative_member(&oracle, &set, &FamilyOracle::Schreier(alpha.clone()), *stages, *horizon)?;
            let mut body = d.to_json();
            body["alpha"] = json!(alpha.to_string());
            body["set"] = json!(set.as_slice());
            body["stages"] = json!(stages);
            Ok(plain(body, format!("{}\n", d.verdict.tag())))
        }
        IndexCmd::Hrho { space, vectors, rho } => {
            let space = parse_space(space)?;
            let xs = read_vectors(vectors)?;
            let rho = parse_q(rho)?;
            let engine = NormEngine::new(capacity.clone());
            let cert = h_rho_member(&engine, &xs, &space, &rho)?;
            let text = format!(
                "{} min={}\n",
                if cert.member { "member" } else { "not member" },
                decimal(&cert.min_value)
            );
            Ok(plain(cert.to_json(), text))
        }
        IndexCmd::Cb { family } => {
            let v = read_json(family)?;
            let sets: Vec<FinSet> = serde_json::from_value(v).map_err(|e| usage(format!("family must be an array of increasing sets: {e}")))?;
            let fam = ExplicitFamily::new(sets)?;
            let rank = cb_rank_finite(&fam);
            Ok(plain(json!({"family_size": fam.len(), "cb_rank": rank}), format!("{rank}\n")))
        }
    }
}

fn tensor_cmd(cmd: &TensorCmd, capacity: &Capacity) -> Outcome<Output> {
    let TensorCmd::Norm { file } = cmd;
    let u = TensorOp::from_json(&read_json(file)?)?;
    let engine = NormEngine::new(capacity.clone());
    let n = injective_norm(&engine, &u)?;
    Ok(plain(json!({"tensor": u.to_json(), "injective_norm": q_json(&n)}), format!("{}\n", decimal(&n))))
}
