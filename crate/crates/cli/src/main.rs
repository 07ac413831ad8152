//! `kohnlab`: batch frontend for the engine, the certificate checker, the
//! invariant report and the verifier suites.
//!
//! Every invocation prints a JSON run report on stdout (prose with
//! `--human`). Artifacts written with `--out` contain no timings, so they
//! are a pure function of the inputs, the flags and the seed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use kohnlab::engine::{
    self, Certificate, DomainError, EngineConfig, EngineError, SpecialDomain,
};
use kohnlab::invariants::{invariant_report, InvariantConfig, InvariantError};
use kohnlab::par::{self, Parallelism};
use kohnlab::verifiers::{self, Suite, SuiteConfig, SuiteResult};
use kohnlab::{Budget, Ideal};

const REPORT_SCHEMA: &str = "kohnlab-run-report/1";

mod exit {
    pub const OK: u8 = 0;
    pub const INTERNAL: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const NOT_FINITE: u8 = 3;
    pub const GENERICITY: u8 = 4;
    pub const BUDGET: u8 = 5;
    pub const REJECT: u8 = 6;
    pub const SUITE_FAILURE: u8 = 7;
}

#[derive(Parser, Debug)]
#[command(name = "kohnlab", version, about = "Certified Kohn multiplier computations on special domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Where to write the command's artifact.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores, 1 = sequential).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Largest degree any Gröbner basis element may reach.
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Largest number of S-pairs reduced per Gröbner basis.
    #[arg(long, global = true)]
    max_spairs: Option<usize>,
    /// Fresh draws allowed for each generic choice.
    #[arg(long, global = true)]
    retries: Option<u32>,
    /// Print prose instead of JSON.
    #[arg(long, global = true)]
    human: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants q, s, p and the D'Angelo type of a domain.
    Type { domain: PathBuf },
    /// Run the algorithm and emit a certificate.
    Run { domain: PathBuf },
    /// Check a certificate against a domain.
    Verify { certificate: PathBuf, domain: PathBuf },
    /// Run a verifier suite (a1..a4, i4, i5, i6, iii4, iii5 or all).
    Suite {
        name: String,
        /// Number of cases (default: the suite's own size).
        #[arg(long)]
        cases: Option<usize>,
    },
}

#[derive(Debug, Serialize)]
struct Outcome {
    status: &'static str,
    exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
}

#[derive(Debug, Serialize)]
struct RunReport {
    schema: &'static str,
    command: &'static str,
    inputs: Value,
    outcome: Outcome,
    timings: Value,
    artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    result: Value,
}

/// What a command hands back to be wrapped in a [`RunReport`].
struct Done {
    code: u8,
    message: Option<String>,
    result: Value,
    /// Serialized artifact for `--out`.
    artifact: Option<String>,
    human: String,
}

impl Done {
    fn fail(code: u8, message: impl Into<String>) -> Self {
        let message = message.into();
        Done {
            code,
            human: format!("error: {message}"),
            message: Some(message),
            result: Value::Null,
            artifact: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, inputs) = describe(&cli);
    let mut done = par::with_jobs(cli.jobs, || dispatch(&cli));

    let mut artifacts = Vec::new();
    if let (Some(path), Some(text)) = (&cli.out, done.artifact.take()) {
        match std::fs::write(path, text) {
            Ok(()) => artifacts.push(path.display().to_string()),
            Err(e) => done = Done::fail(exit::INTERNAL, format!("cannot write {}: {e}", path.display())),
        }
    }

    let report = RunReport {
        schema: REPORT_SCHEMA,
        command: name,
        inputs,
        outcome: Outcome {
            status: if done.code == exit::OK { "success" } else { "failure" },
            exit_code: done.code,
            message: done.message.clone(),
        },
        timings: json!({ "wall_ms": start.elapsed().as_millis() as u64 }),
        artifacts,
        result: if cli.out.is_some() { Value::Null } else { done.result },
    };
    if cli.human {
        println!("{}", done.human);
        if let Some(path) = report.artifacts.first() {
            println!("wrote {path}");
        }
    } else {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    }
    ExitCode::from(done.code)
}

fn describe(cli: &Cli) -> (&'static str, Value) {
    let flags = json!({
        "seed": cli.seed,
        "out": cli.out.as_ref().map(|p| p.display().to_string()),
        "jobs": cli.jobs,
        "max_degree": cli.max_degree,
        "max_spairs": cli.max_spairs,
        "retries": cli.retries,
    });
    match &cli.command {
        Command::Type { domain } => ("type", json!({ "domain": domain, "flags": flags })),
        Command::Run { domain } => ("run", json!({ "domain": domain, "flags": flags })),
        Command::Verify { certificate, domain } => (
            "verify",
            json!({ "certificate": certificate, "domain": domain, "flags": flags }),
        ),
        Command::Suite { name, cases } => ("suite", json!({ "suite": name, "cases": cases, "flags": flags })),
    }
}

fn dispatch(cli: &Cli) -> Done {
    match &cli.command {
        Command::Type { domain } => cmd_type(cli, domain),
        Command::Run { domain } => cmd_run(cli, domain),
        Command::Verify { certificate, domain } => cmd_verify(certificate, domain),
        Command::Suite { name, cases } => cmd_suite(cli, name, *cases),
    }
}

fn budget(cli: &Cli) -> Budget {
    let mut b = Budget::default();
    if let Some(d) = cli.max_degree {
        b.max_degree = d;
    }
    if let Some(s) = cli.max_spairs {
        b.max_spairs = s;
    }
    b
}

fn parallelism(cli: &Cli) -> Parallelism {
    if cli.jobs == 1 {
        Parallelism::Sequential
    } else {
        Parallelism::Parallel
    }
}

fn pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializes");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, Done> {
    std::fs::read_to_string(path)
        .map_err(|e| Done::fail(exit::PARSE, format!("cannot read {}: {e}", path.display())))
}

fn load_domain(path: &Path) -> Result<SpecialDomain, Done> {
    let text = read(path)?;
    SpecialDomain::from_json(&text).map_err(|e: DomainError| {
        Done::fail(exit::PARSE, format!("{}: {e}", path.display()))
    })
}

fn cmd_type(cli: &Cli, path: &Path) -> Done {
    let domain = match load_domain(path) {
        Ok(d) => d,
        Err(done) => return done,
    };
    let ideal = Ideal::with_budget(domain.n, domain.generators.clone(), budget(cli));
    match invariant_report(&ideal, &InvariantConfig::default()) {
        Ok(report) => {
            let mut human = format!(
                "q = {}\ns = {}\np = {}\ntype = {}\n",
                report.q_power, report.colength_s, report.p_exponent, report.dangelo_type
            );
            for c in &report.checks {
                human.push_str(&format!(
                    "{} {}: {}\n",
                    if c.holds { "ok  " } else { "FAIL" },
                    c.name,
                    c.statement
                ));
            }
            Done {
                code: exit::OK,
                message: None,
                result: serde_json::to_value(&report).expect("serializes"),
                artifact: Some(pretty(&report)),
                human: human.trim_end().to_string(),
            }
        }
        Err(InvariantError::NotFinite) => Done::fail(
            exit::NOT_FINITE,
            "colength not certified finite: the origin is not an isolated zero",
        ),
        Err(InvariantError::Groebner(e)) if e.is_budget() => Done::fail(exit::BUDGET, e.to_string()),
        Err(e) => Done::fail(exit::INTERNAL, e.to_string()),
    }
}

fn cmd_run(cli: &Cli, path: &Path) -> Done {
    let domain = match load_domain(path) {
        Ok(d) => d,
        Err(done) => return done,
    };
    let mut config = EngineConfig::with_seed(cli.seed);
    config.budget = budget(cli);
    config.parallelism = parallelism(cli);
    if let Some(r) = cli.retries {
        config.max_retries = r;
    }
    if let Err(e) = config.validate() {
        return Done::fail(exit::PARSE, e);
    }
    match engine::run(&domain, &config) {
        Ok(cert) => {
            let eps = cert.terminal_epsilon().unwrap_or("?").to_string();
            let summary = json!({
                "terminal_epsilon": eps,
                "nodes": cert.nodes.len(),
                "strategy": cert.strategy,
            });
            Done {
                code: exit::OK,
                message: None,
                human: format!(
                    "terminal epsilon = {eps}\nnodes = {}\nstrategy = {:?}",
                    cert.nodes.len(),
                    cert.strategy
                ),
                result: json!({ "summary": summary, "certificate": cert }),
                artifact: Some(cert.to_json()),
            }
        }
        Err(e) => {
            let code = match &e {
                EngineError::InvalidDomain(_) => exit::PARSE,
                EngineError::NotFinite => exit::NOT_FINITE,
                EngineError::GenericityExhausted { .. } => exit::GENERICITY,
                EngineError::Budget(_) => exit::BUDGET,
                EngineError::Degenerate(_) | EngineError::Internal(_) => exit::INTERNAL,
            };
            Done::fail(code, e.to_string())
        }
    }
}

fn cmd_verify(cert_path: &Path, domain_path: &Path) -> Done {
    let text = match read(cert_path) {
        Ok(t) => t,
        Err(done) => return done,
    };
    let cert = match Certificate::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            return Done::fail(
                exit::PARSE,
                format!("{}: line {}, column {}: {e}", cert_path.display(), e.line(), e.column()),
            )
        }
    };
    let domain = match load_domain(domain_path) {
        Ok(d) => d,
        Err(done) => return done,
    };
    let report = engine::verify_certificate(&cert, &domain);
    let (code, message, human) = match &report.failure {
        None => (
            exit::OK,
            None,
            format!(
                "accepted: {} nodes, terminal epsilon = {}",
                report.nodes_checked,
                report.terminal_epsilon.as_deref().unwrap_or("?")
            ),
        ),
        Some(f) => (exit::REJECT, Some(f.to_string()), format!("rejected at {f}")),
    };
    Done {
        code,
        message,
        result: serde_json::to_value(&report).expect("serializes"),
        artifact: Some(pretty(&report)),
        human,
    }
}

fn suite_line(r: &SuiteResult) -> String {
    format!(
        "{:<5} {}  {} run, {} passed, {} skipped, {} failed",
        r.suite,
        if r.pass() { "PASS" } else { "FAIL" },
        r.cases_run,
        r.passed,
        r.skipped.len(),
        r.failures.len()
    )
}

fn cmd_suite(cli: &Cli, name: &str, cases: Option<usize>) -> Done {
    let suites: Vec<Suite> = if name == "all" {
        Suite::ALL.to_vec()
    } else {
        match name.parse::<Suite>() {
            Ok(s) => vec![s],
            Err(e) => return Done::fail(exit::PARSE, e.to_string()),
        }
    };
    let config = SuiteConfig {
        cases,
        budget: budget(cli),
        parallelism: parallelism(cli),
        ..SuiteConfig::with_seed(cli.seed)
    };
    let results: Vec<SuiteResult> = suites.iter().map(|&s| verifiers::run_suite(s, &config)).collect();
    let passed = results.iter().all(SuiteResult::pass);

    let mut human: Vec<String> = results.iter().map(suite_line).collect();
    for r in &results {
        for f in &r.failures {
            human.push(format!("  {} case {}: {}", r.suite, f.case, f.reason));
        }
    }

    let timed = json!(results);
    let stripped: Vec<SuiteResult> = results
        .into_iter()
        .map(|mut r| {
            r.wall_time_ms = None;
            r
        })
        .collect();
    let artifact = if name == "all" {
        pretty(&json!({
            "schema": verifiers::SUITE_SCHEMA,
            "seed": cli.seed,
            "passed": passed,
            "suites": stripped,
        }))
    } else {
        pretty(&stripped[0])
    };
    let failures: usize = stripped.iter().map(|r| r.failures.len()).sum();
    Done {
        code: if passed { exit::OK } else { exit::SUITE_FAILURE },
        message: (!passed).then(|| format!("{failures} case(s) contradict the statement under test")),
        result: timed,
        artifact: Some(artifact),
        human: human.join("\n"),
    }
}
