//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always appear in
//! `cargo test` output; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kohnlab::engine::mutate::seeded_mutations;
use kohnlab::engine::{
    run, verify_certificate, Certificate, EngineConfig, NodeKind, SpecialDomain, Witness,
};
use kohnlab::invariants::{invariant_report, Bracket, InvariantConfig};
use kohnlab::par::Parallelism;
use kohnlab::poly::{jacobian_determinant, minor_jacobian, parse_with_names};
use kohnlab::rational::parse_rational;
use kohnlab::verifiers::{run_suite, Suite, SuiteConfig, SuiteResult};
use kohnlab::{Ideal, Polynomial, Rational};

const CORPUS: [(usize, &[&str]); 6] = [
    (2, &["z1", "z2"]),
    (2, &["z1^2", "z2^2"]),
    (2, &["z1^2", "z2^3"]),
    (2, &["z1^3", "z2^4", "z1*z2^2"]),
    (3, &["z1^2", "z2^2", "z3^2"]),
    (3, &["z1^2", "z2^3", "z3^4"]),
];

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

struct Entry {
    label: String,
    domain: SpecialDomain,
    cert: Result<Certificate, String>,
    elapsed: Duration,
}

fn corpus() -> Vec<Entry> {
    CORPUS
        .iter()
        .map(|&(n, gens)| {
            let domain = SpecialDomain::parse(n, gens).expect("corpus parses");
            let start = Instant::now();
            let cert = run(&domain, &EngineConfig::default()).map_err(|e| e.to_string());
            Entry {
                label: format!("({})", gens.join(", ")),
                domain,
                cert,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

fn termination(corpus: &[Entry]) -> Outcome {
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for e in corpus {
        slowest = slowest.max(e.elapsed);
        let problem = match &e.cert {
            Err(err) => Some(err.clone()),
            Ok(cert) => {
                let terminal = cert.terminal_node().expect("terminal node");
                let constant = parse_with_names(&terminal.poly, &cert.domain.vars)
                    .map(|p| p.is_nonzero_constant())
                    .unwrap_or(false);
                let positive = terminal
                    .epsilon
                    .as_deref()
                    .and_then(|s| parse_rational(s).ok())
                    .is_some_and(|eps| eps > Rational::from_integer(0.into()));
                let report = verify_certificate(cert, &e.domain);
                if !constant {
                    Some("terminal polynomial is not a nonzero constant".into())
                } else if !positive {
                    Some("terminal epsilon is not positive".into())
                } else if !report.accepted {
                    Some(format!("rejected: {:?}", report.failure))
                } else if e.elapsed > Duration::from_secs(120) {
                    Some(format!("took {:?}", e.elapsed))
                } else {
                    None
                }
            }
        };
        if let Some(p) = problem {
            bad.push(format!("{}: {p}", e.label));
        }
    }
    if bad.is_empty() {
        outcome(true, format!("6/6 certified and accepted, slowest run {slowest:.1?}"))
    } else {
        outcome(false, bad.join("; "))
    }
}

fn matrix(rows: &[Vec<String>]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|c| parse_rational(c).expect("rational")).collect())
        .collect()
}

/// Recomputes `Jac(h_1..h_{n-1}, X_{ν-1}) = minor · (∂_w φ_{ν-1})(h, w)`
/// for one chain step, from the certificate's recorded data only.
fn chain_identity(cert: &Certificate, domain: &SpecialDomain, node: usize) -> Result<bool, String> {
    let err = |e: kohnlab::poly::PolyError| e.to_string();
    let n = domain.n;
    let w = n - 1;
    let step = &cert.nodes[node];
    let Witness::Chain { pullback, nu, .. } = &step.witness else {
        return Err("not a chain step".into());
    };
    let Witness::Pullback { h_coefficients, change_of_coordinates, g, cofactor, .. } =
        &cert.nodes[*pullback].witness
    else {
        return Err("chain does not point at a pullback".into());
    };
    let mut fiber_vars: Vec<String> = (1..n).map(|i| format!("u{i}")).collect();
    fiber_vars.push("w".into());
    let g = parse_with_names(g, &fiber_vars).map_err(|e| e.to_string())?;
    let p = parse_with_names(cofactor, &fiber_vars).map_err(|e| e.to_string())?;
    let b = matrix(change_of_coordinates);
    let hc = matrix(h_coefficients);

    let h_w: Vec<Polynomial> = hc
        .iter()
        .map(|row| {
            let mut h = Polynomial::zero(n);
            for (c, f) in row.iter().zip(&domain.generators) {
                h = &h + &(f * &Polynomial::constant(n, c.clone()));
            }
            h.linear_substitution(&b)
        })
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let prev = parse_with_names(&cert.nodes[step.inputs[0]].poly, &domain.vars)
        .map_err(|e| e.to_string())?
        .linear_substitution(&b)
        .map_err(err)?;

    let mut fs = h_w.clone();
    fs.push(prev);
    let direct = jacobian_determinant(&fs).map_err(err)?;

    let slots: Vec<usize> = (0..n - 1).collect();
    let minor = if slots.is_empty() { Polynomial::one(n) } else { minor_jacobian(&h_w, &slots).map_err(err)? };
    let mut phi = g;
    for _ in 1..*nu {
        phi = phi.derivative(w).map_err(err)?;
    }
    phi = &p.pow(nu - 1) * &phi;
    let mut images = h_w;
    images.push(Polynomial::var(n, w));
    let fiber_derivative = phi.derivative(w).map_err(err)?.compose(&images).map_err(err)?;
    Ok(direct == &minor * &fiber_derivative)
}

fn replay_identity(corpus: &[Entry]) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for e in corpus {
        let Ok(cert) = &e.cert else {
            bad.push(format!("{}: no certificate", e.label));
            continue;
        };
        for node in &cert.nodes {
            if matches!(node.kind, NodeKind::FiberChainStep | NodeKind::ChainTerminal) {
                checked += 1;
                match chain_identity(cert, &e.domain, node.id) {
                    Ok(true) => {}
                    Ok(false) => bad.push(format!("{} node {}: identity fails", e.label, node.id)),
                    Err(err) => bad.push(format!("{} node {}: {err}", e.label, node.id)),
                }
            }
        }
    }
    if !bad.is_empty() {
        outcome(false, bad.join("; "))
    } else if checked == 0 {
        outcome(false, "no chain steps in the corpus")
    } else {
        outcome(true, format!("{checked} chain steps replay exactly"))
    }
}

fn mutation_rejection(corpus: &[Entry]) -> Outcome {
    let mut total = 0;
    let mut bad = Vec::new();
    for (i, e) in corpus.iter().enumerate() {
        let Ok(cert) = &e.cert else {
            bad.push(format!("{}: no certificate", e.label));
            continue;
        };
        let muts = seeded_mutations(cert, 0, &format!("corpus{i}"), 10);
        if muts.len() != 10 {
            bad.push(format!("{}: only {} mutations", e.label, muts.len()));
        }
        for (m, mutated) in muts {
            total += 1;
            let report = verify_certificate(&mutated, &e.domain);
            match report.failure {
                Some(f) if f.node == Some(m.node) => {}
                Some(f) => bad.push(format!("{} {:?} at node {}: rejected at {f}", e.label, m.kind, m.node)),
                None => bad.push(format!("{} {:?} at node {}: accepted", e.label, m.kind, m.node)),
            }
        }
    }
    if bad.is_empty() {
        outcome(true, format!("{total}/60 mutations rejected at the mutated node"))
    } else {
        outcome(false, bad.join("; "))
    }
}

fn suite_outcome(results: &[SuiteResult], limit: Option<Duration>, elapsed: Duration) -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for r in results {
        pass &= r.pass() && r.cases_run == Suite::ALL.iter().find(|s| s.name() == r.suite).unwrap().default_cases();
        parts.push(format!(
            "{} {}/{} passed, {} skipped, {} failed",
            r.suite,
            r.passed,
            r.cases_run,
            r.skipped.len(),
            r.failures.len()
        ));
        for f in r.failures.iter().take(3) {
            parts.push(format!("[{} case {}: {}]", r.suite, f.case, f.reason));
        }
    }
    if let Some(limit) = limit {
        if elapsed > limit {
            pass = false;
        }
    }
    parts.push(format!("in {elapsed:.1?}"));
    outcome(pass, parts.join(", "))
}

fn suites(which: &[Suite], limit: Option<Duration>) -> (Outcome, Vec<SuiteResult>) {
    let config = SuiteConfig::with_seed(0);
    let start = Instant::now();
    let results: Vec<SuiteResult> = which.iter().map(|&s| run_suite(s, &config)).collect();
    (suite_outcome(&results, limit, start.elapsed()), results)
}

fn appendix() -> Outcome {
    let (mut out, results) = suites(
        &[Suite::A1, Suite::A2, Suite::A3, Suite::A4],
        Some(Duration::from_secs(600)),
    );
    let a2 = results.iter().find(|r| r.suite == "a2").expect("a2 ran");
    let nqh = a2.tally("non_quasi_homogeneous");
    out.detail.push_str(&format!(", a2 non-quasi-homogeneous cases: {nqh}"));
    if nqh < 5 {
        out.pass = false;
    }
    out
}

fn fixed_values() -> Outcome {
    let domain = SpecialDomain::parse(2, &["z1^2", "z2^3"]).unwrap();
    let ideal = Ideal::new(2, domain.generators.clone());
    let report = match invariant_report(&ideal, &InvariantConfig::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let invariants = (report.q_power, report.colength_s, report.p_exponent, report.dangelo_type);
    let expected = (4, 6, Bracket::Exact(3), Bracket::Exact(6));
    let jac = jacobian_determinant(&domain.generators).unwrap();
    let six = parse_with_names("6*z1*z2^2", &domain.vars).unwrap();
    let ord = jac.ord_at_origin();
    let pass = invariants == expected && jac == six && ord == Some(3) && 3 <= report.colength_s;
    outcome(
        pass,
        format!(
            "q={} s={} p={} type={}; jacobian {jac} with ord {} <= {}",
            report.q_power,
            report.colength_s,
            report.p_exponent,
            report.dangelo_type,
            ord.map_or("-".into(), |o| o.to_string()),
            report.colength_s
        ),
    )
}

fn determinism(corpus: &[Entry]) -> Outcome {
    let mut bad = Vec::new();
    for e in corpus {
        let Ok(cert) = &e.cert else { continue };
        let again = run(&e.domain, &EngineConfig::default()).map(|c| c.to_json());
        let sequential = run(
            &e.domain,
            &EngineConfig { parallelism: Parallelism::Sequential, ..EngineConfig::default() },
        )
        .map(|c| c.to_json());
        if again.as_deref() != Ok(cert.to_json().as_str()) || again != sequential {
            bad.push(format!("certificate for {}", e.label));
        }
    }
    let report = || {
        let ideal = Ideal::new(2, CORPUS[3].1.iter().map(|s| kohnlab::poly::parse(s, 2).unwrap()).collect());
        serde_json::to_string(&invariant_report(&ideal, &InvariantConfig::default()).unwrap()).unwrap()
    };
    if report() != report() {
        bad.push("invariant report".into());
    }
    for suite in [Suite::I6, Suite::A3] {
        let bytes = |mode: Parallelism| {
            let config = SuiteConfig { cases: Some(10), parallelism: mode, ..SuiteConfig::with_seed(9) };
            let mut r = run_suite(suite, &config);
            r.wall_time_ms = None;
            serde_json::to_string(&r).unwrap()
        };
        let a = bytes(Parallelism::Parallel);
        if a != bytes(Parallelism::Parallel) || a != bytes(Parallelism::Sequential) {
            bad.push(format!("suite {}", suite.name()));
        }
    }
    if bad.is_empty() {
        outcome(true, "certificates, invariant report and suite results are byte-identical on re-run and across thread modes")
    } else {
        outcome(false, format!("differs: {}", bad.join(", ")))
    }
}

fn main() -> ExitCode {
    // `cargo test -- <filter>` and `--list` probes: run only when unfiltered.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    if args.iter().any(|a| !a.starts_with('-') && !"acceptance".contains(a.as_str())) {
        return ExitCode::SUCCESS;
    }

    let corpus = corpus();
    let criteria: Vec<Criterion> = vec![
        ("termination corpus", Box::new(|| termination(&corpus))),
        ("replay identity", Box::new(|| replay_identity(&corpus))),
        ("mutation rejection", Box::new(|| mutation_rejection(&corpus))),
        ("q <= s <= C(n+q-1, q-1) suite", Box::new(|| suites(&[Suite::I5], Some(Duration::from_secs(60))).0)),
        ("p <= q <= (n+2)p suite", Box::new(|| suites(&[Suite::I4], None).0)),
        ("minimal radical power suite", Box::new(|| suites(&[Suite::I6], None).0)),
        ("generic combinations suite", Box::new(|| suites(&[Suite::Iii4, Suite::Iii5], None).0)),
        ("appendix suites", Box::new(appendix)),
        ("fixed values", Box::new(fixed_values)),
        ("determinism", Box::new(|| determinism(&corpus))),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
