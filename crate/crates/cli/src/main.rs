use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use tsbs_core::certify::{brieskorn_pham, euler_field_over, Composition, Report};
use tsbs_core::json::{self as certjson, root_entries, AnyCertificate, CertificateFile};
use tsbs_core::star::cofactors_theorem_form;
use tsbs_core::syntax::{parse_factored, parse_poly, print_factored};
use tsbs_core::{
    compose, integer_check, star, suspension_certificate, verify_certificate, verify_euler, Certificate,
    Error, Rational,
};

const EXIT_OTHER: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

/// Exact star products and Thom-Sebastiani functional equations.
#[derive(Parser)]
#[command(name = "tsbs", version)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Star product of two factored polynomials, e.g. "(s+1/2)" "(t+1/3)(t+2/3)".
    Star { a: String, b: String },
    /// Cofactors A(s,t), B(s,t) with (b*c)(s) = A(s,t) b(s-t) + B(s,t) c(t).
    Cofactors { b: String, c: String },
    /// Verify certificate files.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Also check P(k) f^k = b(k) f^k for k = 1..=K.
        #[arg(long, value_name = "K")]
        integers: Option<u32>,
        /// Verify up to N files concurrently.
        #[arg(long, value_name = "N", default_value_t = 1)]
        jobs: usize,
    },
    /// Euler field sum w_j y_j d_{y_j} of a weighted-homogeneous polynomial.
    Euler {
        g: String,
        /// Comma-separated rational weights, one per variable.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<String>,
        /// Variables the weights refer to; defaults to those of G in canonical order.
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
    },
    /// Euler certificate for z^R.
    Suspension {
        r: i64,
        #[arg(long, default_value = "z")]
        var: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Certificate for f + g from a certificate for f and an Euler certificate for g.
    Compose {
        f: PathBuf,
        g: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Brieskorn-Pham polynomial from powers such as x:2 y:3 z:5.
    Bp {
        #[arg(required = true)]
        powers: Vec<String>,
        /// Run the integer check up to K on every intermediate certificate.
        #[arg(long, value_name = "K", default_value_t = 0)]
        integers: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_parse_error() || matches!(e, Error::Json(_)) {
            EXIT_PARSE
        } else if e.is_internal() {
            EXIT_INTERNAL
        } else if matches!(e, Error::InvalidCertificate(_)) {
            EXIT_VERIFY
        } else {
            EXIT_OTHER
        };
        Failure { code, message: e.to_string() }
    }
}

impl Failure {
    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure { code: EXIT_OTHER, message: format!("{}: {e}", path.display()) }
    }

    fn parse(message: String) -> Self {
        Failure { code: EXIT_PARSE, message }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Star { a, b } => cmd_star(cli.json, a, b),
        Command::Cofactors { b, c } => cmd_cofactors(cli.json, b, c),
        Command::Verify { files, integers, jobs } => cmd_verify(cli.json, files, *integers, *jobs),
        Command::Euler { g, weights, vars } => cmd_euler(cli.json, g, weights, vars.as_deref()),
        Command::Suspension { r, var, output } => {
            let cert = suspension_certificate(*r, var)?;
            emit_certificate(cli.json, &CertificateFile::from_euler(&cert), output.as_deref(), json!({}))
        }
        Command::Compose { f, g, output } => cmd_compose(cli.json, f, g, output.as_deref()),
        Command::Bp { powers, integers, output } => cmd_bp(cli.json, powers, *integers, output.as_deref()),
    }
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn cmd_star(as_json: bool, a: &str, b: &str) -> Outcome {
    let (a, _) = parse_factored(a)?;
    let (b, _) = parse_factored(b)?;
    let p = star(&a, &b);
    if as_json {
        print_json(&json!({ "star": print_factored(&p), "roots": root_entries(&p) }));
    } else {
        println!("{}", print_factored(&p));
    }
    Ok(())
}

fn cmd_cofactors(as_json: bool, b: &str, c: &str) -> Outcome {
    let (b, _) = parse_factored(b)?;
    let (c, _) = parse_factored(c)?;
    let pair = cofactors_theorem_form(&b, &c)?;
    let p = star(&b, &c);
    if as_json {
        print_json(&json!({ "star": print_factored(&p), "A": pair.a.to_string(), "B": pair.b.to_string() }));
    } else {
        println!("star   = {}", print_factored(&p));
        println!("A(s,t) = {}", pair.a);
        println!("B(s,t) = {}", pair.b);
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn load(path: &Path) -> Result<AnyCertificate, Failure> {
    certjson::load(&read(path)?).map_err(|e| {
        let f = Failure::from(e);
        Failure { message: format!("{}: {}", path.display(), f.message), ..f }
    })
}

fn verify_one(path: &Path, integers: Option<u32>) -> Result<Report, Failure> {
    let (mut report, as_bs) = match load(path)? {
        AnyCertificate::Bs(c) => (verify_certificate(&c), c),
        AnyCertificate::Euler(e) => (verify_euler(&e), Certificate::from_euler(&e)),
    };
    if let Some(k) = integers.filter(|_| report.passed()) {
        report.checks.extend(integer_check(&as_bs, k).checks);
    }
    Ok(report)
}

fn cmd_verify(as_json: bool, files: &[PathBuf], integers: Option<u32>, jobs: usize) -> Outcome {
    let jobs = jobs.clamp(1, files.len());
    let mut results: Vec<Option<Result<Report, Failure>>> = (0..files.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunk = files.len().div_ceil(jobs);
        for (paths, slots) in files.chunks(chunk).zip(results.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (path, slot) in paths.iter().zip(slots) {
                    *slot = Some(verify_one(path, integers));
                }
            });
        }
    });

    let mut worst = 0u8;
    let mut out = Vec::new();
    for (path, result) in files.iter().zip(results) {
        let name = path.display().to_string();
        match result.expect("every file is verified") {
            Ok(report) => {
                if !report.passed() {
                    worst = worst.max(EXIT_VERIFY);
                }
                if as_json {
                    let checks: Vec<Value> = report
                        .checks
                        .iter()
                        .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                        .collect();
                    out.push(json!({
                        "file": name,
                        "passed": report.passed(),
                        "checks": checks,
                        "residual": report.residual.as_ref().map(|r| r.to_string()),
                    }));
                } else {
                    println!("{name}: {}", if report.passed() { "OK" } else { "FAILED" });
                    for line in report.to_string().lines() {
                        println!("  {line}");
                    }
                }
            }
            Err(f) => {
                worst = worst.max(f.code);
                if as_json {
                    out.push(json!({ "file": name, "passed": false, "error": f.message }));
                } else {
                    println!("{name}: ERROR {}", f.message);
                }
            }
        }
    }
    if as_json {
        print_json(&Value::Array(out));
    }
    match worst {
        0 => Ok(()),
        code => Err(Failure { code, message: String::new() }),
    }
}

fn parse_weight(text: &str) -> Result<Rational, Failure> {
    tsbs_core::algebra::rational::parse_rational(text.trim())
        .ok_or_else(|| Failure::parse(format!("`{text}` is not a rational number")))
}

fn cmd_euler(as_json: bool, g: &str, weights: &[String], vars: Option<&[String]>) -> Outcome {
    let g = parse_poly(g)?;
    let weights = weights.iter().map(|w| parse_weight(w)).collect::<Result<Vec<_>, _>>()?;
    let vars = vars.map(<[String]>::to_vec).unwrap_or_else(|| g.vars().to_vec());
    let chi = euler_field_over(&g, &vars, &weights)?;
    if as_json {
        print_json(&json!({ "function": g.to_string(), "variables": vars, "euler_field": chi.to_string() }));
    } else {
        println!("{chi}");
    }
    Ok(())
}

/// Writes the certificate to `output`, or prints it when there is none.
/// `extra` fields are merged into the JSON summary printed with `--json`.
fn emit_certificate(as_json: bool, file: &CertificateFile, output: Option<&Path>, extra: Value) -> Outcome {
    let text = serde_json::to_string_pretty(file).expect("serializable");
    match output {
        Some(path) => {
            fs::write(path, format!("{text}\n")).map_err(|e| Failure::io(path, e))?;
            if as_json {
                let mut summary = extra;
                summary["btilde"] = json!(file.btilde);
                summary["output"] = json!(path.display().to_string());
                print_json(&summary);
            }
        }
        None if as_json && extra.as_object().is_some_and(|o| !o.is_empty()) => {
            let mut summary = extra;
            summary["certificate"] = serde_json::to_value(file).expect("serializable");
            print_json(&summary);
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn describe(comp: &Composition) -> Value {
    json!({
        "function": comp.certificate.function.to_string(),
        "btilde": print_factored(&comp.certificate.btilde),
        "A": comp.cofactors.a.to_string(),
        "B": comp.cofactors.b.to_string(),
        "R": comp.r_operator.to_string(),
    })
}

fn print_composition(comp: &Composition) {
    println!("h      = {}", comp.certificate.function);
    println!("b(s)   = {}", print_factored(&comp.certificate.btilde));
    println!("A(s,t) = {}", comp.cofactors.a);
    println!("B(s,t) = {}", comp.cofactors.b);
    println!("R(s)   = {}", comp.r_operator);
}

fn cmd_compose(as_json: bool, f: &Path, g: &Path, output: Option<&Path>) -> Outcome {
    let cf = match load(f)? {
        AnyCertificate::Bs(c) => c,
        AnyCertificate::Euler(e) => Certificate::from_euler(&e),
    };
    let AnyCertificate::Euler(eg) = load(g)? else {
        return Err(Failure {
            code: EXIT_OTHER,
            message: format!("{}: the second certificate must be an Euler certificate", g.display()),
        });
    };
    let comp = compose(&cf, &eg)?;
    let file = CertificateFile::from_certificate(&comp.certificate);
    if as_json {
        emit_certificate(true, &file, output, describe(&comp))
    } else {
        print_composition(&comp);
        if output.is_some() {
            emit_certificate(false, &file, output, json!({}))?;
        }
        Ok(())
    }
}

fn parse_power(text: &str) -> Result<(String, i64), Failure> {
    let bad = || Failure::parse(format!("expected VAR:EXPONENT, found `{text}`"));
    let (var, exp) = text.split_once(':').ok_or_else(bad)?;
    let exp = exp.trim().parse::<i64>().map_err(|_| bad())?;
    Ok((var.trim().to_string(), exp))
}

fn cmd_bp(as_json: bool, powers: &[String], integers: u32, output: Option<&Path>) -> Outcome {
    let powers = powers.iter().map(|p| parse_power(p)).collect::<Result<Vec<_>, _>>()?;
    for (var, _) in &powers {
        // Reuse the grammar's variable rules.
        let p = parse_poly(var)?;
        if p.vars() != [var.clone()] {
            return Err(Failure::parse(format!("`{var}` is not a variable name")));
        }
    }
    let bp = brieskorn_pham(&powers, integers)?;
    let file = CertificateFile::from_certificate(&bp.certificate);
    if as_json {
        let steps: Vec<Value> = bp.steps.iter().map(describe).collect();
        let extra = json!({
            "function": bp.certificate.function.to_string(),
            "btilde_display": print_factored(bp.btilde()),
            "steps": steps,
        });
        return emit_certificate(true, &file, output, extra);
    }
    for (i, step) in bp.steps.iter().enumerate() {
        if i > 0 {
            println!();
        }
        print_composition(step);
    }
    if bp.steps.is_empty() {
        println!("h      = {}", bp.certificate.function);
        println!("b(s)   = {}", print_factored(bp.btilde()));
    }
    if output.is_some() {
        emit_certificate(false, &file, output, json!({}))?;
    }
    Ok(())
}
