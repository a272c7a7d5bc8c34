use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use gridsign_core::signs::{
    count_solutions, gauge_difference, solve_signs, twist, verify_axioms, ConstraintKind,
    SignFile, VerificationReport,
};
use gridsign_core::{
    bigraded_homology, build_complex, compare_signs, d_squared, euler_characteristic,
    BigradedComplex, Coefficients, Convention, EmptyRect, Error, GridDiagram, HomologyTable,
    Limits, Poly, RectCatalog, SignAssignment, Version,
};

const THREADS_VAR: &str = "GRIDSIGN_THREADS";

#[derive(Parser)]
#[command(name = "gridsign", version, about = "Sign assignments and grid homology over the integers")]
struct Cli {
    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,

    /// Largest grid size whose states may be enumerated.
    #[arg(long, global = true, value_name = "N")]
    max_n: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a grid file and report its link components.
    Validate { file: PathBuf },
    #[command(subcommand)]
    Signs(SignsCommand),
    #[command(subcommand)]
    Complex(ComplexCommand),
    /// Bigraded homology of the tilde complex.
    Homology {
        file: PathBuf,
        signs: PathBuf,
        #[arg(long, default_value = "z")]
        coefficients: Coefficients,
        #[command(flatten)]
        out: OutArg,
    },
    /// Graded Euler characteristic of the tilde homology.
    Euler { file: PathBuf, signs: PathBuf },
    /// Homology under the canonical true signs and their false twist.
    Compare { file: PathBuf },
}

#[derive(Subcommand)]
enum SignsCommand {
    /// Canonical true sign assignment.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check a sign file against the sign axioms.
    Verify {
        file: PathBuf,
        signs: PathBuf,
        #[arg(long, default_value = "true")]
        convention: Convention,
    },
    /// Multiply by the permutation sign of each start state.
    Twist {
        signs: PathBuf,
        #[arg(long)]
        grid: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Gauge function relating two sign assignments.
    GaugeDiff {
        file: PathBuf,
        s1: PathBuf,
        s2: PathBuf,
    },
    /// Number of true sign assignments.
    Count { file: PathBuf },
}

#[derive(Subcommand)]
enum ComplexCommand {
    /// Build the complex and check that the differential squares to zero.
    Check {
        file: PathBuf,
        signs: PathBuf,
        #[arg(long, default_value = "full")]
        version: Version,
        /// Include every generator and differential entry.
        #[arg(long)]
        dump: bool,
    },
}

#[derive(Args)]
struct OutArg {
    /// Write the document here instead of stdout.
    #[arg(long, value_name = "F")]
    out: Option<PathBuf>,
}

struct Outcome {
    code: u8,
    doc: Value,
    summary: String,
}

impl Outcome {
    fn ok(doc: Value, summary: impl Into<String>) -> Self {
        Outcome {
            code: 0,
            doc,
            summary: summary.into(),
        }
    }
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn error_kind(e: &Error) -> (&'static str, u8) {
    match e {
        Error::MalformedInput(_) => ("malformed_input", 1),
        Error::NotPermutation { .. } => ("not_permutation", 1),
        Error::MarkingCollision { .. } => ("marking_collision", 1),
        Error::BoundExceeded { .. } => ("bound_exceeded", 1),
        Error::MissingRectangle(_) => ("missing_rectangle", 1),
        Error::DuplicateRectangle(_) => ("duplicate_rectangle", 1),
        Error::UnknownRectangle(_) => ("unknown_rectangle", 1),
        Error::SizeMismatch { .. } => ("size_mismatch", 1),
        Error::ConventionMismatch { .. } => ("convention_mismatch", 1),
        Error::NotTilde => ("not_tilde", 1),
        Error::StateMismatch => ("state_mismatch", 1),
        Error::NotGaugeEquivalent(_) => ("not_gauge_equivalent", 2),
        Error::AxiomsViolated { .. } => ("axioms_violated", 2),
        Error::DisconnectedStates { .. } => ("disconnected_states", 3),
        Error::AnomalousClass { .. } => ("anomalous_class", 3),
        Error::Inconsistent => ("inconsistent", 3),
        Error::Overflow(_) => ("overflow", 3),
        Error::Internal(_) => ("internal", 3),
    }
}

fn failure_outcome(f: Failure) -> Outcome {
    let (kind, code, message) = match f {
        Failure::Core(e) => {
            let (kind, code) = error_kind(&e);
            (kind, code, e.to_string())
        }
        Failure::Io(path, e) => ("io", 1, format!("{}: {e}", path.display())),
        Failure::Usage(msg) => ("usage", 1, msg),
    };
    Outcome {
        code,
        doc: json!({ "error": { "kind": kind, "message": message } }),
        summary: format!("error: {message}"),
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report types always serialize")
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write(path: &Path, doc: &Value) -> CliResult<()> {
    fs::write(path, render(doc)).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

struct Ctx {
    limits: Limits,
}

impl Ctx {
    /// The grid and the raw JSON it was parsed from.
    fn grid(&self, path: &Path) -> CliResult<(GridDiagram, Value)> {
        let text = read(path)?;
        let d = gridsign_core::parse_grid(&text)?;
        let raw = serde_json::from_str(&text).map_err(|e| Error::MalformedInput(e.to_string()))?;
        Ok((d, raw))
    }

    fn catalog(&self, n: usize) -> CliResult<Arc<RectCatalog>> {
        Ok(Arc::new(RectCatalog::new(n, &self.limits)?))
    }

    fn signs(&self, path: &Path, catalog: &Arc<RectCatalog>) -> CliResult<SignAssignment> {
        let file = SignFile::parse(&read(path)?)?;
        Ok(file.to_assignment(catalog)?)
    }
}

fn emit_signs(s: &SignAssignment, out: &OutArg, summary: String) -> CliResult<Outcome> {
    let doc = to_value(SignFile::from_assignment(s));
    match &out.out {
        Some(path) => {
            write(path, &doc)?;
            Ok(Outcome::ok(
                json!({ "out": path.display().to_string(), "rects": s.values().len() }),
                summary,
            ))
        }
        None => Ok(Outcome::ok(doc, summary)),
    }
}

fn rect_json(r: &EmptyRect) -> Value {
    json!({
        "state": r.start.one_line(),
        "sw": [r.sw.0, r.sw.1],
        "w": r.w,
        "h": r.h,
    })
}

fn report_json(report: &VerificationReport) -> Value {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            let (kind, index) = match v.kind {
                ConstraintKind::Square => ("square", None),
                ConstraintKind::Vertical(c) => ("vertical", Some(c)),
                ConstraintKind::Horizontal(r) => ("horizontal", Some(r)),
            };
            json!({
                "kind": kind,
                "index": index,
                "start": v.start.one_line(),
                "end": v.end.one_line(),
                "rects": v.rects.iter().map(rect_json).collect::<Vec<_>>(),
                "product": v.product.to_i64(),
                "expected": v.expected.to_i64(),
            })
        })
        .collect();
    json!({
        "convention": report.convention,
        "checked": report.checked,
        "passed": report.passed(),
        "violations": violations,
    })
}

fn poly_json(p: &Poly) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|(m, c)| json!({ "coef": c, "u_exps": m.u, "v_exps": m.v }))
            .collect(),
    )
}

fn table_json(t: &HomologyTable) -> Value {
    to_value(&t.entries)
}

fn euler_json(t: &HomologyTable) -> Value {
    to_value(euler_characteristic(t).to_key_map())
}

fn check_axioms(s: &SignAssignment) -> CliResult<()> {
    let report = verify_axioms(s, s.convention())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Error::AxiomsViolated {
            convention: s.convention(),
            violations: report.violations.len(),
        }
        .into())
    }
}

fn tilde_homology(
    ctx: &Ctx,
    file: &Path,
    signs: &Path,
    coefficients: Coefficients,
) -> CliResult<(Value, SignAssignment, HomologyTable)> {
    let (d, raw) = ctx.grid(file)?;
    let s = ctx.signs(signs, &ctx.catalog(d.n())?)?;
    check_axioms(&s)?;
    let c = build_complex(&d, &s, Version::Tilde, &ctx.limits)?;
    let table = bigraded_homology(&c, coefficients)?;
    Ok((raw, s, table))
}

fn complex_check(c: &BigradedComplex, dump: bool) -> Outcome {
    let nonzero = d_squared(c);
    let inhomogeneous = c.inhomogeneous_entries();
    let state = |i: usize| c.generators[i].state.one_line();
    let mut doc = json!({
        "version": c.version,
        "generators": c.len(),
        "entries": c.nonzero_entries(),
        "d_squared_zero": nonzero.is_empty(),
        "d_squared": nonzero
            .iter()
            .map(|(x, z, p)| json!({ "source": state(*x), "target": state(*z), "terms": poly_json(p) }))
            .collect::<Vec<_>>(),
        "inhomogeneous": inhomogeneous
            .iter()
            .map(|&(x, y)| json!({ "source": state(x), "target": state(y) }))
            .collect::<Vec<_>>(),
    });
    if dump {
        doc["complex"] = to_value(c.dump());
    }
    let passed = nonzero.is_empty() && inhomogeneous.is_empty();
    Outcome {
        code: if passed { 0 } else { 2 },
        doc,
        summary: if passed {
            format!("∂² = 0 on {} generators", c.len())
        } else {
            format!(
                "∂² has {} nonzero entries, {} inhomogeneous entries",
                nonzero.len(),
                inhomogeneous.len()
            )
        },
    }
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let mut limits = Limits::default();
    if let Some(n) = cli.max_n {
        limits.max_n = n;
        limits.max_full_n = limits.max_full_n.max(n);
    }
    let ctx = Ctx { limits };

    match cli.command {
        Command::Validate { file } => {
            let (d, _) = ctx.grid(&file)?;
            let (m, iota) = gridsign_core::link_components(&d);
            Ok(Outcome::ok(
                json!({
                    "valid": true,
                    "n": d.n(),
                    "components": m,
                    "x_component": iota.iter().map(|c| c + 1).collect::<Vec<_>>(),
                }),
                format!("valid {n}x{n} grid, {m} component(s)", n = d.n()),
            ))
        }
        Command::Signs(SignsCommand::Solve { file, out }) => {
            let (d, _) = ctx.grid(&file)?;
            let s = solve_signs(&ctx.catalog(d.n())?)?;
            let summary = format!("solved {} rectangle signs", s.values().len());
            emit_signs(&s, &out, summary)
        }
        Command::Signs(SignsCommand::Verify {
            file,
            signs,
            convention,
        }) => {
            let (d, _) = ctx.grid(&file)?;
            let s = ctx.signs(&signs, &ctx.catalog(d.n())?)?;
            let report = verify_axioms(&s, convention)?;
            let summary = format!(
                "{} of {} classes violate the {convention} axioms",
                report.violations.len(),
                report.checked
            );
            Ok(Outcome {
                code: if report.passed() { 0 } else { 2 },
                doc: report_json(&report),
                summary,
            })
        }
        Command::Signs(SignsCommand::Twist { signs, grid, out }) => {
            let (d, _) = ctx.grid(&grid)?;
            let s = ctx.signs(&signs, &ctx.catalog(d.n())?)?;
            let t = twist(&s);
            let summary = format!("twisted {} signs to {}", t.values().len(), t.convention());
            emit_signs(&t, &out, summary)
        }
        Command::Signs(SignsCommand::GaugeDiff { file, s1, s2 }) => {
            let (d, _) = ctx.grid(&file)?;
            let cat = ctx.catalog(d.n())?;
            let a = ctx.signs(&s1, &cat)?;
            let b = ctx.signs(&s2, &cat)?;
            let f = gauge_difference(&a, &b)?.normalized();
            let gauge: Vec<Value> = cat
                .states()
                .iter()
                .zip(f.values())
                .map(|(x, v)| json!({ "state": x.one_line(), "sign": v.to_i64() }))
                .collect();
            let flips = f.values().iter().filter(|v| v.to_i64() < 0).count();
            Ok(Outcome::ok(
                json!({ "equivalent": true, "gauge": gauge }),
                format!("gauge equivalent; {flips} state(s) flipped"),
            ))
        }
        Command::Signs(SignsCommand::Count { file }) => {
            let (d, _) = ctx.grid(&file)?;
            let count = count_solutions(&*ctx.catalog(d.n())?)?;
            Ok(Outcome::ok(
                json!({ "solutions": count.solutions().to_string() }),
                format!("2^{} true sign assignments", count.kernel_dim()),
            ))
        }
        Command::Complex(ComplexCommand::Check {
            file,
            signs,
            version,
            dump,
        }) => {
            let (d, _) = ctx.grid(&file)?;
            let s = ctx.signs(&signs, &ctx.catalog(d.n())?)?;
            let c = build_complex(&d, &s, version, &ctx.limits)?;
            Ok(complex_check(&c, dump))
        }
        Command::Homology {
            file,
            signs,
            coefficients,
            out,
        } => {
            let (raw, s, table) = tilde_homology(&ctx, &file, &signs, coefficients)?;
            let doc = json!({
                "grid": raw,
                "convention": s.convention(),
                "coefficients": coefficients,
                "entries": table_json(&table),
                "euler": euler_json(&table),
            });
            let summary = format!(
                "total rank {}{}",
                table.total_free_rank(),
                if table.has_torsion() { ", with torsion" } else { "" }
            );
            match out.out {
                Some(path) => {
                    write(&path, &doc)?;
                    Ok(Outcome::ok(
                        json!({ "out": path.display().to_string(), "entries": table.entries.len() }),
                        summary,
                    ))
                }
                None => Ok(Outcome::ok(doc, summary)),
            }
        }
        Command::Euler { file, signs } => {
            let (_, _, table) = tilde_homology(&ctx, &file, &signs, Coefficients::Z)?;
            let chi = euler_characteristic(&table);
            Ok(Outcome::ok(
                json!({ "euler": to_value(chi.to_key_map()), "polynomial": chi.to_string() }),
                chi.to_string(),
            ))
        }
        Command::Compare { file } => {
            let (d, raw) = ctx.grid(&file)?;
            let s = solve_signs(&ctx.catalog(d.n())?)?;
            let report = compare_signs(&d, &s, &ctx.limits)?;
            let summary = if report.agree() {
                "true and false homology agree in every bigrading".to_string()
            } else {
                format!("{} bigrading(s) differ", report.discrepancies.len())
            };
            Ok(Outcome::ok(
                json!({
                    "grid": raw,
                    "true": table_json(&report.true_table),
                    "false": table_json(&report.false_table),
                    "z2": table_json(&report.z2_table),
                    "discrepancies": report
                        .discrepancies
                        .iter()
                        .map(|&(m, a2)| json!({ "M": m, "A2": a2 }))
                        .collect::<Vec<_>>(),
                    "agree": report.agree(),
                    "universal_coefficients": report.universal_coefficients,
                    "euler": euler_json(&report.true_table),
                }),
                summary,
            ))
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = match raw.trim().parse() {
        Ok(t) if t > 0 => t,
        _ => {
            return Err(Failure::Usage(format!(
                "{THREADS_VAR} must be a positive integer, got {raw:?}"
            )))
        }
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or_default();
            let message = first.trim_start_matches("error: ").to_string();
            let outcome = failure_outcome(Failure::Usage(message));
            print!("{}", render(&outcome.doc));
            eprint!("{e}");
            return ExitCode::from(outcome.code);
        }
    };
    let quiet = cli.quiet;
    let outcome = match configure_threads().and_then(|()| run(cli)) {
        Ok(o) => o,
        Err(f) => failure_outcome(f),
    };
    print!("{}", render(&outcome.doc));
    if !quiet || outcome.code != 0 {
        eprintln!("{}", outcome.summary);
    }
    ExitCode::from(outcome.code)
}
