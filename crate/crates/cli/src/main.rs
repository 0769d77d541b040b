//! `hlgf`: build complexes, cut off continuum connections, and compute
//! charges and consistency reports of homotopy lattice gauge fields.
//!
//! Results go to stdout as JSON, diagnostics to stderr. Exit codes: 0 on
//! success, 1 for usage errors, 2 when validation fails (the report is
//! printed on stdout), 3 when the cutoff's lift guard fires.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use hlgf::charge::{charge, classify_bundle, transition_winding, ChargeError, Route};
use hlgf::complex::{build_builtin, ComplexError, SkeletalComplex, BUILTIN_NAMES};
use hlgf::continuum::{
    cutoff, oracle_from_spec, CutoffError, CutoffOptions, Trivialization, DEFAULT_RESOLUTION,
    LIFT_GUARD,
};
use hlgf::field::{random_field, seeded_gauge, Hlgf};
use hlgf::format::{
    charge_to_json, classification_to_json, complex_from_json, complex_from_json_unchecked,
    complex_to_json, field_from_json, field_parts_from_json, field_to_json, gauge_from_json,
    gauge_to_json, report_to_json, value_to_json, FormatError,
};
use hlgf::gauge_group::Backend;
use hlgf::globes::parse_word;

#[derive(Parser)]
#[command(name = "hlgf", version, about = "Homotopy lattice gauge fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a built-in complex.
    Build {
        /// One of s2_five_vertex, s2_tetra, s3_pentachoron.
        name: String,
    },
    /// Cut off a continuum connection to a field on a built-in complex.
    Cutoff {
        /// round-sphere, monopole:<n> or trivial.
        #[arg(short, long)]
        oracle: String,
        /// Built-in name or complex file.
        #[arg(short, long)]
        complex: String,
        #[arg(short, long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        /// Group for the trivial oracle (the others are U1).
        #[arg(short, long, default_value = "U1")]
        group: String,
        #[arg(long, value_enum, default_value_t = Frames::Tree)]
        trivialization: Frames,
        /// Largest accepted transport jump between homotopy samples, in radians.
        #[arg(long, default_value_t = LIFT_GUARD)]
        lift_guard: f64,
    },
    /// Topological charge of a field on a closed oriented surface.
    Charge {
        field: PathBuf,
        #[arg(long, default_value = "covering", value_parser = parse_route)]
        route: Route,
        /// Equator for the transition route, e.g. 1,2,3.
        #[arg(long, value_delimiter = ',')]
        equator: Option<Vec<u32>>,
        /// Print the bundle classification instead (also on 3D bases).
        #[arg(long)]
        bundle: bool,
    },
    /// Consistency report of a field, or validation report of a complex file.
    Check { file: PathBuf },
    /// Apply a gauge transformation.
    Gauge {
        field: PathBuf,
        #[arg(short, long)]
        assignment: PathBuf,
    },
    /// Evaluate a globe expression under a field.
    Eval {
        field: PathBuf,
        #[arg(short, long)]
        expr: String,
    },
    /// Random field (or random gauge assignment) from a seed.
    Randomize {
        #[arg(short, long)]
        seed: u64,
        #[arg(short, long)]
        complex: String,
        #[arg(short, long, default_value = "U1")]
        group: String,
        /// Emit a gauge assignment instead of a field.
        #[arg(long)]
        gauge: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Frames {
    Tree,
    Native,
}

fn parse_route(s: &str) -> Result<Route, String> {
    s.parse()
}

/// A failed command: exit code, optional JSON report for stdout, message for stderr.
struct Failure {
    code: u8,
    report: Option<Json>,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            report: None,
            message: message.into(),
        }
    }

    fn validation(message: impl Into<String>, report: Json) -> Self {
        Failure {
            code: 2,
            report: Some(report),
            message: message.into(),
        }
    }
}

fn error_json(kind: &str, message: &str) -> Json {
    json!({"error": kind, "message": message})
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        let msg = e.to_string();
        match e {
            FormatError::Complex(ComplexError::Invalid { report, .. }) => Failure::validation(
                &msg,
                json!({"error": "complex", "message": msg, "report": report}),
            ),
            FormatError::Complex(ComplexError::UnknownBuiltin(_)) => Failure::usage(msg),
            FormatError::Field(_) => Failure::validation(&msg, error_json("field", &msg)),
            _ => Failure::validation(&msg, error_json("format", &msg)),
        }
    }
}

impl From<CutoffError> for Failure {
    fn from(e: CutoffError) -> Self {
        let msg = e.to_string();
        match e {
            CutoffError::LiftAmbiguity {
                simplex,
                jump,
                resolution,
            } => Failure {
                code: 3,
                report: Some(json!({
                    "error": "lift_ambiguity",
                    "message": msg,
                    "simplex": simplex.key(),
                    "jump": jump,
                    "resolution": resolution,
                })),
                message: format!("{msg}; try a larger --resolution"),
            },
            CutoffError::Resolution(_) | CutoffError::Guard(_) => Failure::usage(msg),
            _ => Failure::validation(&msg, error_json("cutoff", &msg)),
        }
    }
}

impl From<ChargeError> for Failure {
    fn from(e: ChargeError) -> Self {
        let msg = e.to_string();
        match &e {
            ChargeError::Refused(report) => Failure::validation(
                "gluing data is inconsistent",
                json!({"error": "inconsistent", "report": report_to_json(report)}),
            ),
            _ => Failure::validation(&msg, error_json("charge", &msg)),
        }
    }
}

fn read_json(path: &Path) -> Result<Json, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        Failure::validation(&msg, error_json("json", &msg))
    })
}

fn read_field(path: &Path) -> Result<Hlgf, Failure> {
    Ok(field_from_json(&read_json(path)?)?)
}

fn complex_arg(arg: &str) -> Result<SkeletalComplex, Failure> {
    if BUILTIN_NAMES.contains(&arg) {
        return Ok(build_builtin(arg).expect("listed built-in"));
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(Failure::usage(format!(
            "`{arg}` is neither a built-in complex ({}) nor a file",
            BUILTIN_NAMES.join(", ")
        )));
    }
    Ok(complex_from_json(&read_json(path)?)?)
}

fn backend_arg(s: &str) -> Result<Backend, Failure> {
    s.parse().map_err(|e: hlgf::gauge_group::GroupError| Failure::usage(e.to_string()))
}

fn run(command: Command) -> Result<Json, Failure> {
    match command {
        Command::Build { name } => {
            let c = build_builtin(&name).map_err(|e| Failure::usage(e.to_string()))?;
            Ok(complex_to_json(&c))
        }
        Command::Cutoff {
            oracle,
            complex,
            resolution,
            group,
            trivialization,
            lift_guard,
        } => {
            let c = complex_arg(&complex)?;
            let backend = backend_arg(&group)?;
            let ambient = if c.dim() == 3 { 4 } else { 3 };
            let o = oracle_from_spec(&oracle, backend, ambient)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let opts = CutoffOptions {
                resolution,
                trivialization: match trivialization {
                    Frames::Tree => Trivialization::Tree,
                    Frames::Native => Trivialization::Native,
                },
                lift_guard,
            };
            Ok(field_to_json(&cutoff(&c, o.as_ref(), &opts)?))
        }
        Command::Charge {
            field,
            route,
            equator,
            bundle,
        } => {
            let f = read_field(&field)?;
            if bundle {
                return Ok(classification_to_json(&classify_bundle(&f)?));
            }
            let q = match (route, equator) {
                (Route::TransitionWinding, Some(eq)) => transition_winding(&f, Some(&eq))?,
                (_, Some(_)) => return Err(Failure::usage("--equator only applies to --route transition")),
                (r, None) => charge(&f, r)?,
            };
            Ok(charge_to_json(&q))
        }
        Command::Check { file } => {
            let v = read_json(&file)?;
            if v.get("group").is_none() {
                let c = complex_from_json_unchecked(&v)?;
                let report = c.validate();
                let out = json!({"valid": report.is_empty(), "report": report});
                return if report.is_empty() {
                    Ok(out)
                } else {
                    Err(Failure::validation(format!("complex is invalid: {report}"), out))
                };
            }
            let f = field_parts_from_json(&v)?.build_unchecked();
            let report = f.check_consistency();
            let out = report_to_json(&report);
            if report.is_empty() {
                Ok(out)
            } else {
                Err(Failure::validation(format!("field is inconsistent:\n{report}"), out))
            }
        }
        Command::Gauge { field, assignment } => {
            let f = read_field(&field)?;
            let (backend, g) = gauge_from_json(&read_json(&assignment)?)?;
            if backend != f.backend() {
                let msg = format!("assignment is {backend}, field is {}", f.backend());
                return Err(Failure::validation(&msg, error_json("gauge", &msg)));
            }
            let out = f.gauge_transform(&g).map_err(|e| {
                let msg = e.to_string();
                Failure::validation(&msg, error_json("gauge", &msg))
            })?;
            Ok(field_to_json(&out))
        }
        Command::Eval { field, expr } => {
            let f = read_field(&field)?;
            let w = parse_word(&expr, f.complex()).map_err(|e| {
                let msg = e.to_string();
                Failure::validation(
                    &msg,
                    json!({"error": "parse", "message": msg, "offset": e.offset}),
                )
            })?;
            let v = f.evaluate(&w).map_err(|e| {
                let msg = e.to_string();
                Failure::validation(&msg, error_json("eval", &msg))
            })?;
            let mut out = value_to_json(&v);
            out["word"] = json!(w.to_string());
            out["dim"] = json!(w.dim());
            Ok(out)
        }
        Command::Randomize {
            seed,
            complex,
            group,
            gauge,
        } => {
            let c = complex_arg(&complex)?;
            let backend = backend_arg(&group)?;
            if gauge {
                Ok(gauge_to_json(backend, &seeded_gauge(&c, backend, seed)))
            } else {
                Ok(field_to_json(&random_field(&c, backend, seed)))
            }
        }
    }
}

/// Pretty JSON on stdout; a closed pipe downstream is not an error.
fn emit(v: &Json) {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(report) = f.report {
                emit(&report);
            }
            eprintln!("hlgf: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
