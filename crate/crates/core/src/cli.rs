//! The `loopagree` command line.
//!
//! Every command produces a [`Report`] rendered as text or JSON. Task
//! arguments are JSON files or `@name` for a built-in task.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;

use crate::complex::{Complex, ComplexError, SimplicialMap};
use crate::group::{
    decide_implements, is_abelian_certified, task_abelianization, AbelianHom, GroupError, IntMatrix,
    PointedAbelianSignature, Verdict,
};
use crate::task::{
    catalog, check_implements, check_joint_implements, compose, DecisionMap, DecisionMapJson,
    LoopTask, TaskError, TaskJson, Verification, CATALOG_NAMES,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "loopagree", version, about = "Loop agreement tasks and their signatures")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the abelianized signature of a task.
    Signature { task: String },
    /// Compose two tasks.
    Compose {
        first: String,
        second: String,
        /// Where to write the composed task.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether the sources, run together, implement the target.
    Check {
        #[arg(required = true)]
        sources: Vec<String>,
        #[arg(long)]
        target: String,
    },
    /// Check a decision map: `SRC TGT MAP`, or `TGT MAP` with `--joint`.
    Verify {
        #[arg(num_args = 2..=3, required = true, value_name = "TASK|MAP")]
        args: Vec<String>,
        /// Run the map on the joint outputs of two tasks.
        #[arg(long, num_args = 2, value_names = ["T1", "T2"])]
        joint: Option<Vec<String>>,
    },
    /// List the built-in tasks, or print one.
    Catalog { name: Option<String> },
    /// Barycentric subdivision of a complex.
    Bary {
        complex: String,
        #[arg(short, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
    #[error(transparent)]
    Task(#[from] TaskError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A command outcome with both renderings.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub result: Value,
    pub text: String,
    pub exit_code: i32,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let v = json!({
                    "command": self.command,
                    "exit_code": self.exit_code,
                    "result": self.result,
                });
                let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Parses `args` (program name first), runs the command and writes the
/// report. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            let _ = out.write_all(report.render(cli.format).as_bytes());
            report.exit_code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Signature { task } => cmd_signature(task),
        Command::Compose { first, second, output } => cmd_compose(first, second, output.as_deref()),
        Command::Check { sources, target } => cmd_check(sources, target),
        Command::Verify { args, joint } => match (joint, args.as_slice()) {
            (None, [src, tgt, map]) => cmd_verify(src, tgt, map),
            (Some(j), [tgt, map]) => cmd_verify_joint(&j[0], &j[1], tgt, map),
            (None, _) => Err(CliError::Usage("verify expects SRC TGT MAP".into())),
            (Some(_), _) => Err(CliError::Usage("verify --joint T1 T2 expects TGT MAP".into())),
        },
        Command::Catalog { name } => cmd_catalog(name.as_deref()),
        Command::Bary { complex, n, output } => cmd_bary(complex, *n as usize, output.as_deref()),
    }
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.to_string(), message: e.to_string() })
}

fn parse<T: serde::de::DeserializeOwned>(path: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text)
        .map_err(|e| CliError::Parse { path: path.to_string(), message: e.to_string() })
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value).expect("artifacts serialize");
    s.push('\n');
    fs::write(path, s)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

/// Short names accepted after `@` besides the full catalog names.
const ALIASES: [(&str, &str); 3] =
    [("set", "set-agreement"), ("simplex", "simplex-agreement"), ("rp2", "projective-plane")];

/// A built-in task by name or alias; `a*b` composes.
pub fn named_task(expr: &str) -> Result<LoopTask, CliError> {
    let mut acc: Option<LoopTask> = None;
    for part in expr.split('*') {
        let name = ALIASES.iter().find(|(a, _)| *a == part).map_or(part, |(_, n)| *n);
        let t = catalog(name)?;
        acc = Some(match acc {
            None => t,
            Some(prev) => compose(&prev, &t),
        });
    }
    Ok(acc.expect("split yields at least one part"))
}

/// A task from `@name` or a JSON file. A file whose complex and loop are
/// exactly a built-in task's is treated as that task.
pub fn load_task(arg: &str) -> Result<LoopTask, CliError> {
    if let Some(expr) = arg.strip_prefix('@') {
        return named_task(expr);
    }
    let j: TaskJson = parse(arg, &read(arg)?)?;
    let t = LoopTask::try_from(j)?;
    for name in CATALOG_NAMES {
        let c = catalog(name)?;
        if c == t {
            return Ok(match t.name() {
                Some(n) => c.with_name(n),
                None => c,
            });
        }
    }
    Ok(t)
}

/// A complex from `@name` (the task's output), a complex file or a task
/// file.
pub fn load_complex(arg: &str) -> Result<Complex, CliError> {
    if arg.starts_with('@') {
        return Ok(load_task(arg)?.output().clone());
    }
    let text = read(arg)?;
    if let Ok(c) = serde_json::from_str::<Complex>(&text) {
        return Ok(c);
    }
    let j: TaskJson = parse(arg, &text)?;
    Ok(j.complex)
}

fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(i) => Value::from(i),
        None => Value::from(x.to_string()),
    }
}

fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints(m.row(i))).collect())
}

fn signature_json(s: &PointedAbelianSignature) -> Value {
    json!({
        "invariant_factors": ints(s.invariant_factors()),
        "factors": ints(s.finite_factors()),
        "free_rank": s.free_rank(),
        "element": ints(s.element()),
    })
}

fn hom_json(h: &AbelianHom) -> Value {
    json!({
        "source": signature_json(h.source()),
        "target": signature_json(h.target()),
        "matrix": matrix_json(h.matrix()),
    })
}

fn stats(c: &Complex) -> (usize, usize, usize) {
    (c.vertex_count(), c.len(), c.dimension().unwrap_or(0))
}

pub fn cmd_signature(task: &str) -> Result<Report, CliError> {
    let t = load_task(task)?;
    let (_, _, sig) = task_abelianization(&t)?;
    let reversed = sig.negated();
    let mut text = sig.report();
    text.push('\n');
    let _ = writeln!(text, "reversed element: {}", bracketed(reversed.element()));
    let mut result = signature_json(&sig);
    result["reversed_element"] = ints(reversed.element());
    result["task"] = Value::from(t.display_name());
    Ok(Report { command: format!("signature {task}"), result, text, exit_code: EXIT_OK })
}

fn bracketed(xs: &[BigInt]) -> String {
    let parts: Vec<String> = xs.iter().map(BigInt::to_string).collect();
    format!("[{}]", parts.join(","))
}

pub fn cmd_compose(first: &str, second: &str, output: Option<&Path>) -> Result<Report, CliError> {
    let t1 = load_task(first)?;
    let t2 = load_task(second)?;
    let tc = compose(&t1, &t2);
    let (v, s, d) = stats(tc.output());
    let loop_length = tc.triangle_loop().edge_count();
    let task_json = TaskJson::from(&tc);
    let mut text = String::new();
    let _ = writeln!(text, "name: {}", tc.display_name());
    let _ = writeln!(text, "vertices: {v}");
    let _ = writeln!(text, "simplexes: {s}");
    let _ = writeln!(text, "dimension: {d}");
    let _ = writeln!(text, "loop length: {loop_length}");
    let mut result = json!({
        "name": tc.display_name(),
        "vertices": v,
        "simplexes": s,
        "dimension": d,
        "loop_length": loop_length,
    });
    match output {
        Some(path) => {
            write_json(path, &task_json)?;
            let _ = writeln!(text, "written: {}", path.display());
            result["written"] = Value::from(path.display().to_string());
        }
        None => {
            result["task"] = serde_json::to_value(&task_json).expect("tasks serialize");
        }
    }
    let mut command = format!("compose {first} {second}");
    if let Some(p) = output {
        let _ = write!(command, " -o {}", p.display());
    }
    Ok(Report { command, result, text, exit_code: EXIT_OK })
}

pub fn cmd_check(sources: &[String], target: &str) -> Result<Report, CliError> {
    let srcs: Vec<LoopTask> = sources.iter().map(|s| load_task(s)).collect::<Result<_, _>>()?;
    let tgt = load_task(target)?;
    let verdict = decide_implements(&srcs, &tgt)?;
    let kind = verdict.kind();
    let mut text = format!("{kind}\n");
    let mut result = json!({ "verdict": kind.to_string() });
    match &verdict {
        Verdict::Implements { witness } => {
            write_hom(&mut text, witness);
            result["witness"] = hom_json(witness);
        }
        Verdict::NotImplements { obstruction } => {
            let _ = writeln!(text, "obstruction: {obstruction}");
            result["obstruction"] = Value::from(obstruction.to_string());
        }
        Verdict::Unknown { witness, uncertified } => {
            write_hom(&mut text, witness);
            let _ = writeln!(text, "not known to be abelian: {}", uncertified.join(", "));
            result["witness"] = hom_json(witness);
            result["uncertified"] = json!(uncertified);
        }
    }
    if verdict.witness().is_some() {
        let mut flags = Vec::new();
        for t in srcs.iter().chain(std::iter::once(&tgt)) {
            flags.push(json!({ "task": t.display_name(), "abelian": is_abelian_certified(t)? }));
        }
        result["certified"] = Value::Array(flags);
    }
    let code = match verdict {
        Verdict::Implements { .. } => EXIT_OK,
        Verdict::NotImplements { .. } => EXIT_NEGATIVE,
        Verdict::Unknown { .. } => EXIT_UNKNOWN,
    };
    Ok(Report {
        command: format!("check {} --target {target}", sources.join(" ")),
        result,
        text,
        exit_code: code,
    })
}

fn write_hom(text: &mut String, h: &AbelianHom) {
    let _ = writeln!(text, "source: {}", h.source());
    let _ = writeln!(text, "target: {}", h.target());
    let _ = writeln!(text, "witness: {}", h.matrix());
}

fn verification_report(command: String, outcome: Result<Verification, VerifyFailure>) -> Report {
    match outcome {
        Ok(Verification::Pass) => Report {
            command,
            result: json!({ "outcome": "PASS" }),
            text: "PASS\n".into(),
            exit_code: EXIT_OK,
        },
        Ok(Verification::Fail { input, simplex }) => Report {
            command,
            result: json!({
                "outcome": "FAIL",
                "input": input.to_string(),
                "simplex": simplex.to_string(),
            }),
            text: format!("FAIL\ninput: {input}\nsimplex: {simplex}\n"),
            exit_code: EXIT_NEGATIVE,
        },
        Err(VerifyFailure::NotSimplicial(simplex)) => Report {
            command,
            result: json!({ "outcome": "FAIL", "not_simplicial": simplex.to_string() }),
            text: format!("FAIL\nnot simplicial at: {simplex}\n"),
            exit_code: EXIT_NEGATIVE,
        },
    }
}

enum VerifyFailure {
    NotSimplicial(crate::complex::Simplex),
}

/// Splits a non-simplicial map off as a failed verification.
fn build_map(n: usize, map: SimplicialMap) -> Result<Result<DecisionMap, VerifyFailure>, CliError> {
    match DecisionMap::new(n, map) {
        Ok(d) => Ok(Ok(d)),
        Err(TaskError::Complex(ComplexError::NotSimplicial(s))) => Ok(Err(VerifyFailure::NotSimplicial(s))),
        Err(e) => Err(e.into()),
    }
}

fn load_map(path: &str, source: &Complex) -> Result<DecisionMapJson, CliError> {
    let j: DecisionMapJson = parse(path, &read(path)?)?;
    let expected = source.barycentric_n(j.n);
    if j.assignment.keys().any(|v| !expected.contains_vertex(v)) {
        return Err(TaskError::SourceMismatch.into());
    }
    Ok(j)
}

pub fn cmd_verify(src: &str, tgt: &str, map: &str) -> Result<Report, CliError> {
    let s = load_task(src)?;
    let t = load_task(tgt)?;
    let j = load_map(map, s.output())?;
    let source = s.output().barycentric_n(j.n);
    let outcome = match build_map(j.n, SimplicialMap::new(source, t.output().clone(), j.assignment))? {
        Ok(d) => Ok(check_implements(&s, &t, &d)?),
        Err(f) => Err(f),
    };
    Ok(verification_report(format!("verify {src} {tgt} {map}"), outcome))
}

pub fn cmd_verify_joint(t1: &str, t2: &str, tgt: &str, map: &str) -> Result<Report, CliError> {
    let a = load_task(t1)?;
    let b = load_task(t2)?;
    let t = load_task(tgt)?;
    let joint = Complex::product_skeleton(a.output(), b.output(), 2);
    let j = load_map(map, &joint)?;
    let source = joint.barycentric_n(j.n);
    let outcome = match build_map(j.n, SimplicialMap::new(source, t.output().clone(), j.assignment))? {
        Ok(d) => Ok(check_joint_implements(&a, &b, &t, &d)?),
        Err(f) => Err(f),
    };
    Ok(verification_report(format!("verify --joint {t1} {t2} {tgt} {map}"), outcome))
}

pub fn cmd_catalog(name: Option<&str>) -> Result<Report, CliError> {
    match name {
        None => {
            let mut text = String::new();
            for n in CATALOG_NAMES {
                let _ = writeln!(text, "{n}");
            }
            Ok(Report {
                command: "catalog".into(),
                result: json!({ "tasks": CATALOG_NAMES }),
                text,
                exit_code: EXIT_OK,
            })
        }
        Some(n) => {
            let t = named_task(n.strip_prefix('@').unwrap_or(n))?;
            let value = serde_json::to_value(TaskJson::from(&t)).expect("tasks serialize");
            let mut text = serde_json::to_string_pretty(&value).expect("json values serialize");
            text.push('\n');
            Ok(Report {
                command: format!("catalog {n}"),
                result: json!({ "task": value }),
                text,
                exit_code: EXIT_OK,
            })
        }
    }
}

pub fn cmd_bary(complex: &str, n: usize, output: Option<&Path>) -> Result<Report, CliError> {
    if n == 0 {
        return Err(CliError::Usage("-n must be at least 1".into()));
    }
    let c = load_complex(complex)?.barycentric_n(n);
    let (v, s, d) = stats(&c);
    let mut text = format!("vertices: {v}\nsimplexes: {s}\ndimension: {d}\n");
    let mut result = json!({ "vertices": v, "simplexes": s, "dimension": d });
    match output {
        Some(path) => {
            write_json(path, &c)?;
            let _ = writeln!(text, "written: {}", path.display());
            result["written"] = Value::from(path.display().to_string());
        }
        None => result["complex"] = serde_json::to_value(&c).expect("complexes serialize"),
    }
    let mut command = format!("bary {complex} -n {n}");
    if let Some(p) = output {
        let _ = write!(command, " -o {}", p.display());
    }
    Ok(Report { command, result, text, exit_code: EXIT_OK })
}
