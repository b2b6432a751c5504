//! Jobs, output documents and their re-verification.

use std::path::{Path, PathBuf};

use mpinv_core::homform::parabolic_table_text;
use mpinv_core::Error as CoreError;
use serde_json::{json, Map, Value};

use crate::commands::{self, parse_text, parse_value, Verification};
use crate::encoding::to_document_string;
use crate::error::CliError;
use crate::options::{Command, Flags, Options};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_VERIFICATION: u8 = 2;
pub const EXIT_NOT_MOORE_PENROSE: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    VerificationFailure,
    NotMoorePenroseOrbit,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => EXIT_PASS,
            Status::VerificationFailure => EXIT_VERIFICATION,
            Status::NotMoorePenroseOrbit => EXIT_NOT_MOORE_PENROSE,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::VerificationFailure => "verification-failure",
            Status::NotMoorePenroseOrbit => "not-moore-penrose-orbit",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Status::Pass, Status::VerificationFailure, Status::NotMoorePenroseOrbit]
            .into_iter()
            .find(|st| st.name() == s)
    }
}

/// A finished job: the exit status and the text written as output.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub document: String,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        self.status.exit_code()
    }
}

/// One invocation: a command, its input file and the raw flags.
#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub flags: Flags,
}

/// Errors caused by the input itself map to exit code 1; the rest are
/// failures of the computation and produce a document.
fn is_input_error(e: &CoreError) -> bool {
    use CoreError::*;
    matches!(
        e,
        ShapeMismatch(_)
            | NonFinite
            | InvalidTolerance(_)
            | InvalidGrading(_)
            | NotInAlgebra { .. }
            | NotHomogeneous
            | NotShortGrading { .. }
            | NotNilpotent { .. }
            | ZeroElement
            | UnsupportedBlock { .. }
            | SymmetryViolation { .. }
            | DegenerateForm
            | WrongComponent
    )
}

fn document(command: Command, status: Status, opts: &Options, input: Value, body: Map<String, Value>) -> String {
    let mut doc = Map::new();
    doc.insert("command".into(), json!(command.name()));
    doc.insert("status".into(), json!(status.name()));
    doc.insert("options".into(), serde_json::to_value(opts).expect("options serialize"));
    doc.insert("input".into(), input);
    doc.extend(body);
    to_document_string(&Value::Object(doc))
}

/// Runs `command` on input text with resolved options.
pub fn run(command: Command, input: Option<&str>, opts: &Options) -> Result<Outcome, CliError> {
    if command == Command::ReportTable {
        return Ok(Outcome {
            status: Status::Pass,
            document: parabolic_table_text(),
        });
    }
    let src = input.ok_or_else(|| CliError::Option(format!("{command} needs an input file")))?;
    let solved = match commands::solve(command, src, opts) {
        Ok(s) => s,
        Err(CliError::Core(e)) if !is_input_error(&e) => {
            let input_value: Value = parse_text(src)?;
            let mut body = Map::new();
            body.insert("error".into(), json!(e.to_string()));
            let status = Status::VerificationFailure;
            return Ok(Outcome {
                status,
                document: document(command, status, opts, input_value, body),
            });
        }
        Err(e) => return Err(e),
    };
    let input_value: Value = parse_text(src)?;
    let verification = commands::verify(command, &input_value, &solved.result, opts)?;
    let status = if solved.not_mp {
        Status::NotMoorePenroseOrbit
    } else if verification.passed {
        Status::Pass
    } else {
        Status::VerificationFailure
    };
    let mut body = Map::new();
    body.insert("result".into(), solved.result);
    body.insert("verification".into(), verification.to_value());
    Ok(Outcome {
        status,
        document: document(command, status, opts, input_value, body),
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Validates the flags against the command, reads the input file and runs.
pub fn run_job(job: &JobSpec) -> Result<Outcome, CliError> {
    let opts = Options::resolve(job.command, &job.flags)?;
    let text = match (&job.input, job.command.needs_input()) {
        (Some(p), true) => Some(read(p)?),
        (None, true) => return Err(CliError::Option(format!("{} needs an input file", job.command))),
        (Some(_), false) => return Err(CliError::Option(format!("{} takes no input file", job.command))),
        (None, false) => None,
    };
    run(job.command, text.as_deref(), &opts)
}

/// A parsed output document.
#[derive(Debug, Clone)]
pub struct OutputDocument {
    pub command: Command,
    pub status: Status,
    pub options: Options,
    pub input: Value,
    pub result: Option<Value>,
    pub verification: Option<Value>,
    pub error: Option<String>,
}

pub fn parse_document(text: &str) -> Result<OutputDocument, CliError> {
    let v: Value = parse_text(text)?;
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::input("document", "expected an object"))?;
    let get_str = |k: &str| {
        obj.get(k)
            .and_then(Value::as_str)
            .ok_or_else(|| CliError::input(k, "expected a string"))
    };
    let command: Command = get_str("command")?.parse()?;
    let status = Status::parse(get_str("status")?).ok_or_else(|| CliError::input("status", "unknown status"))?;
    let options: Options = parse_value(obj.get("options").unwrap_or(&Value::Null))?;
    options.tolerance()?;
    let input = obj
        .get("input")
        .cloned()
        .ok_or_else(|| CliError::input("input", "missing"))?;
    for key in obj.keys() {
        if ![
            "command",
            "status",
            "options",
            "input",
            "result",
            "verification",
            "error",
        ]
        .contains(&key.as_str())
        {
            return Err(CliError::input(key, "unknown document field"));
        }
    }
    Ok(OutputDocument {
        command,
        status,
        options,
        input,
        result: obj.get("result").cloned(),
        verification: obj.get("verification").cloned(),
        error: obj.get("error").and_then(Value::as_str).map(str::to_string),
    })
}

/// Outcome of re-reading an output document.
#[derive(Debug, Clone)]
pub struct Reverification {
    pub command: Command,
    /// Verification recomputed from the stored input and result.
    pub recomputed: Option<Verification>,
    /// Largest absolute difference between stored and recomputed numbers.
    pub max_drift: f64,
    /// Stored and recomputed verification agree bit for bit.
    pub identical: bool,
    /// Re-running the job reproduces the document byte for byte.
    pub rerun_identical: bool,
}

fn collect_numbers(v: &Value, prefix: &str, out: &mut Vec<(String, Option<f64>)>) {
    match v {
        Value::Object(m) => {
            for (k, item) in m {
                collect_numbers(item, &format!("{prefix}.{k}"), out);
            }
        }
        Value::Array(items) => {
            for (k, item) in items.iter().enumerate() {
                collect_numbers(item, &format!("{prefix}[{k}]"), out);
            }
        }
        Value::Number(n) => out.push((prefix.to_string(), n.as_f64())),
        Value::Null => out.push((prefix.to_string(), None)),
        _ => {}
    }
}

/// Largest numeric difference between two documents of the same layout;
/// infinite when the layouts or any non-numeric fields differ.
pub fn numeric_drift(a: &Value, b: &Value) -> f64 {
    fn skeleton(v: &Value) -> Value {
        match v {
            Value::Object(m) => Value::Object(m.iter().map(|(k, x)| (k.clone(), skeleton(x))).collect()),
            Value::Array(items) => Value::Array(items.iter().map(skeleton).collect()),
            Value::Number(_) => Value::Null,
            other => other.clone(),
        }
    }
    if skeleton(a) != skeleton(b) {
        return f64::INFINITY;
    }
    let (mut xa, mut xb) = (Vec::new(), Vec::new());
    collect_numbers(a, "", &mut xa);
    collect_numbers(b, "", &mut xb);
    xa.iter()
        .zip(&xb)
        .map(|((_, x), (_, y))| match (x, y) {
            (Some(x), Some(y)) => (x - y).abs(),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

/// Re-parses an output document, re-verifies its stored result and re-runs the job.
pub fn reverify(text: &str) -> Result<Reverification, CliError> {
    if text == parabolic_table_text() {
        return Ok(Reverification {
            command: Command::ReportTable,
            recomputed: None,
            max_drift: 0.0,
            identical: true,
            rerun_identical: true,
        });
    }
    let doc = parse_document(text)?;
    let src = serde_json::to_string(&doc.input).expect("value serializes");
    let rerun = run(doc.command, Some(&src), &doc.options)?;
    let rerun_identical = rerun.document == text;
    let (recomputed, max_drift, identical) = match (&doc.result, &doc.verification) {
        (Some(result), Some(stored)) => {
            let ver = commands::verify(doc.command, &doc.input, result, &doc.options)?;
            let fresh = ver.to_value();
            let drift = numeric_drift(stored, &fresh);
            (Some(ver), drift, fresh == *stored)
        }
        _ => (None, 0.0, doc.error.is_some() && rerun_identical),
    };
    Ok(Reverification {
        command: doc.command,
        recomputed,
        max_drift,
        identical,
        rerun_identical,
    })
}
