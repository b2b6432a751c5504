use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand};
use mpinv_cli::{
    parse_blocks, reverify, run_job, AlgebraKind, CliError, Command, Flags, FormKind, JobSpec, EXIT_INPUT, EXIT_PASS,
    EXIT_VERIFICATION,
};

#[derive(Debug, Parser)]
#[command(
    name = "mpinv",
    version,
    about = "Generalized Moore-Penrose inverses with verification reports"
)]
struct Cli {
    #[command(subcommand)]
    action: Action,
}

#[derive(Debug, Subcommand)]
enum Action {
    /// Run a command on one or more input documents.
    Run(RunArgs),
    /// Re-parse output documents and re-verify their stored results.
    Verify {
        #[arg(required = true)]
        documents: Vec<PathBuf>,
    },
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    #[arg(value_enum)]
    command: Command,

    /// Input documents (none for report-table).
    inputs: Vec<PathBuf>,

    /// Relative rank cutoff [default: 1e-10].
    #[arg(long)]
    tol_rank: Option<f64>,

    /// Residual tolerance relative to the problem scale [default: 1e-9].
    #[arg(long)]
    tol_residual: Option<f64>,

    /// Seed for auxiliary randomized checks [default: 0].
    #[arg(long)]
    seed: Option<u64>,

    /// Algebra for graded commands [default: sl].
    #[arg(long, value_enum)]
    algebra: Option<AlgebraKind>,

    /// Block sizes d1,d2,... of the grading.
    #[arg(long)]
    blocks: Option<String>,

    /// Symmetry of the bilinear form [default: symmetric].
    #[arg(long, value_enum)]
    form: Option<FormKind>,

    /// Run independent inputs on N threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,

    /// Output file for a single input, or directory for several.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn batch_target(input: &Path, dir: &Path) -> PathBuf {
    let stem = input
        .file_stem()
        .map_or_else(|| "out".into(), |s| s.to_string_lossy().into_owned());
    dir.join(format!("{stem}.out.json"))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn run_one(job: &JobSpec, target: Option<&Path>) -> u8 {
    let label = job
        .input
        .as_ref()
        .map_or_else(|| job.command.to_string(), |p| p.display().to_string());
    match run_job(job).and_then(|o| write_output(target, &o.document).map(|_| o.exit_code())) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {label}: {e}");
            EXIT_INPUT
        }
    }
}

fn run_command(args: RunArgs) -> u8 {
    let blocks = match args.blocks.as_deref().map(parse_blocks).transpose() {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let flags = Flags {
        tol_rank: args.tol_rank,
        tol_residual: args.tol_residual,
        seed: args.seed,
        algebra: args.algebra,
        blocks,
        form: args.form,
    };
    let job = |input: Option<PathBuf>| JobSpec {
        command: args.command,
        input,
        flags: flags.clone(),
    };
    if args.inputs.len() <= 1 {
        return run_one(&job(args.inputs.first().cloned()), args.output.as_deref());
    }
    let dir = args.output.clone().unwrap_or_else(|| PathBuf::from("."));
    if !dir.is_dir() {
        eprintln!("error: with several inputs --output must be an existing directory");
        return EXIT_INPUT;
    }
    let next = AtomicUsize::new(0);
    let worst = Mutex::new(EXIT_PASS);
    std::thread::scope(|scope| {
        for _ in 0..args.jobs.clamp(1, args.inputs.len()) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(input) = args.inputs.get(k) else { break };
                let code = run_one(&job(Some(input.clone())), Some(&batch_target(input, &dir)));
                let mut w = worst.lock().expect("exit code lock");
                *w = (*w).max(code);
            });
        }
    });
    worst.into_inner().expect("exit code lock")
}

fn verify_documents(paths: &[PathBuf]) -> u8 {
    let mut code = EXIT_PASS;
    for p in paths {
        let text = match std::fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                code = code.max(EXIT_INPUT);
                continue;
            }
        };
        match reverify(&text) {
            Ok(r) if r.identical && r.rerun_identical => println!("{}: ok ({})", p.display(), r.command),
            Ok(r) => {
                println!(
                    "{}: mismatch ({}, drift {:.3e}, rerun identical: {})",
                    p.display(),
                    r.command,
                    r.max_drift,
                    r.rerun_identical
                );
                code = code.max(EXIT_VERIFICATION);
            }
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                code = code.max(EXIT_INPUT);
            }
        }
    }
    code
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.action {
        Action::Run(args) => run_command(args),
        Action::Verify { documents } => verify_documents(&documents),
    };
    ExitCode::from(code)
}
