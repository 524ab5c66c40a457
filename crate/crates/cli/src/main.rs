//! `rtc`: synthesize, verify and transform control problems.
//!
//! Exit codes: 0 success, 1 unrealizable or a failed check, 2 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rtc_core::io::{parse_dlts, parse_problem, print_dlts, print_problem, report, to_dot, ProblemFile};
use rtc_core::transform::build_modified_problem;
use rtc_core::{synthesize, verify_controller, Exec, Mode};

#[derive(Parser)]
#[command(name = "rtc", version, about = "Run-to-completion controller synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rtc,
    Standard,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Rtc => Mode::Rtc,
            ModeArg::Standard => Mode::Standard,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and write the controller.
    Synthesize {
        file: PathBuf,
        /// Overrides the file's `mode:` line (default rtc).
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Where to write the controller.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the controller as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Where to write the strategy of the reduced problem (RTC mode).
        #[arg(long)]
        emit_mplus: Option<PathBuf>,
    },
    /// Check a controller against a problem file.
    Verify {
        env_file: PathBuf,
        controller_file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Check cycles sequentially instead of on the thread pool.
        #[arg(long)]
        sequential: bool,
    },
    /// Write the reduced standard problem of an RTC problem.
    Transform {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An error that maps to exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<bool, InputError>;

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), InputError> {
    std::fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<ProblemFile, InputError> {
    parse_problem(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// Writes to stdout; a closed pipe (`rtc ... | head`) is not an error.
fn emit(text: &str) -> Result<(), InputError> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn exec(sequential: bool) -> Exec {
    if sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

/// A controller file is one machine; `environment` is optional.
fn as_machine_file(d: &rtc_core::Dlts) -> String {
    format!("{}environment {}\n", print_dlts(d), d.name())
}

fn cmd_synthesize(
    file: &Path,
    mode: Option<ModeArg>,
    out: Option<&Path>,
    dot: Option<&Path>,
    emit_mplus: Option<&Path>,
) -> Outcome {
    let f = load_problem(file)?;
    let mode = mode.map(Mode::from).or(f.mode).unwrap_or(Mode::Rtc);
    let r = synthesize(&f.problem, mode)?;
    if let Some(m) = &r.controller {
        if let Some(path) = out {
            write(path, &as_machine_file(m))?;
        }
        if let Some(path) = dot {
            write(path, &to_dot(m))?;
        }
    }
    if let (Some(path), Some(m)) = (emit_mplus, &r.mplus) {
        write(path, &as_machine_file(m))?;
    }
    emit(&format!("{:#}\n", report::synthesis_report(&file.display().to_string(), &r)))?;
    Ok(r.realizable)
}

fn cmd_verify(env_file: &Path, controller_file: &Path, mode: Option<ModeArg>, exec: Exec) -> Outcome {
    let f = load_problem(env_file)?;
    let m = parse_dlts(&read(controller_file)?).map_err(|e| InputError(format!("{}: {e}", controller_file.display())))?;
    let mode = mode.map(Mode::from).or(f.mode).unwrap_or(Mode::Rtc);
    let r = verify_controller(&f.problem, &m, mode, exec)?;
    let value = report::verification_report(&env_file.display().to_string(), &controller_file.display().to_string(), &r);
    emit(&format!("{value:#}\n"))?;
    Ok(r.passed())
}

fn cmd_transform(file: &Path, out: Option<&Path>) -> Outcome {
    let f = load_problem(file)?;
    let p = rtc_core::pipeline::normalize(&f.problem)?;
    p.validate(Mode::Rtc)?;
    let text = print_problem(&build_modified_problem(&p)?, Mode::Standard);
    match out {
        Some(path) => write(path, &text)?,
        None => emit(&text)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Synthesize { file, mode, out, dot, emit_mplus } => {
            cmd_synthesize(&file, mode, out.as_deref(), dot.as_deref(), emit_mplus.as_deref())
        }
        Command::Verify { env_file, controller_file, mode, sequential } => {
            cmd_verify(&env_file, &controller_file, mode, exec(sequential))
        }
        Command::Transform { file, out } => cmd_transform(&file, out.as_deref()),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
