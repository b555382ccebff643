//! Command-line front end. Artifacts go to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 success/SAT/valid, 1 UNSAT/invalid/mismatch, 2 usage or
//! parse error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::board::{Board, Coloring};
use crate::check::check_coloring;
use crate::ilp::{build_model, export_lp};
use crate::reduction::{reduce, verify_reduction, OneInThreeInstance};
use crate::solver::{SolveStatus, Solver};
use crate::textio::{parse_board, parse_coloring, parse_one_in_three, write_board, write_coloring, write_map};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Failure = 1,
    Usage = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(name = "oredango", version, about = "Oredango puzzle checker, solver and reduction toolkit")]
struct Cli {
    /// Append wall-clock milliseconds to the output as a `# time_ms` line.
    #[arg(long, global = true)]
    time: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a board file is well formed and structurally valid.
    Validate { board: PathBuf },
    /// List rule violations of a coloring.
    Check { board: PathBuf, solution: PathBuf },
    /// Print a solution, all solutions, or the solution count.
    Solve {
        board: PathBuf,
        /// Print every solution (up to --limit).
        #[arg(long)]
        all: bool,
        /// Print the number of solutions (up to --limit).
        #[arg(long, conflicts_with = "all")]
        count: bool,
        #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
        limit: Option<u64>,
    },
    /// Find a solution different from the given ones.
    Another { board: PathBuf, known: Vec<PathBuf> },
    /// Export the 0-1 linear model in LP format.
    Lp {
        board: PathBuf,
        #[arg(short = 'o', value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Reduce a 1-in-3SAT instance to a board.
    Reduce {
        instance: PathBuf,
        #[arg(short = 'o', value_name = "PATH")]
        output: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        map: Option<PathBuf>,
    },
    /// Exhaustively check the reduction on a small instance.
    VerifyReduction { instance: PathBuf },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Problems that end a command early, with their exit status.
struct Abort(ExitStatus, String);

type Step<T> = Result<T, Abort>;

fn read(path: &Path) -> Step<String> {
    fs::read_to_string(path).map_err(|e| Abort(ExitStatus::Usage, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Step<()> {
    fs::write(path, text).map_err(|e| Abort(ExitStatus::Usage, format!("{}: {e}", path.display())))
}

fn load_board(path: &Path) -> Step<Board> {
    parse_board(&read(path)?).map_err(|e| Abort(ExitStatus::Usage, format!("{}:\n{e}", path.display())))
}

fn load_coloring(path: &Path, board: &Board) -> Step<Coloring> {
    parse_coloring(&read(path)?, board).map_err(|e| Abort(ExitStatus::Usage, format!("{}:\n{e}", path.display())))
}

fn load_instance(path: &Path) -> Step<OneInThreeInstance> {
    parse_one_in_three(&read(path)?).map_err(|e| Abort(ExitStatus::Usage, format!("{}:\n{e}", path.display())))
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    ExitStatus::Success
                }
                _ => {
                    let _ = write!(err, "{text}");
                    ExitStatus::Usage
                }
            };
        }
    };
    let started = Instant::now();
    let mut io = Io { out, err };
    let status = match execute(cli.command, &mut io) {
        Ok(s) => s,
        Err(Abort(status, msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            status
        }
    };
    if cli.time {
        let _ = writeln!(io.out, "# time_ms {:.3}", started.elapsed().as_secs_f64() * 1e3);
    }
    status
}

fn emit(io: &mut Io<'_>, text: &str) -> Step<()> {
    io.out
        .write_all(text.as_bytes())
        .map_err(|e| Abort(ExitStatus::Usage, format!("stdout: {e}")))
}

fn execute(command: Command, io: &mut Io<'_>) -> Step<ExitStatus> {
    match command {
        Command::Validate { board } => {
            let text = read(&board)?;
            match parse_board(&text) {
                Ok(b) => {
                    let clued = (0..b.skewers().len()).filter(|&s| b.skewer_clue(s).is_some()).count();
                    emit(
                        io,
                        &format!(
                            "VALID rows={} cols={} circles={} skewers={} clued={}\n",
                            b.rows(),
                            b.cols(),
                            b.num_circles(),
                            b.skewers().len(),
                            clued
                        ),
                    )?;
                    Ok(ExitStatus::Success)
                }
                Err(e) if e.is_structural() => {
                    emit(io, "INVALID\n")?;
                    let _ = writeln!(io.err, "{}:\n{e}", board.display());
                    Ok(ExitStatus::Failure)
                }
                Err(e) => Err(Abort(ExitStatus::Usage, format!("{}:\n{e}", board.display()))),
            }
        }
        Command::Check { board, solution } => {
            let b = load_board(&board)?;
            let coloring = load_coloring(&solution, &b)?;
            let report = check_coloring(&b, &coloring).map_err(|e| Abort(ExitStatus::Usage, e.to_string()))?;
            if report.is_empty() {
                emit(io, "OK\n")?;
                Ok(ExitStatus::Success)
            } else {
                emit(io, &report.to_string())?;
                Ok(ExitStatus::Failure)
            }
        }
        Command::Solve { board, all, count, limit } => {
            let b = load_board(&board)?;
            let solver = Solver::new(&b);
            if !all && !count && limit.is_none() {
                let outcome = solver.solve();
                return match outcome.solutions.first() {
                    Some(s) => {
                        emit(io, &write_coloring(&b, s))?;
                        Ok(ExitStatus::Success)
                    }
                    None => {
                        emit(io, "UNSAT\n")?;
                        Ok(ExitStatus::Failure)
                    }
                };
            }
            let cap = limit.map_or(usize::MAX, |k| usize::try_from(k).unwrap_or(usize::MAX));
            let outcome = solver.enumerate(cap).map_err(|e| Abort(ExitStatus::Usage, e.to_string()))?;
            let capped = outcome.status == SolveStatus::CapReached;
            if count {
                if capped {
                    emit(io, &format!(">={cap}\n"))?;
                } else {
                    emit(io, &format!("{}\n", outcome.solutions.len()))?;
                }
            } else if outcome.solutions.is_empty() {
                emit(io, "UNSAT\n")?;
            } else {
                let grids: Vec<String> = outcome.solutions.iter().map(|s| write_coloring(&b, s)).collect();
                emit(io, &grids.join("\n"))?;
                if capped {
                    let _ = writeln!(io.err, "stopped after {cap} solutions; more exist");
                }
            }
            Ok(if outcome.solutions.is_empty() {
                ExitStatus::Failure
            } else {
                ExitStatus::Success
            })
        }
        Command::Another { board, known } => {
            let b = load_board(&board)?;
            let known = known
                .iter()
                .map(|p| load_coloring(p, &b))
                .collect::<Step<Vec<_>>>()?;
            match Solver::new(&b).another_solution(&known) {
                Ok(Some(s)) => {
                    emit(io, &write_coloring(&b, &s))?;
                    Ok(ExitStatus::Success)
                }
                Ok(None) => {
                    emit(io, "NONE\n")?;
                    Ok(ExitStatus::Failure)
                }
                Err(e) => Err(Abort(ExitStatus::Failure, e.to_string())),
            }
        }
        Command::Lp { board, output } => {
            let b = load_board(&board)?;
            let lp = export_lp(&build_model(&b));
            match output {
                Some(path) => write_file(&path, &lp)?,
                None => emit(io, &lp)?,
            }
            Ok(ExitStatus::Success)
        }
        Command::Reduce { instance, output, map } => {
            let inst = load_instance(&instance)?;
            let reduced = reduce(&inst).map_err(|e| Abort(ExitStatus::Failure, e.to_string()))?;
            let text = write_board(&reduced.board);
            match output {
                Some(path) => write_file(&path, &text)?,
                None => emit(io, &text)?,
            }
            if let Some(path) = map {
                write_file(&path, &write_map(&reduced))?;
            }
            Ok(ExitStatus::Success)
        }
        Command::VerifyReduction { instance } => {
            let inst = load_instance(&instance)?;
            let report = verify_reduction(&inst).map_err(|e| Abort(ExitStatus::Failure, e.to_string()))?;
            emit(io, &format!("{report}\n"))?;
            for f in &report.failures {
                let _ = writeln!(io.err, "{f}");
            }
            Ok(if report.passed() {
                ExitStatus::Success
            } else {
                ExitStatus::Failure
            })
        }
    }
}
