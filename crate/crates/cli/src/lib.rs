//! Command dispatch for the `softconv` binary.
//!
//! Exit codes: 0 when the queried property holds (or the command simply
//! succeeded), 1 when it does not hold, 2 on usage or parse errors. `search`
//! exits 0 with a certificate when it finds one and 1 otherwise.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use softconv::convergence::{converges, gamma_set, ideal_limits, lambda_set};
use softconv::harness::{self, GenConfig, SearchProperty};
use softconv::syntax::parse_ideal;
use softconv::topology::{enumerate_topologies, MAX_ENUMERATION_POINTS};
use softconv::workspace::{parse_workspace, Workspace};
use softconv::{Context, Error, Ideal, Mode, ParameterSet, SoftPoint, SoftSet, Universe};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "softconv", version, about = "Soft topologies, ideals on N and ideal convergence")]
pub struct Cli {
    /// Workspace file to load.
    #[arg(short = 'f', long = "file", global = true)]
    pub file: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Soft,
    Stat,
    Ideal,
    Istar,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Soft => Mode::Soft,
            ModeArg::Stat => Mode::Statistical,
            ModeArg::Ideal => Mode::Ideal,
            ModeArg::Istar => Mode::IdealStar,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    NonUniqueIdealLimit,
    IdealNotSoft,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report whether a topology is valid (files are verified on load).
    CheckTopology {
        #[arg(short)]
        t: String,
    },
    /// Print the closure of a soft set.
    Closure {
        #[arg(short)]
        t: String,
        #[arg(short)]
        s: String,
    },
    /// Is soft set K a neighborhood of point x?
    Neighborhood {
        #[arg(short)]
        t: String,
        #[arg(short)]
        s: String,
        #[arg(short)]
        x: String,
    },
    /// Does sequence W converge to x?
    Converges {
        #[arg(short)]
        t: String,
        #[arg(short)]
        w: String,
        #[arg(short)]
        x: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Ideal name or expression.
        #[arg(long, default_value = "fin")]
        ideal: String,
    },
    /// Points the sequence ideal-converges to.
    Limits(SeqArgs),
    /// Ideal limit points of the sequence.
    Lambda(SeqArgs),
    /// Ideal cluster points of the sequence.
    Gamma(SeqArgs),
    /// Separation properties; holds when Hausdorff.
    Separation {
        #[arg(short)]
        t: String,
    },
    /// Is soft set H dense?
    Dense {
        #[arg(short)]
        t: String,
        #[arg(short)]
        s: String,
    },
    /// Count the topologies on a space with N soft points.
    Enumerate {
        #[arg(long)]
        points: usize,
    },
    /// Run the theorem suite.
    Selftest {
        #[arg(long, default_value_t = GenConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = GenConfig::default().trials)]
        trials: usize,
        /// Directory for counterexample files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search small instances for a certificate.
    Search {
        #[arg(long, value_enum)]
        property: PropertyArg,
        #[arg(long, default_value_t = 3)]
        max_points: usize,
        #[arg(long, default_value_t = 3)]
        max_period: usize,
    },
}

#[derive(Debug, clap::Args)]
pub struct SeqArgs {
    #[arg(short)]
    t: String,
    #[arg(short)]
    w: String,
    #[arg(long, default_value = "fin")]
    ideal: String,
}

impl Command {
    fn needs_workspace(&self) -> bool {
        !matches!(self, Command::Enumerate { .. } | Command::Selftest { .. } | Command::Search { .. })
    }
}

/// A failure that maps to exit code 2.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Usage {
        Usage(e.to_string())
    }
}

impl From<softconv::syntax::ParseError> for Usage {
    fn from(e: softconv::syntax::ParseError) -> Usage {
        Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(i32, String), Usage>;

fn verdict(holds: bool, yes: &str, no: &str) -> (i32, String) {
    if holds {
        (EXIT_HOLDS, format!("{yes}\n"))
    } else {
        (EXIT_FAILS, format!("{no}\n"))
    }
}

fn point_lines(ws: &Workspace, points: &[SoftPoint]) -> String {
    points.iter().map(|&p| ws.context().point_name(p) + "\n").collect()
}

fn point_arg(ws: &Workspace, text: &str) -> std::result::Result<SoftPoint, Usage> {
    Ok(ws.context().parse_point(text)?)
}

fn execute(ws: Option<&Workspace>, command: Command) -> Outcome {
    let ws = match (ws, command.needs_workspace()) {
        (Some(ws), _) => ws,
        (None, false) => return execute_standalone(command),
        (None, true) => return Err(Usage("this command needs a workspace; pass -f FILE".into())),
    };
    match command {
        Command::CheckTopology { t } => {
            let top = ws.topology(&t)?;
            Ok((EXIT_HOLDS, format!("VALID {} open sets on {} soft points\n", top.open_masks().len(), top.points().len())))
        }
        Command::Closure { t, s } => {
            let cl = ws.topology(&t)?.closure(ws.softset(&s)?)?;
            Ok((EXIT_HOLDS, format!("{cl}\n")))
        }
        Command::Neighborhood { t, s, x } => {
            let holds = ws.topology(&t)?.is_neighborhood(ws.softset(&s)?, point_arg(ws, &x)?)?;
            Ok(verdict(holds, "NEIGHBORHOOD", "NOT A NEIGHBORHOOD"))
        }
        Command::Converges { t, w, x, mode, ideal } => {
            let ideal = ws.resolve_ideal(&ideal)?;
            let holds = converges(mode.into(), ws.topology(&t)?, ws.seq(&w)?, &ideal, point_arg(ws, &x)?)?;
            Ok(verdict(holds, "CONVERGES", "DOES NOT CONVERGE"))
        }
        Command::Limits(a) => point_query(ws, a, ideal_limits),
        Command::Lambda(a) => point_query(ws, a, lambda_set),
        Command::Gamma(a) => point_query(ws, a, gamma_set),
        Command::Separation { t } => {
            let top = ws.topology(&t)?;
            let yn = |b: bool| if b { "yes" } else { "no" };
            let text = format!(
                "T1 {}\nHausdorff {}\ndiscrete {}\n",
                yn(top.is_t1()),
                yn(top.is_hausdorff()),
                yn(top.is_discrete())
            );
            Ok((if top.is_hausdorff() { EXIT_HOLDS } else { EXIT_FAILS }, text))
        }
        Command::Dense { t, s } => {
            let holds = ws.topology(&t)?.is_dense(ws.softset(&s)?)?;
            Ok(verdict(holds, "DENSE", "NOT DENSE"))
        }
        other => execute_standalone(other),
    }
}

fn point_query(
    ws: &Workspace,
    a: SeqArgs,
    f: fn(&softconv::SoftTopology, &softconv::EpSoftSeq, &Ideal) -> softconv::Result<Vec<SoftPoint>>,
) -> Outcome {
    let ideal = ws.resolve_ideal(&a.ideal)?;
    let points = f(ws.topology(&a.t)?, ws.seq(&a.w)?, &ideal)?;
    Ok((EXIT_HOLDS, point_lines(ws, &points)))
}

fn execute_standalone(command: Command) -> Outcome {
    match command {
        Command::Enumerate { points } => {
            if points > MAX_ENUMERATION_POINTS {
                return Err(Usage(format!("--points is limited to {MAX_ENUMERATION_POINTS}")));
            }
            let names: Vec<String> = (1..=points.max(1)).map(|i| format!("x{i}")).collect();
            let ctx = Context::new(Universe::new(names)?, ParameterSet::new(["s"])?);
            let space = if points == 0 { SoftSet::empty(&ctx) } else { SoftSet::absolute(&ctx) };
            let count = enumerate_topologies(&space, MAX_ENUMERATION_POINTS)?.count();
            Ok((EXIT_HOLDS, format!("{count}\n")))
        }
        Command::Selftest { seed, trials, out } => {
            let cfg = GenConfig { seed, trials, ..GenConfig::default() };
            let report = harness::run_theorem_suite(&cfg)?;
            let mut text = report.render();
            if let Some(dir) = out {
                fs::create_dir_all(&dir).map_err(|e| Usage(format!("{}: {e}", dir.display())))?;
                for r in &report.results {
                    if let (Some(file), Some(body)) = (r.counterexample_file(), &r.counterexample) {
                        let path = dir.join(file);
                        fs::write(&path, body).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
                        let _ = writeln!(text, "wrote {}", path.display());
                    }
                }
            }
            Ok((if report.passed() { EXIT_HOLDS } else { EXIT_FAILS }, text))
        }
        Command::Search { property, max_points, max_period } => {
            if max_points > MAX_ENUMERATION_POINTS || max_period == 0 {
                return Err(Usage(format!(
                    "--max-points must be at most {MAX_ENUMERATION_POINTS} and --max-period positive"
                )));
            }
            let property = match property {
                PropertyArg::NonUniqueIdealLimit => SearchProperty::NonUniqueIdealLimit,
                PropertyArg::IdealNotSoft => SearchProperty::IdealNotSoft,
            };
            let pool = harness::DEFAULT_IDEAL_POOL
                .iter()
                .map(|s| parse_ideal(s))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(match harness::search(property, max_points, max_period, &pool)? {
                Some(cert) => (EXIT_HOLDS, cert),
                None => (EXIT_FAILS, "NOT FOUND\n".into()),
            })
        }
        _ => Err(Usage("this command needs a workspace; pass -f FILE".into())),
    }
}

fn parse_args<I, T>(argv: I) -> std::result::Result<Cli, (i32, String)>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(argv).map_err(|e| {
        let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_HOLDS };
        (code, e.render().to_string())
    })
}

/// Runs one command line against an already parsed workspace. `argv[0]` is
/// the program name; any `-f` argument is ignored.
pub fn run_command<I, T>(ws: Option<&Workspace>, argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(cli) => finish(execute(ws, cli.command)),
        Err(out) => out,
    }
}

/// Runs one command line against workspace source text. A topology that
/// fails the axioms makes `check-topology` report INVALID with exit 1; every
/// other parse failure exits 2.
pub fn run_text<I, T>(text: Option<&str>, argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match parse_args(argv) {
        Ok(cli) => cli,
        Err(out) => return out,
    };
    let ws = match text.map(parse_workspace).transpose() {
        Ok(ws) => ws,
        Err(e) => {
            let axiom = matches!(e.cause, Some(Error::Axiom(_)));
            return if axiom && matches!(cli.command, Command::CheckTopology { .. }) {
                (EXIT_FAILS, format!("INVALID {e}\n"))
            } else {
                (EXIT_USAGE, format!("error: {e}\n"))
            };
        }
    };
    finish(execute(ws.as_ref(), cli.command))
}

fn finish(outcome: Outcome) -> (i32, String) {
    outcome.unwrap_or_else(|Usage(msg)| (EXIT_USAGE, format!("error: {msg}\n")))
}

/// Entry point used by the binary: reads the `-f` file, if any, and runs.
pub fn run_main(argv: Vec<String>) -> (i32, String) {
    let file = match parse_args(argv.clone()) {
        Ok(cli) => cli.file,
        Err(out) => return out,
    };
    match file {
        Some(path) => match fs::read_to_string(&path) {
            Ok(text) => run_text(Some(&text), argv),
            Err(e) => (EXIT_USAGE, format!("error: {}: {e}\n", path.display())),
        },
        None => run_text(None, argv),
    }
}
