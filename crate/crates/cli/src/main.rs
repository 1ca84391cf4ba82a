mod commands;
mod output;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use screenlab::Error;

use crate::output::Output;

#[derive(Parser)]
#[command(
    name = "screenlab",
    version,
    about = "Quantum monodromy numbers, Selberg integrals, Nichols algebras and screening operators"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Absolute (series) or relative (integrals) tolerance.
    #[arg(long, global = true, default_value = "1/100000000", value_parser = parse_positive)]
    pub tol: f64,
    /// Truncation degree for VOA computations.
    #[arg(long, global = true, default_value_t = 4)]
    pub trunc: u32,
    /// Seed for Monte Carlo estimates.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "SCREENLAB_JOBS", default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum monodromy number F₋ from its series (or the ħ-weighted series with --hbar).
    Fmono {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// Upper triangle of m_ij, row-major.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        mm: String,
        #[arg(long)]
        hbar: Option<String>,
        /// Maximal number of shells.
        #[arg(long)]
        shell_cap: Option<usize>,
    },
    /// Reduced quantum monodromy number F̃− from Selberg integrals.
    Ftilde {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        mm: String,
    },
    /// Compares F₋ with the quantum symmetrizer applied to F̃−.
    Symcheck {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        mm: String,
        /// Residual accepted as a pass.
        #[arg(long, default_value = "1/2000", value_parser = parse_positive)]
        threshold: f64,
    },
    /// Generalized Selberg integral over the ordered simplex.
    Selberg {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// Exponents of (1 - z_i); zeros when omitted.
        #[arg(long, allow_hyphen_values = true)]
        mbar: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        mm: String,
    },
    /// Hilbert series of the Nichols algebra of a diagonal braiding q_ij = e^{πi m_ij}.
    Nichols {
        #[arg(long)]
        rank: usize,
        /// Exponents m_ij: the full matrix or its upper triangle with diagonal, row-major.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        nmax: usize,
    },
    /// Product of screening operators applied to e^{φ_λ} or to a VOA element.
    Screen {
        /// Lattice JSON, inline or a file path.
        #[arg(long)]
        lattice: String,
        /// Screening vectors ζ_{α_1} ... ζ_{α_n}, `;`-separated coordinate lists.
        #[arg(long, allow_hyphen_values = true)]
        alphas: String,
        /// Weight λ of the pure exponential.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// VOA element JSON (file path) to act on instead of e^{φ_λ}; direct method only.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ScreenMethod::Formula)]
        method: ScreenMethod,
        /// Extra intermediate degrees kept by the direct method.
        #[arg(long, default_value_t = 0)]
        headroom: u32,
    },
    /// Trivial-level relations between ζ_α and yer_α on a root lattice.
    TrivialLevel {
        #[arg(long, value_parser = ["sl2", "sl3"], default_value = "sl2")]
        root: String,
    },
    /// Recomputes the reference table of F₋ values and their F̃− components.
    PaperTable,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScreenMethod {
    Formula,
    Direct,
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let r = screenlab::numeric::parse_rational(s).map_err(|e| e.to_string())?;
    let x = screenlab::numeric::to_f64(&r);
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("{s} must be positive"))
    }
}

const EXIT_USAGE: u8 = 64;
const EXIT_CHECK_FAILED: u8 = 1;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => EXIT_USAGE,
        Error::Pole(_)
        | Error::Precondition(_)
        | Error::Smallness { .. }
        | Error::FactorialLimit { .. }
        | Error::SizeLimit(_)
        | Error::WindowOverflow(_) => 2,
        Error::Diverged { .. }
        | Error::ShellCap { .. }
        | Error::Budget(_)
        | Error::NonConvergent(_)
        | Error::IllConditioned { .. } => 3,
    }
}

pub enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let c = &cli.common;
    match cli.command {
        Command::Fmono {
            m,
            mm,
            hbar,
            shell_cap,
        } => commands::fmono(c, &m, &mm, hbar.as_deref(), shell_cap),
        Command::Ftilde { m, mm } => commands::ftilde(c, &m, &mm),
        Command::Symcheck {
            n,
            m,
            mm,
            threshold,
        } => commands::symcheck(c, n, &m, &mm, threshold),
        Command::Selberg { m, mbar, mm } => commands::selberg(c, &m, mbar.as_deref(), &mm),
        Command::Nichols { rank, q, nmax } => commands::nichols(c, rank, &q, nmax),
        Command::Screen {
            lattice,
            alphas,
            lambda,
            input,
            method,
            headroom,
        } => commands::screen(
            c,
            &lattice,
            &alphas,
            lambda.as_deref(),
            input.as_deref(),
            method,
            headroom,
        ),
        Command::TrivialLevel { root } => commands::trivial_level(c, &root),
        Command::PaperTable => commands::paper_table(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.common.jobs > 0 {
        // a second initialization only happens in tests
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.common.jobs)
            .build_global();
    }
    let format = cli.common.format;
    let out = cli.common.out.clone();
    match run(cli) {
        Ok(o) => match o.write(format, out.as_deref()) {
            Ok(()) => ExitCode::from(if o.passed { 0 } else { EXIT_CHECK_FAILED }),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(74)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
