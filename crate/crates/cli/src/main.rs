mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use cartan_gamma::{BigReal, PrecisionContext, RootSystemLabel};
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Parser)]
#[command(name = "cartan-gamma", version, about = "Root systems, Gamma products and their verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working precision in significant decimal digits.
    #[arg(long, global = true, env = "CARTAN_GAMMA_DIGITS", default_value_t = 50)]
    digits: u32,

    /// Pass threshold for residuals: a decimal such as 1e-30, or a bare integer k for 10^-k.
    #[arg(long, global = true, default_value = "1e-30")]
    tol: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TypeArg {
    /// Root system label such as E8, B6, a_3.
    #[arg(long = "type", value_parser = parse_label)]
    label: RootSystemLabel,
}

#[derive(Subcommand)]
enum Command {
    /// Simple roots, Cartan matrices, marks and positive roots.
    Roots(TypeArg),
    /// Perron–Frobenius vector of the Cartan matrix by power iteration.
    Pf(TypeArg),
    /// Γ(R,α_i), γ(R,α_i) and the affine entry.
    Gamma(TypeArg),
    /// The words f_(R,i) and their tildes.
    Words(TypeArg),
    /// Koblitz–Ogus membership of f_(R,i) and tilde, or of a word given as JSON.
    Classify {
        #[arg(long = "type", value_parser = parse_label, required_unless_present = "word")]
        label: Option<RootSystemLabel>,
        /// Word as {"N": 12, "coeffs": {"1": -1}}.
        #[arg(long, conflicts_with = "label")]
        word: Option<String>,
    },
    /// Run verifications for one type or the whole battery.
    Verify {
        #[arg(value_enum)]
        which: Check,
        #[arg(long = "type", value_parser = parse_label)]
        label: Option<RootSystemLabel>,
    },
    /// Gauss and Jacobi sums at a degree-one prime.
    Jacobi {
        #[arg(long = "type", value_parser = parse_label, required_unless_present = "word")]
        label: Option<RootSystemLabel>,
        #[arg(long, conflicts_with = "label")]
        word: Option<String>,
        /// Prime p ≡ 1 mod N.
        #[arg(long, conflicts_with = "pmin")]
        prime: Option<u64>,
        /// Search for the least suitable prime at or above this bound.
        #[arg(long)]
        pmin: Option<u64>,
    },
    /// Selberg integrals: closed forms against quadrature.
    Selberg {
        #[arg(long, value_enum, default_value_t = Grid::Default)]
        grid: Grid,
        /// Single real (or with --complex, complex) point instead of a grid; needs --beta.
        #[arg(long, value_parser = parse_rational, requires = "beta")]
        alpha: Option<num_rational::Rational64>,
        #[arg(long, value_parser = parse_rational, requires = "alpha")]
        beta: Option<num_rational::Rational64>,
        #[arg(long, value_parser = parse_rational, default_value = "0")]
        rho: num_rational::Rational64,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        complex: bool,
    },
    /// Γ/trigonometric identity suite.
    Identities,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    #[value(name = "1.1")]
    T11,
    #[value(name = "1.2")]
    T12,
    #[value(name = "1.3")]
    T13,
    #[value(name = "4.2")]
    P42,
    #[value(name = "4.4")]
    C44,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Grid {
    /// Both grids.
    Default,
    Real,
    Complex,
}

fn parse_label(s: &str) -> Result<RootSystemLabel, String> {
    s.parse().map_err(|e: cartan_gamma::Error| e.to_string())
}

fn parse_rational(s: &str) -> Result<num_rational::Rational64, String> {
    s.trim().parse().map_err(|_| format!("not a rational number: {s:?}"))
}

fn parse_tol(s: &str, ctx: PrecisionContext) -> Option<BigReal> {
    if let Ok(k) = s.trim().parse::<i64>() {
        return Some(BigReal::from_i64(10, ctx).powi(-k.abs()));
    }
    BigReal::parse(s, ctx).filter(BigReal::is_positive)
}

/// Failure modes mapped to exit codes.
pub enum CliError {
    /// Bad input: exit 2.
    Usage(String),
    /// A computation failed outright: exit 1.
    Failed(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let ctx = match PrecisionContext::new(cli.digits) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let Some(tol) = parse_tol(&cli.tol, ctx) else {
        eprintln!("error: invalid tolerance {:?}", cli.tol);
        return ExitCode::from(2);
    };

    let result = match cli.command {
        Command::Roots(t) => Ok(commands::roots(t.label)),
        Command::Pf(t) => commands::pf(t.label, ctx, &tol),
        Command::Gamma(t) => commands::gamma(t.label, ctx),
        Command::Words(t) => commands::words(t.label),
        Command::Classify { label, word } => commands::classify(label, word.as_deref()),
        Command::Verify { which, label } => commands::verify(which, label, ctx, &tol),
        Command::Jacobi { label, word, prime, pmin } => {
            commands::jacobi(label, word.as_deref(), prime, pmin, ctx, &tol)
        }
        Command::Selberg { grid, alpha, beta, rho, n, complex } => {
            let point = alpha.zip(beta).map(|(a, b)| (a, b, rho, n, complex));
            commands::selberg(grid, point, ctx)
        }
        Command::Identities => Ok(commands::identities(ctx)),
    };

    match result {
        Ok(doc) => {
            if let Err(e) = doc.emit(cli.format, cli.out.as_deref()) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if doc.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
