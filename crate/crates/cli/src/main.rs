use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use swcalc::{execute, Cache, CliError, Format, Globals, Request, SqRing, Suite, SwTarget};

#[derive(Parser)]
#[command(name = "swcalc", version, about = "Stiefel-Whitney and mod 2 Chern classes of Spin(n) representations")]
struct Cli {
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    format: FormatArg,

    /// Cache directory; defaults to $SWCALC_CACHE, then the per-user cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Skip the on-disk cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Ceiling on intermediate polynomial sizes during symmetrization.
    #[arg(long, global = true)]
    budget_terms: Option<usize>,

    /// Check full permutation invariance before symmetrizing.
    #[arg(long, global = true)]
    strict_symmetry: bool,

    /// Suppress progress messages on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Lambda2,
    Spin,
    Adjoint,
    F4,
    E6,
    E7,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Bspin,
    Bso,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Paper,
    Properties,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Generators and relations of H*(BSpin(n); Z/2).
    Ring {
        #[arg(long)]
        n: u32,
    },
    /// Reduced Groebner basis of the ideal presenting H*(BSpin(n); Z/2).
    Groebner {
        #[arg(long)]
        n: u32,
    },
    /// Stiefel-Whitney classes of a representation.
    Sw {
        #[arg(value_enum)]
        target: TargetArg,
        #[arg(long)]
        n: Option<u32>,
        /// plus or minus for the half-spin representations.
        #[arg(long)]
        variant: Option<String>,
        #[arg(long = "degree", num_args = 1..)]
        degrees: Vec<u32>,
        /// The total class (the default when no degree is given).
        #[arg(long)]
        total: bool,
    },
    /// Steenrod squares of a polynomial.
    Sq {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        j: Option<u32>,
        #[arg(long, value_enum, default_value_t = RingArg::Bspin)]
        ring: RingArg,
        /// The total square instead of a single Sq^j.
        #[arg(long)]
        total: bool,
        poly: String,
    },
    /// Mod 2 Chern classes of exterior powers of SU(n).
    Chern {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        i: u32,
        #[arg(long = "degree", num_args = 1..)]
        degrees: Vec<u32>,
    },
    /// Kernel of the restriction maps used to solve for a spin class.
    Kernel {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        variant: Option<String>,
    },
    /// Run the golden and property checks.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Run a single check by id.
        #[arg(long)]
        only: Option<String>,
    },
}

fn request(cmd: Command) -> Request {
    match cmd {
        Command::Ring { n } => Request::Ring { n },
        Command::Groebner { n } => Request::Groebner { n },
        Command::Sw {
            target,
            n,
            variant,
            degrees,
            total,
        } => Request::Sw {
            target: match target {
                TargetArg::Lambda2 => SwTarget::Lambda2,
                TargetArg::Spin => SwTarget::Spin,
                TargetArg::Adjoint => SwTarget::Adjoint,
                TargetArg::F4 => SwTarget::F4,
                TargetArg::E6 => SwTarget::E6,
                TargetArg::E7 => SwTarget::E7,
            },
            n,
            variant,
            degrees,
            total,
        },
        Command::Sq { n, j, ring, total, poly } => Request::Sq {
            n,
            j,
            ring: match ring {
                RingArg::Bspin => SqRing::BSpin,
                RingArg::Bso => SqRing::BSO,
            },
            total,
            poly,
        },
        Command::Chern { n, i, degrees } => Request::Chern { n, i, degrees },
        Command::Kernel { n, degree, variant } => Request::Kernel { n, degree, variant },
        Command::Verify { suite, only } => Request::Verify {
            suite: match suite {
                SuiteArg::Paper => Suite::Paper,
                SuiteArg::Properties => Suite::Properties,
                SuiteArg::All => Suite::All,
            },
            only,
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let globals = Globals {
        format: match cli.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        },
        budget_terms: cli.budget_terms,
        strict_symmetry: cli.strict_symmetry,
        progress: !cli.quiet,
    };
    let cache = if cli.no_cache {
        None
    } else {
        Cache::resolve(cli.cache_dir.as_deref())
    };
    let req = request(cli.command);
    let mut stdout = std::io::stdout().lock();
    match execute(&req, &globals, cache.as_ref()) {
        Ok(out) => {
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Verification { report, .. } = &e {
                let _ = stdout.write_all(report.as_bytes());
            }
            eprintln!("swcalc: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
