mod commands;
mod select;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{CliError, Outcome};

/// Default seed for randomized audits.
pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

#[derive(Parser)]
#[command(name = "crookpar", version, about = "Crooked functions, their codes and line parallelisms")]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Properties of a single function.
    #[command(name = "fn", subcommand)]
    Function(FnCommand),
    /// Build, verify and convert parallelism files.
    #[command(subcommand)]
    Parallelism(ParallelismCommand),
    /// Hamming and Preparata-like codes.
    #[command(subcommand)]
    Code(CodeCommand),
    /// Equivalence witnesses between parallelisms.
    #[command(subcommand)]
    Equiv(EquivCommand),
    /// The relaxed conditions.
    #[command(subcommand)]
    Relaxed(RelaxedCommand),
    /// Field tables.
    #[command(subcommand)]
    Field(FieldCommand),
}

#[derive(Subcommand)]
enum FnCommand {
    /// APN, permutation, crookedness and degree report; exit 1 if not crooked.
    Check {
        #[command(flatten)]
        func: FnArgs,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write the lookup table of a catalogued function.
    Export {
        #[command(flatten)]
        func: FnArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ParallelismCommand {
    /// Build Π_f from the coloring c_f and write it as JSON.
    Build {
        #[command(flatten)]
        func: FnArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a parallelism file is a parallelism of PG(n, 2).
    Verify { file: PathBuf },
    /// Rewrite a parallelism file in normalized JSON or plain text.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CodeCommand {
    /// List the words of P_f (or of the Hamming code) at length 15.
    Enumerate {
        #[command(flatten)]
        func: FnArgs,
        #[arg(long, value_enum, default_value_t = CodeKind::Preparata)]
        code: CodeKind,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Partition the Hamming code into translates. With `--codewords`, the
    /// base code is read from a file (`--n` alone selects the length);
    /// otherwise the lines are grouped by translate and compared with the
    /// parallelism from c_f.
    Partition {
        #[command(flatten)]
        func: FnArgs,
        #[arg(long)]
        codewords: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Assign translate labels to random Hamming codewords.
    Audit {
        #[command(flatten)]
        func: FnArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum EquivCommand {
    /// Check σ c_{f'} = c_f κ for a witness file (f = left, f' = right).
    Verify {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Search for a collineation between Π_left and Π_right.
    Search {
        /// Function spec, LUT file, or parallelism JSON file.
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Node limit.
        #[arg(long, default_value_t = crookpar::equivalence::DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum RelaxedCommand {
    /// Evaluate the relaxed conditions on a list of functions.
    Scan {
        /// Function specs; defaults to the non-quadratic catalog at n = 5, 7.
        specs: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum FieldCommand {
    /// Print the modulus used for each degree.
    ListModuli {
        #[arg(long, default_value_t = crookpar::gf2::MAX_DEGREE)]
        max: u32,
    },
}

/// Selects a function by catalog parameters, spec string or LUT file.
#[derive(Args, Clone, Default)]
pub struct FnArgs {
    /// gold, bcl, trivariate, inverse, kasami or welch.
    #[arg(long)]
    family: Option<String>,
    /// Textual spec such as `gold:1:5`.
    #[arg(long, conflicts_with_all = ["family", "lut"])]
    spec: Option<String>,
    #[arg(long, conflicts_with = "family")]
    lut: Option<PathBuf>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    i: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Definition method up to its limit, then the hyperplane method.
    Auto,
    Definition,
    Hyperplane,
    /// Run both and require agreement.
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodeKind {
    Preparata,
    Hamming,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot start {t} threads: {e}")))?;
    }
    match cli.command {
        Command::Function(FnCommand::Check { func, method, format }) => {
            commands::fn_check(&func, method, format)
        }
        Command::Function(FnCommand::Export { func, out }) => commands::fn_export(&func, out),
        Command::Parallelism(ParallelismCommand::Build { func, out }) => {
            commands::parallelism_build(&func, out)
        }
        Command::Parallelism(ParallelismCommand::Verify { file }) => {
            commands::parallelism_verify(&file)
        }
        Command::Parallelism(ParallelismCommand::Export { file, format, out }) => {
            commands::parallelism_export(&file, format, out)
        }
        Command::Code(CodeCommand::Enumerate { func, code, out, format }) => {
            commands::code_enumerate(&func, code, out, format)
        }
        Command::Code(CodeCommand::Partition { func, codewords, out, format }) => {
            commands::code_partition(&func, codewords, out, format)
        }
        Command::Code(CodeCommand::Audit { func, samples, seed, format }) => {
            commands::code_audit(&func, samples, seed, format)
        }
        Command::Equiv(EquivCommand::Verify { left, right, witness }) => {
            commands::equiv_verify(&left, &right, &witness)
        }
        Command::Equiv(EquivCommand::Search { left, right, budget, out, format }) => {
            commands::equiv_search(&left, &right, budget, out, format)
        }
        Command::Relaxed(RelaxedCommand::Scan { specs, out, format }) => {
            commands::relaxed_scan(&specs, out, format)
        }
        Command::Field(FieldCommand::ListModuli { max }) => commands::list_moduli(max),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            if code == 2 {
                CliError::usage(e.kind().to_string()).emit();
            }
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            e.emit();
            ExitCode::from(e.exit)
        }
    }
}
