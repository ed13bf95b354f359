use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use gpalg_cli::{run_batch, run_file, Format, RunOptions, Verb};

/// Exact computations with finite-dimensional algebras, quivers and their
/// representations.
///
/// Exit codes: 0 all checks pass, 1 a certificate failed, 2 input error,
/// 3 input outside the supported domain.
#[derive(Parser, Debug)]
#[command(name = "gpa", version)]
struct Args {
    verb: Verb,
    /// Workspace file. Not used with `--all`.
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Number of graded components for `grade`.
    #[arg(long)]
    m: Option<usize>,
    /// Cap on the number of enumerated basis paths.
    #[arg(long, default_value_t = gpalg::gpa::DEFAULT_MAX_PATHS)]
    max_paths: usize,
    /// Algebra, quiver or representation to act on.
    #[arg(long)]
    name: Option<String>,
    /// Include basis data in the report.
    #[arg(long)]
    basis: bool,
    /// Run on every `.alg` file of this directory.
    #[arg(long, requires = "out", conflicts_with = "file")]
    all: Option<PathBuf>,
    /// Output directory for `--all`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn seed_from_env() -> Result<u64, String> {
    match std::env::var("GPA_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| format!("GPA_SEED must be an unsigned integer, got `{s}`")),
        Err(_) => Ok(0),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let seed = match seed_from_env() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        m: args.m,
        max_paths: args.max_paths,
        name: args.name,
        basis: args.basis,
        seed,
    };
    if let (Some(dir), Some(out)) = (&args.all, &args.out) {
        return match run_batch(dir, out, args.verb, &opts, args.format) {
            Ok(results) => {
                let mut worst = 0;
                for (file, code) in results {
                    println!("{} {code}", file.display());
                    worst = worst.max(code);
                }
                ExitCode::from(worst as u8)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        };
    }
    let Some(file) = args.file else {
        eprintln!("error: a workspace file or --all DIR --out DIR is required");
        return ExitCode::from(2);
    };
    let (code, text) = run_file(&file, args.verb, &opts, args.format);
    if code == 2 || code == 3 {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    ExitCode::from(code as u8)
}
